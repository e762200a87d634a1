"""Exception types raised by deepzero."""


class DeepZeroError(Exception):
    """Base class for all deepzero errors."""


class DegreeOverflowError(DeepZeroError, OverflowError):
    pass


class TailLeakageError(DeepZeroError):
    """Truncated operator lost more mass than the caller tolerates."""


class GridUnderresolvedError(DeepZeroError):
    pass


class AsymmetricGridError(DeepZeroError, ValueError):
    pass


class GridMismatchError(DeepZeroError, ValueError):
    pass


class QuadratureError(DeepZeroError):
    """Panel quadrature failed to reach its tolerance."""


class EigenSolverError(DeepZeroError):
    """Dense and inverse-iteration estimates of the smallest eigenvalue disagree."""


class ConfigError(DeepZeroError, ValueError):
    pass
