"""Numerical laboratory for deep-zero problems in the Bargmann-Fock space."""

from .bargmann import (
    L2Function,
    bargmann_at,
    bargmann_forward,
    bargmann_inverse,
    l2_inner,
    l2_norm2,
    modulate,
    reflect,
)
from .deep_zero import (
    IndexSet,
    Recovery,
    SeminormForm,
    SweepRecord,
    counterexample_eta,
    counterexample_masses,
    cos_weight_bound,
    pointwise_probe,
    recover_phi,
    rotation_reduce,
    sampling_constant,
    sampling_ratio,
    seminorm_direct,
    seminorm_gram,
    symmetrized_seminorm,
    translate_pair_bound,
    xi_eta,
)
from .errors import (
    AsymmetricGridError,
    ConfigError,
    DeepZeroError,
    DegreeOverflowError,
    EigenSolverError,
    GridMismatchError,
    GridUnderresolvedError,
    QuadratureError,
    TailLeakageError,
)
from .fock import (
    FockVector,
    evaluate,
    from_taylor,
    inner,
    kernel_vector,
    norm,
    to_taylor,
)
from .operators import (
    OperatorMatrix,
    RigidMotion,
    apply_rigid_motion,
    commutation_check,
    displacement_matrix,
    translate_decay_probe,
)
from .quadrature import QuadratureGrid, gauss_hermite_grid, uniform_grid

__version__ = "0.1.0"
