"""Bargmann transform between sampled L^2(R) functions and Fock coefficients.

The transform is

    B phi(z) = (2 pi)**(-1/4) int exp(-i z t + z**2/2 - t**2/4) phi(t) dt,

and its coefficients are ``c_j = <phi, h_j>`` for the preimage family
``h_j = B^* e_j``.  Expanding the kernel with the Hermite generating function
gives ``h_j(t) = i**j 2**(-1/4) psi_j(t / sqrt 2)`` with ``psi_j`` the
orthonormal Hermite functions; :func:`preimage_gram` checks orthonormality on
any grid, and the tests compare against direct quadrature of the kernel.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from .errors import AsymmetricGridError, GridMismatchError, GridUnderresolvedError
from .fock import FockVector
from .quadrature import QuadratureGrid

DEFAULT_NODES = 201
CHECK_TOL = 1e-8
_NORM = (2 * math.pi) ** -0.25


@dataclass(frozen=True, eq=False)
class L2Function:
    """Values of a function on the nodes of a quadrature grid.

    ``source`` optionally keeps the callable the samples came from, so the
    transform can resample on a finer grid as a self-check.
    """

    grid: QuadratureGrid
    values: np.ndarray
    source: Optional[Callable[[np.ndarray], np.ndarray]] = field(default=None, repr=False)

    def __post_init__(self):
        v = np.array(self.values, dtype=complex).reshape(-1)
        if v.shape[0] != len(self.grid):
            raise ValueError("values length does not match grid")
        v.setflags(write=False)
        object.__setattr__(self, "values", v)

    @classmethod
    def sample(cls, func: Callable[[np.ndarray], np.ndarray], grid: QuadratureGrid) -> "L2Function":
        return cls(grid, func(grid.nodes), func)

    def resample(self, grid: QuadratureGrid) -> "L2Function":
        if self.source is None:
            raise ValueError("function has no source callable to resample")
        return L2Function.sample(self.source, grid)

    def _combine(self, other: "L2Function", op) -> "L2Function":
        _same_grid(self, other)
        src = None
        if self.source is not None and other.source is not None:
            f, g = self.source, other.source
            src = lambda t: op(f(t), g(t))  # noqa: E731
        return L2Function(self.grid, op(self.values, other.values), src)

    def __add__(self, other: "L2Function") -> "L2Function":
        return self._combine(other, np.add)

    def __sub__(self, other: "L2Function") -> "L2Function":
        return self._combine(other, np.subtract)

    def __mul__(self, scalar: complex) -> "L2Function":
        src = None
        if self.source is not None:
            f = self.source
            src = lambda t: scalar * f(t)  # noqa: E731
        return L2Function(self.grid, scalar * self.values, src)

    __rmul__ = __mul__

    def to_csv_rows(self) -> list[tuple[float, float, float, float]]:
        """Rows ``(t, re, im, weight)``."""
        return list(
            zip(
                self.grid.nodes.tolist(),
                self.values.real.tolist(),
                self.values.imag.tolist(),
                self.grid.weights.tolist(),
            )
        )


def _same_grid(u: L2Function, v: L2Function) -> None:
    if u.grid is v.grid:
        return
    if len(u.grid) != len(v.grid) or not (
        np.array_equal(u.grid.nodes, v.grid.nodes) and np.array_equal(u.grid.weights, v.grid.weights)
    ):
        raise GridMismatchError("grid mismatch")


def l2_inner(u: L2Function, v: L2Function) -> complex:
    """``sum_i w_i u(t_i) conj(v(t_i))``."""
    _same_grid(u, v)
    return complex(np.sum(u.grid.weights * u.values * np.conj(v.values)))


def l2_norm2(u: L2Function) -> float:
    return float(np.sum(u.grid.weights * np.abs(u.values) ** 2))


def hermite_functions(x: np.ndarray, degree: int) -> np.ndarray:
    """Orthonormal Hermite functions ``psi_j(x)``, shape ``(degree, len(x))``."""
    x = np.asarray(x, dtype=float)
    out = np.empty((degree,) + x.shape)
    if degree == 0:
        return out
    with np.errstate(under="ignore"):
        out[0] = math.pi**-0.25 * np.exp(-0.5 * x * x)
    if degree > 1:
        out[1] = math.sqrt(2.0) * x * out[0]
    for k in range(2, degree):
        out[k] = math.sqrt(2.0 / k) * x * out[k - 1] - math.sqrt((k - 1) / k) * out[k - 2]
    return out


def preimage_basis(t: np.ndarray, degree: int) -> np.ndarray:
    """``h_j(t) = B^* e_j (t)`` for ``j < degree``; rows indexed by ``j``."""
    psi = hermite_functions(np.asarray(t, float) / math.sqrt(2.0), degree)
    phase = 1j ** np.arange(degree)
    return 2**-0.25 * phase[:, None] * psi


def preimage_gram(grid: QuadratureGrid, degree: int) -> np.ndarray:
    h = preimage_basis(grid.nodes, degree)
    return (h * grid.weights) @ h.conj().T


def _coefficients(phi: L2Function, degree: int) -> np.ndarray:
    h = preimage_basis(phi.grid.nodes, degree)
    return np.conj(h) @ (phi.grid.weights * phi.values)


def bargmann_forward(
    phi: L2Function, degree: int, check: bool = True, tol: float = CHECK_TOL
) -> FockVector:
    """Fock coefficients ``c_j = <B phi, e_j>`` for ``j < degree``.

    When ``phi`` carries its source callable and ``check`` is set, the
    coefficients are recomputed on a grid with twice the nodes; a change above
    ``tol`` (relative to ``max(1, ||c||)``) raises
    :class:`GridUnderresolvedError`.
    """
    if degree < 1:
        raise ValueError("degree must be at least 1")
    c = _coefficients(phi, degree)
    if check and phi.source is not None and phi.grid.kind != "adaptive-panel":
        fine = _coefficients(phi.resample(phi.grid.refined()), degree)
        change = float(np.abs(fine - c).max())
        if change > tol * max(1.0, float(np.linalg.norm(c))):
            raise GridUnderresolvedError(
                f"grid underresolved: doubling nodes changed coefficients by {change:.3e}"
            )
    return FockVector(c)


def bargmann_inverse(v: FockVector, grid: QuadratureGrid, tol: float = CHECK_TOL) -> L2Function:
    """``B^* v = sum_j c_j h_j`` sampled on ``grid``.

    The preimage family must be orthonormal on the grid to ``tol``; otherwise
    the samples cannot represent ``v`` and :class:`GridUnderresolvedError` is
    raised.
    """
    gram = preimage_gram(grid, v.degree)
    defect = float(np.abs(gram - np.eye(v.degree)).max()) if v.degree else 0.0
    if defect > tol:
        raise GridUnderresolvedError(
            f"grid underresolved: preimage Gram defect {defect:.3e} at degree {v.degree}"
        )
    coeffs = v.coeffs.copy()
    src = lambda t: coeffs @ preimage_basis(t, coeffs.shape[0])  # noqa: E731
    return L2Function(grid, coeffs @ preimage_basis(grid.nodes, v.degree), src)


def bargmann_kernel(z, t: np.ndarray) -> np.ndarray:
    """The displayed kernel ``(2 pi)**(-1/4) exp(-i z t + z**2/2 - t**2/4)``."""
    zz = np.asarray(z, dtype=complex)[..., None]
    return _NORM * np.exp(-1j * zz * t + 0.5 * zz * zz - 0.25 * t * t)


def bargmann_at(phi: L2Function, z) -> np.ndarray | complex:
    """``B phi(z)`` by direct quadrature of the kernel on ``phi``'s grid."""
    vals = bargmann_kernel(z, phi.grid.nodes) @ (phi.grid.weights * phi.values)
    return complex(vals) if np.ndim(vals) == 0 else vals


def _check_real(beta) -> float:
    if isinstance(beta, complex) or np.iscomplexobj(beta):
        if complex(beta).imag != 0:
            raise TypeError("modulation parameter must be real")
        beta = complex(beta).real
    return float(beta)


def modulate(phi: L2Function, beta: float) -> L2Function:
    """``phi_beta(t) = exp(i beta t) phi(t)``."""
    b = _check_real(beta)
    if b == 0:
        return phi
    src = None
    if phi.source is not None:
        f = phi.source
        src = lambda t: np.exp(1j * b * t) * f(t)  # noqa: E731
    return L2Function(phi.grid, np.exp(1j * b * phi.grid.nodes) * phi.values, src)


def reflect(phi: L2Function) -> L2Function:
    """``phi(-t)``, by reversing samples on a symmetric grid."""
    if not phi.grid.is_symmetric:
        raise AsymmetricGridError("asymmetric grid: reflection needs nodes symmetric about 0")
    src = None
    if phi.source is not None:
        f = phi.source
        src = lambda t: f(-t)  # noqa: E731
    return L2Function(phi.grid, phi.values[::-1], src)
