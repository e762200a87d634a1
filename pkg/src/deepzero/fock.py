"""Truncated coefficient vectors in the Bargmann-Fock space.

Elements are stored in the orthonormal basis ``e_j(z) = z**j / sqrt(j!)``,
so every Fock-space norm and inner product is plain Euclidean arithmetic on
the coefficient array.  Taylor coefficients are reachable through
:func:`from_taylor` / :func:`to_taylor`.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np
from scipy.special import gammaln

from .errors import DegreeOverflowError

# largest j with sqrt(j!) finite in double precision
_LOG_FLOAT_MAX = math.log(np.finfo(float).max)


def _as_coeffs(values) -> np.ndarray:
    arr = np.array(values, dtype=complex).reshape(-1)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class FockVector:
    """Coefficients ``c_j`` of ``f = sum_j c_j e_j`` for ``j < degree``."""

    coeffs: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "coeffs", _as_coeffs(self.coeffs))

    @property
    def degree(self) -> int:
        return self.coeffs.shape[0]

    @classmethod
    def basis(cls, j: int, degree: int | None = None) -> "FockVector":
        n = j + 1 if degree is None else degree
        if not 0 <= j < n:
            raise ValueError(f"basis index {j} outside degree {n}")
        c = np.zeros(n, dtype=complex)
        c[j] = 1.0
        return cls(c)

    @classmethod
    def zeros(cls, degree: int) -> "FockVector":
        return cls(np.zeros(degree, dtype=complex))

    def padded(self, degree: int) -> "FockVector":
        if degree < self.degree:
            raise ValueError("padding cannot shrink a vector")
        c = np.zeros(degree, dtype=complex)
        c[: self.degree] = self.coeffs
        return FockVector(c)

    def truncated(self, degree: int) -> "FockVector":
        return FockVector(self.coeffs[:degree])

    # arithmetic with implicit zero-extension
    def _aligned(self, other: "FockVector") -> tuple[np.ndarray, np.ndarray]:
        n = max(self.degree, other.degree)
        return self.padded(n).coeffs, other.padded(n).coeffs

    def __add__(self, other: "FockVector") -> "FockVector":
        a, b = self._aligned(other)
        return FockVector(a + b)

    def __sub__(self, other: "FockVector") -> "FockVector":
        a, b = self._aligned(other)
        return FockVector(a - b)

    def __mul__(self, scalar: complex) -> "FockVector":
        return FockVector(self.coeffs * scalar)

    __rmul__ = __mul__

    def __truediv__(self, scalar: complex) -> "FockVector":
        return FockVector(self.coeffs / scalar)

    def __neg__(self) -> "FockVector":
        return FockVector(-self.coeffs)

    def __repr__(self) -> str:
        return f"FockVector(degree={self.degree})"

    def to_json(self) -> str:
        return json.dumps(
            {
                "degree": self.degree,
                "re": self.coeffs.real.tolist(),
                "im": self.coeffs.imag.tolist(),
            }
        )

    @classmethod
    def from_json(cls, text: str) -> "FockVector":
        data = json.loads(text)
        c = np.asarray(data["re"], float) + 1j * np.asarray(data["im"], float)
        if c.shape[0] != data["degree"]:
            raise ValueError("degree does not match coefficient length")
        return cls(c)


def inner(u: FockVector, v: FockVector) -> complex:
    """Fock inner product ``<u, v>``, linear in ``u``."""
    a, b = u._aligned(v)
    return complex(np.vdot(b, a))


def norm(v: FockVector) -> float:
    return float(np.linalg.norm(v.coeffs))


def _scaled_powers(z: np.ndarray, degree: int) -> np.ndarray:
    """Rows ``z**j / sqrt(j!)`` for j < degree, built by incremental factors."""
    out = np.empty(z.shape + (degree,), dtype=complex)
    if degree == 0:
        return out
    out[..., 0] = 1.0
    for j in range(1, degree):
        out[..., j] = out[..., j - 1] * (z / math.sqrt(j))
    return out


def evaluate(v: FockVector, z):
    """Point value ``f(z) = sum_j c_j z**j / sqrt(j!)``.

    Accepts a scalar or an array of points.  The error against the untruncated
    function is at most ``||tail|| * exp(|z|**2 / 2)`` where ``tail`` is the
    discarded coefficient block (see :func:`evaluation_bound`).
    """
    zz = np.asarray(z, dtype=complex)
    vals = _scaled_powers(zz, v.degree) @ v.coeffs
    if zz.ndim == 0:
        return complex(vals)
    return vals


def evaluation_bound(v: FockVector, z) -> np.ndarray | float:
    """Pointwise bound ``||f|| * exp(|z|**2 / 2)``; attained only by kernel multiples."""
    zz = np.abs(np.asarray(z, dtype=complex))
    out = norm(v) * np.exp(0.5 * zz**2)
    return float(out) if np.ndim(out) == 0 else out


def kernel_vector(w: complex, degree: int) -> FockVector:
    """Truncated reproducing kernel ``K(., w) = exp(z * conj(w))``."""
    if degree < 1:
        raise ValueError("degree must be at least 1")
    return FockVector(_scaled_powers(np.asarray(np.conj(w), dtype=complex), degree))


def _check_taylor_degree(n: int) -> np.ndarray:
    j = np.arange(n)
    half_log_fact = 0.5 * gammaln(j + 1)
    if n and half_log_fact[-1] >= _LOG_FLOAT_MAX:
        raise DegreeOverflowError(
            f"degree too large for Taylor representation (sqrt({n - 1}!) overflows)"
        )
    return np.exp(half_log_fact)


def from_taylor(taylor: Sequence[complex]) -> FockVector:
    """Build a FockVector from Taylor coefficients ``f^(j)(0) / j!``."""
    t = np.asarray(taylor, dtype=complex).reshape(-1)
    return FockVector(t * _check_taylor_degree(t.shape[0]))


def to_taylor(v: FockVector) -> np.ndarray:
    return v.coeffs / _check_taylor_degree(v.degree)


def derivatives_at_zero(v: FockVector) -> np.ndarray:
    """``f^(j)(0) = sqrt(j!) * c_j``."""
    return v.coeffs * _check_taylor_degree(v.degree)


def random_vector(rng: np.random.Generator, degree: int, unit: bool = False) -> FockVector:
    c = rng.standard_normal(degree) + 1j * rng.standard_normal(degree)
    if unit:
        c /= np.linalg.norm(c)
    return FockVector(c)
