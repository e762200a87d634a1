"""Truncated matrices of Fock translates, rotations and rigid motions.

``U_alpha f(z) = exp(-|alpha|**2/2 + conj(alpha) z) f(z - alpha)`` expands in
powers of ``z`` to a finite sum per matrix entry.  That sum is a generalized
Laguerre polynomial; evaluating it by direct alternating summation loses every
digit around degree 100, so entries go through the Laguerre recurrence with a
log-gamma prefactor instead.
"""
from __future__ import annotations

import cmath
import json
import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.special import eval_genlaguerre, gammaln

from .errors import TailLeakageError
from .fock import FockVector, evaluate

AUTO_LEAK_TOL = 1e-12


@dataclass(frozen=True)
class RigidMotion:
    """Element ``(rho, alpha)`` acting by ``z -> rho z - alpha``."""

    rho: complex = 1.0
    alpha: complex = 0.0

    def __post_init__(self):
        object.__setattr__(self, "rho", complex(self.rho))
        object.__setattr__(self, "alpha", complex(self.alpha))
        if abs(abs(self.rho) - 1.0) >= 1e-12:
            raise ValueError(f"rotation part must be unimodular, got |rho|={abs(self.rho)}")

    def __matmul__(self, other: "RigidMotion") -> "RigidMotion":
        # (rho', alpha')(rho, alpha) = (rho' rho, rho' alpha + alpha')
        return RigidMotion(self.rho * other.rho, self.rho * other.alpha + self.alpha)

    def map_point(self, z):
        return self.rho * np.asarray(z) - self.alpha


def rigid_phase(first: RigidMotion, second: RigidMotion) -> complex:
    """Phase ``c`` in ``U_first U_second = c * U_(second @ first)``."""
    return cmath.exp(-1j * (first.alpha * second.rho * second.alpha.conjugate()).imag)


def commutation_phase(alpha: complex, beta: complex) -> complex:
    """``exp(-i Im(alpha conj(beta)))`` with ``U_a U_b = phase * U_(a+b)``."""
    return cmath.exp(-1j * (complex(alpha) * complex(beta).conjugate()).imag)


@dataclass(frozen=True, eq=False)
class OperatorMatrix:
    entries: np.ndarray
    tail_leak: float

    @property
    def rows(self) -> int:
        return self.entries.shape[0]

    @property
    def cols(self) -> int:
        return self.entries.shape[1]

    def apply(self, v: FockVector) -> FockVector:
        if v.degree > self.cols:
            raise ValueError(f"vector degree {v.degree} exceeds operator columns {self.cols}")
        return FockVector(self.entries[:, : v.degree] @ v.coeffs)

    def unitarity_defect(self) -> float:
        """``max |D^H D - I|`` over the column block."""
        g = self.entries.conj().T @ self.entries
        return float(np.abs(g - np.eye(self.cols)).max())

    def to_dict(self) -> dict:
        return {
            "rows": self.rows,
            "cols": self.cols,
            "tail_leak": self.tail_leak,
            "re": self.entries.real.tolist(),
            "im": self.entries.imag.tolist(),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    @classmethod
    def from_dict(cls, data: dict) -> "OperatorMatrix":
        e = np.asarray(data["re"], float) + 1j * np.asarray(data["im"], float)
        return cls(e.reshape(data["rows"], data["cols"]), float(data["tail_leak"]))


def _tail_leak(entries: np.ndarray) -> float:
    mass = np.sum(np.abs(entries) ** 2, axis=0)
    return float(max(0.0, np.max(1.0 - mass))) if entries.size else 0.0


@lru_cache(maxsize=256)
def _displacement_entries(alpha: complex, rows: int, cols: int) -> np.ndarray:
    if alpha == 0:
        d = np.eye(rows, cols, dtype=complex)
        d.setflags(write=False)
        return d
    r = abs(alpha)
    x = r * r
    m = np.arange(rows)[:, None]
    n = np.arange(cols)[None, :]
    lo = np.minimum(m, n)
    gap = np.abs(m - n)
    lag = eval_genlaguerre(lo, gap, x)
    logmag = 0.5 * (gammaln(lo + 1) - gammaln(lo + gap + 1)) + gap * math.log(r) - 0.5 * x
    # below the diagonal the power is conj(alpha)^(m-n); above it (-alpha)^(n-m)
    unit = alpha / r
    phase = np.where(m >= n, np.conj(unit) ** gap, (-unit) ** gap)
    with np.errstate(under="ignore"):
        d = np.exp(logmag) * lag * phase
    if not np.all(np.isfinite(d)):
        raise FloatingPointError(
            f"displacement entries overflowed for alpha={alpha}, rows={rows}"
        )
    d.setflags(write=False)
    return d


def displacement_matrix(alpha: complex, rows: int, cols: int) -> OperatorMatrix:
    """Entries ``<U_alpha e_n, e_m>`` for ``m < rows``, ``n < cols``.

    Below the diagonal the entry is
    ``sqrt(n!/m!) conj(alpha)**(m-n) exp(-|alpha|**2/2) L_n^(m-n)(|alpha|**2)``,
    and ``(-alpha)**(n-m)`` replaces the power above it.  ``tail_leak`` is the
    largest column mass lost to the row cut.
    """
    if not rows >= cols >= 1:
        raise ValueError("need rows >= cols >= 1")
    d = _displacement_entries(complex(alpha), int(rows), int(cols))
    return OperatorMatrix(d, _tail_leak(d))


def initial_pad(alpha: complex, cols: int) -> int:
    a = abs(alpha)
    return math.ceil(8 * (a * a + a * math.sqrt(cols))) + 8


def auto_pad(alpha: complex, cols: int, tol: float = AUTO_LEAK_TOL) -> int:
    """Row padding for a ``cols``-column truncation with leak below ``tol``.

    Starts at ``ceil(8(|alpha|^2 + |alpha| sqrt(cols))) + 8`` and doubles.
    """
    if alpha == 0:
        return 0
    pad = initial_pad(alpha, cols)
    while displacement_matrix(alpha, cols + pad, cols).tail_leak >= tol:
        pad *= 2
    return pad


def resolve_pad(pad, alpha: complex, cols: int) -> int:
    if pad is None or pad == "auto":
        return auto_pad(alpha, cols)
    pad = int(pad)
    if pad < 0:
        raise ValueError("pad must be nonnegative")
    return pad


def padded_displacement(alpha: complex, cols: int, pad="auto") -> OperatorMatrix:
    return displacement_matrix(alpha, cols + resolve_pad(pad, alpha, cols), cols)


def check_leak(op: OperatorMatrix, tol: float | None) -> None:
    if tol is not None and op.tail_leak > tol:
        raise TailLeakageError(
            f"excessive tail leakage {op.tail_leak:.3e} > {tol:.3e}; increase pad"
        )


def rotate(v: FockVector, rho: complex) -> FockVector:
    """``f(z) -> f(rho z)``: coefficient ``c_j`` picks up ``rho**j``."""
    rho = complex(rho)
    j = np.arange(v.degree)
    if rho in (1, -1, 1j, -1j):
        return FockVector(v.coeffs * rho**j)
    # phases from the angle keep |rho**j| = 1 to rounding at any j
    return FockVector(v.coeffs * np.exp(1j * cmath.phase(rho) * j))


def reflect(v: FockVector) -> FockVector:
    return FockVector(v.coeffs * (1 - 2 * (np.arange(v.degree) % 2)))


def apply_rigid_motion(
    g: RigidMotion, v: FockVector, pad="auto", tol: float | None = None
) -> FockVector:
    """Coefficients of ``U_(rho, alpha) f`` on ``degree + pad`` rows.

    ``U_(rho, alpha) = R_rho U_alpha`` with ``R_rho f(z) = f(rho z)``.
    """
    if g.alpha == 0:
        p = 0 if pad == "auto" or pad is None else int(pad)
        moved = v.padded(v.degree + p)
    else:
        op = padded_displacement(g.alpha, v.degree, pad)
        check_leak(op, tol)
        moved = op.apply(v)
    if g.rho == -1:
        return reflect(moved)
    if g.rho == 1:
        return moved
    return rotate(moved, g.rho)


def commutation_check(
    alpha: complex, beta: complex, degree: int, pad="auto", tol: float | None = None
) -> tuple[complex, float]:
    """Phase and residual of ``U_alpha U_beta = phase * U_(alpha+beta)``.

    The residual is the largest column norm of the difference over the first
    ``degree`` basis vectors.  Rows are padded twice: once for ``U_beta`` and
    once more for ``U_alpha`` acting on its output.
    """
    if degree < 1:
        raise ValueError("degree must be at least 1")
    alpha, beta = complex(alpha), complex(beta)
    span = abs(alpha) + abs(beta)
    p = resolve_pad(pad, span, degree)
    inner_rows = degree + p
    outer_rows = inner_rows + p
    d_beta = displacement_matrix(beta, inner_rows, degree)
    d_alpha = displacement_matrix(alpha, outer_rows, inner_rows)
    d_sum = displacement_matrix(alpha + beta, outer_rows, degree)
    for op in (d_beta, d_sum):
        check_leak(op, tol)
    phase = commutation_phase(alpha, beta)
    diff = d_alpha.entries @ d_beta.entries - phase * d_sum.entries
    return phase, float(np.linalg.norm(diff, axis=0).max())


def translate_decay_probe(f: FockVector, alpha: complex, z: complex, n_max: int) -> np.ndarray:
    """``a_n = exp(-|z - n alpha|**2 / 2) |f(z - n alpha)|`` for ``n = 0..n_max``.

    This equals ``exp(-|z|**2/2) |U_(n alpha) f(z)|`` and tends to zero, which
    is why no ``U_alpha`` with ``alpha != 0`` can have an eigenvector.
    """
    if alpha == 0:
        raise ValueError("alpha must be nonzero")
    if n_max < 1:
        raise ValueError("n_max must be at least 1")
    pts = complex(z) - np.arange(n_max + 1) * complex(alpha)
    return np.exp(-0.5 * np.abs(pts) ** 2) * np.abs(evaluate(f, pts))
