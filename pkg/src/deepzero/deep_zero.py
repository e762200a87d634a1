"""Deep-zero seminorm, its Gram matrix and the counterexample machinery.

For an index set ``E`` and a shift ``beta`` the seminorm is

    ||f||_{E,beta}^2 = sum_{j in E} |f^(j)(0)|^2 / j!
                     + sum_{j not in E} |(U_beta f)^(j)(0)|^2 / j!,

which in orthonormal coefficients is ``sum_E |c_j|^2 + sum_{E^c} |(D c)_j|^2``
with ``D`` the padded displacement matrix.  On a degree-``N`` truncation the
form is the Hermitian matrix ``P_E + D^H P_{E^c} D``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Mapping

import numpy as np
from scipy.linalg import lu_factor, lu_solve

from .bargmann import L2Function, bargmann_inverse, l2_norm2, modulate, reflect
from .errors import AsymmetricGridError, EigenSolverError, GridMismatchError
from .fock import FockVector, norm
from .operators import (
    RigidMotion,
    apply_rigid_motion,
    check_leak,
    displacement_matrix,
    padded_displacement,
    resolve_pad,
    rotate,
)
from .quadrature import QuadratureGrid, cos_power_integral, integrate_cos_singular

LEAK_TOL = 1e-10
PARITIES = ("even", "odd")


@dataclass(frozen=True)
class IndexSet:
    """Derivative indices prescribed at the origin.

    ``even`` and ``odd`` are infinite parity classes; ``explicit`` holds a
    finite set.  The complement is always taken in all of ``N_0``.
    """

    kind: str
    members: tuple[int, ...] = ()

    def __post_init__(self):
        if self.kind not in ("even", "odd", "explicit"):
            raise ValueError(f"unknown index set kind {self.kind!r}")
        if self.kind != "explicit" and self.members:
            raise ValueError("parity index sets carry no explicit members")
        if any(m < 0 for m in self.members):
            raise ValueError("indices must be nonnegative")
        object.__setattr__(self, "members", tuple(sorted(set(int(m) for m in self.members))))

    @classmethod
    def even(cls) -> "IndexSet":
        return cls("even")

    @classmethod
    def odd(cls) -> "IndexSet":
        return cls("odd")

    @classmethod
    def explicit(cls, members: Iterable[int]) -> "IndexSet":
        return cls("explicit", tuple(members))

    @classmethod
    def parse(cls, text: str) -> "IndexSet":
        text = text.strip()
        if text in PARITIES:
            return cls(text)
        return cls.explicit(int(s) for s in text.split(",") if s.strip())

    def mask(self, n: int) -> np.ndarray:
        j = np.arange(n)
        if self.kind == "even":
            return j % 2 == 0
        if self.kind == "odd":
            return j % 2 == 1
        return np.isin(j, self.members)

    def complement_mask(self, n: int) -> np.ndarray:
        return ~self.mask(n)

    def __str__(self) -> str:
        if self.kind == "explicit":
            return "{" + ",".join(map(str, self.members)) + "}"
        return self.kind


def _as_index_set(E) -> IndexSet:
    if isinstance(E, IndexSet):
        return E
    return IndexSet.parse(str(E))


def _real_shift(beta, allow_zero: bool = True) -> float:
    if isinstance(beta, complex):
        if beta.imag != 0:
            raise TypeError("beta must be real; rotate first (see rotation_reduce)")
        beta = beta.real
    beta = float(beta)
    if beta < 0 or (beta == 0 and not allow_zero):
        raise ValueError("beta must be positive" if not allow_zero else "beta must be nonnegative")
    return beta


@dataclass(frozen=True, eq=False)
class SeminormForm:
    index_set: IndexSet
    beta: float
    degree: int
    pad: int
    matrix: np.ndarray
    tail_leak: float = 0.0

    def value(self, v: FockVector) -> float:
        c = v.padded(self.degree).coeffs if v.degree < self.degree else v.coeffs
        if c.shape[0] != self.degree:
            raise ValueError("vector degree exceeds the form's degree")
        return float(np.vdot(c, self.matrix @ c).real)

    def eigenvalues(self) -> np.ndarray:
        return np.linalg.eigvalsh(self.matrix)

    def to_dict(self) -> dict:
        return {
            "index_set": str(self.index_set),
            "beta": self.beta,
            "degree": self.degree,
            "pad": self.pad,
            "tail_leak": self.tail_leak,
            "re": self.matrix.real.tolist(),
            "im": self.matrix.imag.tolist(),
        }


@dataclass(frozen=True)
class SweepRecord:
    """One row of an experiment sweep, as ordered name/value pairs."""

    values: Mapping[str, object] = field(default_factory=dict)

    def __post_init__(self):
        vals = dict(self.values)
        num, den = vals.get("numerator"), vals.get("denominator")
        if "ratio" in vals and num is not None and den is not None:
            expected = 0.0 if den == math.inf else num / den
            if vals["ratio"] != expected:
                raise ValueError("ratio must equal numerator / denominator")
        lam = vals.get("lambda_min")
        if lam is not None and lam < -1e-12:
            raise ValueError("lambda_min must be nonnegative")
        object.__setattr__(self, "values", vals)

    def __getitem__(self, key: str):
        return self.values[key]

    def row(self, header: Iterable[str]) -> list:
        return [self.values.get(h, "") for h in header]


def _deep_zero_sums(c: np.ndarray, mask_rows: np.ndarray, d: np.ndarray) -> float:
    n = c.shape[0]
    shifted = d @ c
    return float(np.sum(np.abs(c[mask_rows[:n]]) ** 2) + np.sum(np.abs(shifted[~mask_rows]) ** 2))


def seminorm_direct(v: FockVector, E, beta: float, pad="auto", tol: float = LEAK_TOL) -> float:
    """``||f||^2_{E,beta}`` summed term by term from ``c`` and ``D_beta c``."""
    E = _as_index_set(E)
    beta = _real_shift(beta)
    op = padded_displacement(beta, v.degree, pad)
    check_leak(op, tol)
    return _deep_zero_sums(v.coeffs, E.mask(op.rows), op.entries)


def seminorm_gram(E, beta: float, degree: int, pad="auto", tol: float = LEAK_TOL) -> SeminormForm:
    if degree < 2:
        raise ValueError("degree must be at least 2")
    E = _as_index_set(E)
    beta = _real_shift(beta)
    p = resolve_pad(pad, beta, degree)
    op = displacement_matrix(beta, degree + p, degree)
    check_leak(op, tol)
    mask = E.mask(op.rows)
    d = op.entries
    a = np.diag(mask[:degree].astype(complex)) + d.conj().T @ (d * (~mask)[:, None])
    a = 0.5 * (a + a.conj().T)
    return SeminormForm(E, beta, degree, p, a, op.tail_leak)


def symmetrized_seminorm(v: FockVector, parity: str, beta: float, pad="auto", tol: float = LEAK_TOL) -> float:
    """Seminorm through reflections of ``f`` and ``U_beta f``.

    even: ``|f + Rf|^2/4 + |U f - R U f|^2/4``; odd swaps both signs.
    """
    if parity not in PARITIES:
        raise ValueError("parity must be 'even' or 'odd'")
    beta = _real_shift(beta, allow_zero=False)
    sign = 1 if parity == "even" else -1
    refl = RigidMotion(-1, 0)
    shifted = apply_rigid_motion(RigidMotion(1, beta), v, pad, tol)
    first = v + sign * apply_rigid_motion(refl, v, 0)
    second = shifted - sign * apply_rigid_motion(refl, shifted, 0)
    return 0.25 * norm(first) ** 2 + 0.25 * norm(second) ** 2


def rotation_reduce(v: FockVector, beta: complex) -> tuple[FockVector, float]:
    """Rotate so the shift becomes ``|beta|``.

    With ``rho = beta/|beta|`` and ``g(z) = f(rho z)`` the seminorm of ``f`` at
    ``beta`` equals that of ``g`` at ``|beta|``.
    """
    beta = complex(beta)
    if beta == 0:
        return v, 0.0
    return rotate(v, beta / abs(beta)), abs(beta)


def smallest_eigenvalue(a: np.ndarray, iterations: int = 50, rtol: float = 1e-6, block: int = 8) -> float:
    """Dense smallest eigenvalue, confirmed by block inverse power iteration.

    The block iteration (with a Rayleigh-Ritz step) converges like
    ``(lambda_0 / lambda_block) ** iterations``, so clustered small
    eigenvalues do not stall it.
    """
    lam = np.linalg.eigvalsh(a)
    lam0 = float(lam[0])
    scale = float(np.abs(lam).max())
    n = a.shape[0]
    k = min(block, n)
    try:
        lu = lu_factor(a)
    except (ValueError, np.linalg.LinAlgError) as exc:
        raise EigenSolverError(f"inverse iteration failed: {exc}") from exc
    rng = np.random.default_rng(0)
    x, _ = np.linalg.qr(rng.standard_normal((n, k)) + 1j * rng.standard_normal((n, k)))
    for _ in range(iterations):
        x, _ = np.linalg.qr(lu_solve(lu, x))
    ritz = float(np.linalg.eigvalsh(x.conj().T @ a @ x)[0])
    if not np.isfinite(ritz) or abs(ritz - lam0) > rtol * abs(lam0) + 1e-12 * scale:
        raise EigenSolverError(
            f"eigen-solver disagreement: dense {lam0:.6e} vs inverse iteration {ritz:.6e}"
        )
    return lam0


def sampling_constant(E, beta: float, degree: int, pad="auto", tol: float = LEAK_TOL) -> float:
    """Best ``eps`` with ``||f||^2_{E,beta} >= eps ||f||^2`` on the truncation."""
    beta = _real_shift(beta)
    form = seminorm_gram(E, beta, degree, pad, tol)
    return smallest_eigenvalue(form.matrix)


def xi_eta(phi: L2Function, beta: float, parity: str = "even") -> tuple[L2Function, L2Function]:
    """Split ``phi`` into the symmetric pieces seen at 0 and at ``beta``.

    even: ``(phi + phi(-t), phi_b - phi_b(-t))``; odd: signs swapped.
    """
    if parity not in PARITIES:
        raise ValueError("parity must be 'even' or 'odd'")
    if not phi.grid.is_symmetric:
        raise AsymmetricGridError("asymmetric grid")
    phi_b = modulate(phi, beta)
    if parity == "even":
        return phi + reflect(phi), phi_b - reflect(phi_b)
    return phi - reflect(phi), phi_b + reflect(phi_b)


@dataclass(frozen=True, eq=False)
class Recovery:
    """Recovered samples; excluded nodes hold NaN and ``valid`` is False there."""

    phi: L2Function
    valid: np.ndarray

    @property
    def masked(self) -> int:
        return int(np.count_nonzero(~self.valid))

    def norm2(self) -> float:
        w = self.phi.grid.weights[self.valid]
        return float(np.sum(w * np.abs(self.phi.values[self.valid]) ** 2))


def recover_phi(xi: L2Function, eta: L2Function, beta: float, exclusion: float = 0.1) -> Recovery:
    """``phi = (eta + exp(-i beta t) xi) / (2 cos beta t)`` away from cosine zeros."""
    if not 0 < exclusion < 1:
        raise ValueError("exclusion must lie in (0, 1)")
    if xi.grid is not eta.grid and not (
        np.array_equal(xi.grid.nodes, eta.grid.nodes) and np.array_equal(xi.grid.weights, eta.grid.weights)
    ):
        raise GridMismatchError("grid mismatch")
    if not xi.grid.is_symmetric:
        raise AsymmetricGridError("asymmetric grid")
    t = xi.grid.nodes
    c = np.cos(beta * t)
    valid = np.abs(c) > exclusion
    if not np.any(valid):
        raise ValueError("all nodes excluded by the exclusion band")
    out = np.full(t.shape, np.nan + 0j)
    out[valid] = (eta.values[valid] + np.exp(-1j * beta * t[valid]) * xi.values[valid]) / (2 * c[valid])
    return Recovery(L2Function(xi.grid, out), valid)


def counterexample_eta_values(t: np.ndarray, theta: float, beta: float) -> np.ndarray:
    """``(1+t^2)^-1 |cos beta t|^theta sgn t``."""
    t = np.asarray(t, float)
    return np.abs(np.cos(beta * t)) ** theta * np.sign(t) / (1 + t * t)


def counterexample_phi_values(t: np.ndarray, theta: float, beta: float) -> np.ndarray:
    """``eta_theta / (2 cos beta t)``; infinite at the cosine zeros when theta < 1."""
    t = np.asarray(t, float)
    c = np.cos(beta * t)
    with np.errstate(divide="ignore", invalid="ignore"):
        return counterexample_eta_values(t, theta, beta) / (2 * c)


def counterexample_eta(theta: float, beta: float, grid: QuadratureGrid) -> L2Function:
    if theta <= 0 or beta <= 0:
        raise ValueError("theta and beta must be positive")
    f = lambda t: counterexample_eta_values(t, theta, beta)  # noqa: E731
    return L2Function.sample(f, grid)


def counterexample_masses(theta: float, beta: float) -> tuple[float, float]:
    """``(||eta_theta||^2, ||phi_theta||^2)`` with ``xi = 0``.

    ``|phi_theta|^2 = |cos|^(2 theta - 2) (1+t^2)^-2 / 4``, which is integrable
    only for ``theta > 1/2``; below that the mass is reported as ``inf``.
    """
    if theta <= 0 or beta <= 0:
        raise ValueError("theta and beta must be positive")
    numerator = cos_power_integral(2 * theta, beta)
    denominator = 0.25 * cos_power_integral(2 * theta - 2, beta)
    return numerator, denominator


def sampling_ratio(theta: float, beta: float) -> SweepRecord:
    """Sampling-inequality ratio ``(||xi||^2 + ||eta||^2) / ||phi||^2``."""
    num, den = counterexample_masses(theta, beta)
    ratio = 0.0 if den == math.inf else num / den
    return SweepRecord(
        {"theta": theta, "beta": beta, "numerator": num, "denominator": den, "ratio": ratio}
    )


def translate_pair_bound(v: FockVector, beta: float, parity: str = "even", pad="auto") -> tuple[float, float]:
    """``(||(U_b + U_-b) f||^2, 8 ||f||^2_{E,b})``; the first never exceeds the second."""
    beta = _real_shift(beta, allow_zero=False)
    p = resolve_pad(pad, beta, v.degree)
    plus = displacement_matrix(beta, v.degree + p, v.degree)
    minus = displacement_matrix(-beta, v.degree + p, v.degree)
    for op in (plus, minus):
        check_leak(op, LEAK_TOL)
    lhs = float(np.linalg.norm((plus.entries + minus.entries) @ v.coeffs) ** 2)
    return lhs, 8 * seminorm_direct(v, IndexSet(parity), beta, p)


def cos_weight_bound(
    v: FockVector, beta: float, grid: QuadratureGrid, parity: str = "even", pad="auto"
) -> tuple[float, float]:
    """``(4 ||cos(beta t) phi||^2, 8 ||f||^2_{E,b})`` with ``phi = B^* f``."""
    beta = _real_shift(beta, allow_zero=False)
    phi = bargmann_inverse(v, grid)
    weighted = L2Function(grid, np.cos(beta * grid.nodes) * phi.values)
    return 4 * l2_norm2(weighted), 8 * seminorm_direct(v, IndexSet(parity), beta, pad)


def counterexample_point_value(theta: float, beta: float, w: complex, t_max: float = 60.0) -> complex:
    """``B phi_theta (w)`` by singular panel quadrature of the kernel.

    ``phi_theta`` is integrable for every ``theta > 0`` even when it is not
    square integrable, so the point value is always finite.
    """
    w = complex(w)
    norm_const = (2 * math.pi) ** -0.25

    def integrand(t):
        kern = norm_const * np.exp(-1j * w * t + 0.5 * w * w - 0.25 * t * t)
        return kern * np.sign(t) * np.sign(np.cos(beta * t)) / (2 * (1 + t * t))

    return integrate_cos_singular(integrand, theta - 1, beta, t_max)


def pointwise_probe(theta: float, beta: float, w: complex) -> SweepRecord:
    """``|f_theta(w)|^2 / ||f_theta||^2_{E,beta}`` for the counterexample family."""
    if theta <= 0 or beta <= 0:
        raise ValueError("theta and beta must be positive")
    value = abs(counterexample_point_value(theta, beta, w)) ** 2
    seminorm = 0.25 * cos_power_integral(2 * theta, beta)
    return SweepRecord(
        {
            "theta": theta,
            "beta": beta,
            "w_re": complex(w).real,
            "w_im": complex(w).imag,
            "point_value_sq": value,
            "seminorm_sq": seminorm,
            "ratio": value / seminorm,
        }
    )
