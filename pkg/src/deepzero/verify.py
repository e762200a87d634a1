"""Invariant suite run by ``deepzero verify``.

Each check returns either a residual (passes when ``residual <= tol``) or a
boolean for qualitative properties.  A global ``tol`` replaces every
residual tolerance; boolean checks ignore it.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from . import bargmann as bg
from . import deep_zero as dz
from . import fock
from . import operators as ops
from .quadrature import cos_power_integral, gauss_hermite_grid, uniform_grid

SEED = 20240611


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    residual: Optional[float]
    tol: Optional[float]

    def line(self) -> str:
        tag = "PASS" if self.passed else "FAIL"
        if self.residual is None:
            return f"{tag}  {self.name}"
        return f"{tag}  {self.name}  residual={self.residual:.3e}  tol={self.tol:.1e}"


_CHECKS: list[tuple[str, Callable[[np.random.Generator], object], Optional[float]]] = []


def check(name: str, tol: Optional[float] = None):
    def wrap(fn):
        _CHECKS.append((name, fn, tol))
        return fn

    return wrap


# fock-core -----------------------------------------------------------------


@check("fock: Parseval inner(v,v) = sum |c_j|^2", 1e-12)
def _parseval(rng):
    v = fock.random_vector(rng, 64)
    return abs(fock.inner(v, v) - np.sum(np.abs(v.coeffs) ** 2)) / fock.norm(v) ** 2


@check("fock: reproducing property, 200 random f, |w| <= 2", 1e-12)
def _reproducing(rng):
    worst = 0.0
    for _ in range(200):
        n = int(rng.integers(1, 33))
        f = fock.random_vector(rng, n)
        w = 2 * math.sqrt(rng.random()) * cmath.exp(2j * math.pi * rng.random())
        err = abs(fock.inner(f, fock.kernel_vector(w, n)) - fock.evaluate(f, w))
        worst = max(worst, err / fock.norm(f))
    return worst


@check("fock: ||K(.,1)||^2 = e at degree 40", 1e-14)
def _kernel_norm(rng):
    return abs(fock.norm(fock.kernel_vector(1, 40)) ** 2 - math.e)


@check("fock: pointwise bound exp(-|z|^2/2)|f(z)| <= ||f||", 1e-10)
def _point_bound(rng):
    worst = 0.0
    for _ in range(1000):
        f = fock.random_vector(rng, int(rng.integers(1, 65)), unit=True)
        z = 3 * math.sqrt(rng.random()) * cmath.exp(2j * math.pi * rng.random())
        worst = max(worst, math.exp(-0.5 * abs(z) ** 2) * abs(fock.evaluate(f, z)))
    return max(0.0, worst - 1.0)


@check("fock: pointwise bound attained by normalized kernel", 1e-10)
def _point_sharp(rng):
    w = 0.8 - 0.6j
    k = fock.kernel_vector(w, 80)
    k = k / fock.norm(k)
    return abs(math.exp(-0.5 * abs(w) ** 2) * abs(fock.evaluate(k, w)) - 1.0)


@check("fock: exp(-R^2/2) max_|z|=R |f| decreases for R = 4..10")
def _point_decay(rng):
    f = fock.from_taylor([1, -2, 0.5, 1j, 0.25])
    ang = np.exp(2j * math.pi * np.arange(720) / 720)
    seq = [math.exp(-0.5 * r * r) * np.abs(fock.evaluate(f, r * ang)).max() for r in range(4, 11)]
    return all(b < a for a, b in zip(seq, seq[1:])) and seq[-1] < 1e-15


@check("fock: Taylor round trip, length 20", 1e-13)
def _taylor(rng):
    t = rng.standard_normal(20) + 1j * rng.standard_normal(20)
    back = fock.to_taylor(fock.from_taylor(t))
    return float(np.abs(back - t).max() / np.abs(t).max())


# operators -----------------------------------------------------------------


@check("operators: alpha = 0 gives identity with zero leak", 0.0)
def _identity(rng):
    op = ops.displacement_matrix(0, 20, 12)
    return float(np.abs(op.entries - np.eye(20, 12)).max()) + op.tail_leak


@check("operators: column 0 of D_1 is exp(-1/2)/sqrt(m!)", 1e-15)
def _column0(rng):
    m = np.arange(30)
    exact = math.exp(-0.5) / np.sqrt([float(math.factorial(k)) for k in m])
    return float(np.abs(ops.displacement_matrix(1, 30, 4).entries[:, 0] - exact).max())


@check("operators: entries match Gaussian-weight quadrature, |alpha| <= 1.5", 1e-8)
def _cross_oracle(rng):
    alpha = 1.2 - 0.7j
    m_max = 12
    # polar quadrature of <U_alpha e_n, e_m> against exp(-r^2) r dr dtheta / pi
    r, wr = np.polynomial.legendre.leggauss(160)
    r = 6.0 * (r + 1)
    wr = 6.0 * wr
    th = 2 * math.pi * np.arange(96) / 96
    z = (r[:, None] * np.exp(1j * th[None, :])).ravel()
    w = (wr[:, None] * r[:, None] * np.exp(-r[:, None] ** 2) * np.full((1, 96), 2 / 96)).ravel()
    e = np.array([z**k / math.sqrt(math.factorial(k)) for k in range(m_max + 1)])
    ue = np.array(
        [np.exp(-0.5 * abs(alpha) ** 2 + np.conj(alpha) * z) * (z - alpha) ** n / math.sqrt(math.factorial(n)) for n in range(m_max + 1)]
    )
    oracle = (np.conj(e) * w) @ ue.T
    d = ops.displacement_matrix(alpha, m_max + 1, m_max + 1).entries
    return float(np.abs(oracle - d).max())


@check("operators: near-unitarity, alpha = 1+i, 96 x 32", 1e-10)
def _unitary_fixed(rng):
    return ops.displacement_matrix(1 + 1j, 96, 32).unitarity_defect()


@check("operators: near-unitarity with auto pad, |alpha| <= 2", 1e-9)
def _unitary_auto(rng):
    worst = 0.0
    for _ in range(8):
        a = 2 * math.sqrt(rng.random()) * cmath.exp(2j * math.pi * rng.random())
        worst = max(worst, ops.padded_displacement(a, 32).unitarity_defect())
    return worst


@check("operators: commutation U_a U_b = exp(-i Im a conj b) U_(a+b), random |a|,|b| <= 2", 1e-9)
def _commutation(rng):
    worst = ops.commutation_check(1, 1j, 16, 64)[1]
    for _ in range(4):
        a, b = (2 * math.sqrt(rng.random()) * cmath.exp(2j * math.pi * rng.random()) for _ in range(2))
        worst = max(worst, ops.commutation_check(a, b, 32)[1])
    return worst


@check("operators: commutation phase for (1, i) is exp(i)", 1e-15)
def _phase(rng):
    return abs(ops.commutation_phase(1, 1j) - cmath.exp(1j))


@check("operators: U_-a U_a = identity", 1e-9)
def _inverse(rng):
    v = fock.random_vector(rng, 24, unit=True)
    a = 1.3 + 0.4j
    fwd = ops.apply_rigid_motion(ops.RigidMotion(1, a), v)
    back = ops.apply_rigid_motion(ops.RigidMotion(1, -a), fwd)
    return fock.norm(back - v)


@check("operators: reflection is an involution", 0.0)
def _involution(rng):
    v = fock.random_vector(rng, 17)
    r = ops.RigidMotion(-1, 0)
    twice = ops.apply_rigid_motion(r, ops.apply_rigid_motion(r, v, 0), 0)
    return float(np.abs(twice.coeffs - v.coeffs).max())


@check("operators: rotation preserves every |c_j| (relative to max |c_j|)", 1e-15)
def _rotation(rng):
    v = fock.random_vector(rng, 40)
    rot = ops.apply_rigid_motion(ops.RigidMotion(cmath.exp(0.37j), 0), v, 0)
    return float(np.abs(np.abs(rot.coeffs) - np.abs(v.coeffs)).max() / np.abs(v.coeffs).max())


@check("operators: density shift exp(-|z|^2/2)|U_a f(z)| = exp(-|z-a|^2/2)|f(z-a)|", 1e-9)
def _density_shift(rng):
    f = fock.random_vector(rng, 20, unit=True)
    a = -0.9 + 1.1j
    uf = ops.apply_rigid_motion(ops.RigidMotion(1, a), f)
    z = rng.uniform(-2, 2, 30) + 1j * rng.uniform(-2, 2, 30)
    lhs = np.exp(-0.5 * np.abs(z) ** 2) * np.abs(fock.evaluate(uf, z))
    rhs = np.exp(-0.5 * np.abs(z - a) ** 2) * np.abs(fock.evaluate(f, z - a))
    return float(np.abs(lhs - rhs).max())


@check("operators: rigid-motion composition phase", 1e-9)
def _rigid(rng):
    g = ops.RigidMotion(cmath.exp(0.6j), 0.7 - 0.2j)
    h = ops.RigidMotion(cmath.exp(-1.1j), -0.3 + 0.9j)
    v = fock.random_vector(rng, 16, unit=True)
    two = ops.apply_rigid_motion(g, ops.apply_rigid_motion(h, v, 80), 80)
    one = ops.rigid_phase(g, h) * ops.apply_rigid_motion(h @ g, v, 160)
    return fock.norm(two - one)


@check("operators: decay probe of e_0 at alpha = 1 is exp(-n^2/2)", 1e-15)
def _probe_closed(rng):
    a = ops.translate_decay_probe(fock.FockVector.basis(0), 1, 0, 6)
    return float(np.abs(a - np.exp(-0.5 * np.arange(7) ** 2)).max())


@check("operators: decay probe a_20/a_0 < 1e-6 for e_0 + e_5")
def _probe_decay(rng):
    f = fock.FockVector.basis(0, 6) + fock.FockVector.basis(5)
    a = ops.translate_decay_probe(f, 0.5 + 0.5j, 1, 20)
    return a[20] / a[0] < 1e-6


# bargmann ------------------------------------------------------------------


@check("bargmann: scaled Gauss-Hermite grid integrates exp(-t^2/2)", 1e-12)
def _grid(rng):
    g = gauss_hermite_grid(201)
    return abs(g.integrate(np.exp(-0.5 * g.nodes**2)) - math.sqrt(2 * math.pi))


@check("bargmann: B exp(-t^2/4) = (2 pi)^(1/4) e_0", 1e-12)
def _ground(rng):
    g = gauss_hermite_grid(201)
    c = bg.bargmann_forward(bg.L2Function.sample(lambda t: np.exp(-t * t / 4), g), 16).coeffs
    return abs(c[0] - (2 * math.pi) ** 0.25) + float(np.abs(c[1:]).max())


def _packet(rng):
    k = int(rng.integers(1, 4))
    amp = rng.standard_normal(k) + 1j * rng.standard_normal(k)
    shift = rng.uniform(-2, 2, k)
    freq = rng.uniform(-2, 2, k)

    def f(t):
        t = np.asarray(t)[..., None]
        return np.sum(amp * np.exp(-((t - shift) ** 2) / 4 + 1j * freq * t), axis=-1)

    def exact_norm2():
        a, b = shift[:, None], shift[None, :]
        kappa = freq[:, None] - freq[None, :]
        big_b = (a + b) / 2 + 1j * kappa
        gram = math.sqrt(2 * math.pi) * np.exp(big_b**2 / 2 - (a * a + b * b) / 4)
        return float(np.real(np.conj(amp) @ gram.T @ amp))

    return f, exact_norm2()


@check("bargmann: isometry ||B phi|| = ||phi||, 100 Gaussian packets (relative)", 1e-6)
def _isometry(rng):
    g = gauss_hermite_grid(201)
    worst = 0.0
    for _ in range(100):
        f, n2 = _packet(rng)
        c = bg.bargmann_forward(bg.L2Function.sample(f, g), 96, check=False)
        worst = max(worst, abs(fock.norm(c) ** 2 - n2) / n2)
    return worst


@check("bargmann: coefficients agree with direct kernel quadrature", 1e-10)
def _direct_kernel(rng):
    g = gauss_hermite_grid(201)
    f, _ = _packet(rng)
    phi = bg.L2Function.sample(f, g)
    c = bg.bargmann_forward(phi, 96)
    z = rng.uniform(-1.5, 1.5, 10) + 1j * rng.uniform(-1.5, 1.5, 10)
    return float(np.abs(fock.evaluate(c, z) - bg.bargmann_at(phi, z)).max())


@check("bargmann: forward(inverse(v)) = v, degree 12", 1e-6)
def _roundtrip(rng):
    v = fock.random_vector(rng, 12)
    back = bg.bargmann_forward(bg.bargmann_inverse(v, gauss_hermite_grid(201)), 12)
    return float(np.abs(back.coeffs - v.coeffs).max())


@check("bargmann: B modulate(beta) = D_beta B for beta in {0.5, 1, 2}", 1e-6)
def _modulate(rng):
    g = gauss_hermite_grid(201)
    f, _ = _packet(rng)
    phi = bg.L2Function.sample(f, g)
    worst = 0.0
    for beta in (0.5, 1.0, 2.0):
        wide = bg.bargmann_forward(phi, 128)
        lhs = bg.bargmann_forward(bg.modulate(phi, beta), 48).coeffs
        rhs = ops.displacement_matrix(beta, 128, 128).entries[:48] @ wide.coeffs
        worst = max(worst, float(np.abs(lhs - rhs).max()))
    return worst


@check("bargmann: B reflect = R B", 1e-6)
def _reflect(rng):
    g = gauss_hermite_grid(201)
    f, _ = _packet(rng)
    phi = bg.L2Function.sample(f, g)
    lhs = bg.bargmann_forward(bg.reflect(phi), 48)
    return fock.norm(lhs - ops.reflect(bg.bargmann_forward(phi, 48)))


@check("bargmann: adjoint <B phi, v> = <phi, B* v>", 1e-6)
def _adjoint(rng):
    g = gauss_hermite_grid(201)
    f, _ = _packet(rng)
    phi = bg.L2Function.sample(f, g)
    v = fock.random_vector(rng, 24)
    return abs(fock.inner(bg.bargmann_forward(phi, 24), v) - bg.l2_inner(phi, bg.bargmann_inverse(v, g)))


@check("bargmann: even phi -> even coefficients, odd -> odd", 1e-8)
def _parity(rng):
    g = gauss_hermite_grid(201)
    even = bg.bargmann_forward(bg.L2Function.sample(lambda t: np.cos(t) * np.exp(-t * t / 5), g), 40)
    odd = bg.bargmann_forward(bg.L2Function.sample(lambda t: t * np.exp(-t * t / 3), g), 40)
    return float(max(np.abs(even.coeffs[1::2]).max(), np.abs(odd.coeffs[0::2]).max()))


@check("bargmann: exp(-z^2/2) B phi = (2 pi)^(-1/4) F M phi", 1e-10)
def _fourier(rng):
    # phi = t exp(-t^2/4): F[t exp(-t^2/2)](z) = -i z sqrt(2 pi) exp(-z^2/2)
    g = gauss_hermite_grid(201)
    phi = bg.L2Function.sample(lambda t: t * np.exp(-t * t / 4), g)
    z = np.array([0.4, -1.0 + 0.3j, 1.7j])
    lhs = np.exp(-z * z / 2) * bg.bargmann_at(phi, z)
    rhs = (2 * math.pi) ** -0.25 * (-1j * z * math.sqrt(2 * math.pi) * np.exp(-z * z / 2))
    return float(np.abs(lhs - rhs).max())


# deep-zero -----------------------------------------------------------------


@check("deep-zero: beta = 0 seminorm equals the full norm", 1e-12)
def _beta_zero(rng):
    v = fock.random_vector(rng, 20)
    return abs(dz.seminorm_direct(v, "even", 0) - fock.norm(v) ** 2)


@check("deep-zero: e_0, E even, beta 1 gives 1 + exp(-1) sinh(1)", 1e-12)
def _e0(rng):
    return abs(dz.seminorm_direct(fock.FockVector.basis(0), "even", 1) - (1 + math.exp(-1) * math.sinh(1)))


@check("deep-zero: direct = Gram = symmetrized, both parities, beta in {0.5,1,2}", 1e-10)
def _three_route(rng):
    worst = 0.0
    for parity in dz.PARITIES:
        for beta in (0.5, 1.0, 2.0):
            form = dz.seminorm_gram(parity, beta, 24)
            for _ in range(10):
                v = fock.random_vector(rng, 24, unit=True)
                d = dz.seminorm_direct(v, parity, beta)
                worst = max(worst, abs(d - form.value(v)), abs(d - dz.symmetrized_seminorm(v, parity, beta)))
    return worst


@check("deep-zero: seminorm via xi/eta on the real line", 1e-6)
def _bargmann_route(rng):
    g = gauss_hermite_grid(201)
    worst = 0.0
    for parity in dz.PARITIES:
        for beta in (0.5, 1.0, 2.0):
            v = fock.random_vector(rng, 16, unit=True)
            xi, eta = dz.xi_eta(bg.bargmann_inverse(v, g), beta, parity)
            alt = 0.25 * (bg.l2_norm2(xi) + bg.l2_norm2(eta))
            worst = max(worst, abs(alt - dz.seminorm_direct(v, parity, beta)))
    return worst


@check("deep-zero: rotation reduction to positive beta", 1e-10)
def _rotation_reduce(rng):
    v = fock.random_vector(rng, 20, unit=True)
    beta = 1.1 * cmath.exp(0.8j)
    op = ops.padded_displacement(beta, 20)
    mask = dz.IndexSet.even().mask(op.rows)
    complex_side = dz._deep_zero_sums(v.coeffs, mask, op.entries)
    g, b = dz.rotation_reduce(v, beta)
    return abs(complex_side - dz.seminorm_direct(g, "even", b))


@check("deep-zero: Gram matrix positive semidefinite", 1e-12)
def _psd(rng):
    worst = 0.0
    for parity in dz.PARITIES:
        worst = max(worst, -float(dz.seminorm_gram(parity, 1.0, 64).eigenvalues()[0]))
    return max(0.0, worst)


_LAMBDA: dict = {}


def _lambda_table():
    if not _LAMBDA:
        for parity in dz.PARITIES:
            for beta in (0.5, 1.0, 2.0):
                _LAMBDA[parity, beta] = [dz.sampling_constant(parity, beta, n) for n in (8, 16, 32, 64, 128)]
    return _LAMBDA


@check("deep-zero: lambda_min > 0 for N up to 128 (uniqueness)")
def _uniqueness(rng):
    return all(min(v) > 0 for v in _lambda_table().values())


@check("deep-zero: beta = 0 gives lambda_min = 1", 0.0)
def _lambda_one(rng):
    return max(abs(dz.sampling_constant(p, 0, n) - 1.0) for p in dz.PARITIES for n in (8, 32))


@check("deep-zero: lambda_min non-increasing in N")
def _monotone(rng):
    return all(all(b <= a for a, b in zip(v, v[1:])) for v in _lambda_table().values())


@check("deep-zero: lambda_min(128) < lambda_min(8)/2 at beta 1 (non-sampling)")
def _non_sampling(rng):
    t = _lambda_table()
    return all(t[p, 1.0][-1] < 0.5 * t[p, 1.0][0] for p in dz.PARITIES)


@check("deep-zero: xi/eta then recovery is the identity off the cosine zeros", 1e-10)
def _recovery(rng):
    g = gauss_hermite_grid(201)
    worst = 0.0
    for parity in dz.PARITIES:
        phi = bg.bargmann_inverse(fock.random_vector(rng, 12), g)
        xi, eta = dz.xi_eta(phi, 1.0, parity)
        rec = dz.recover_phi(xi, eta, 1.0)
        worst = max(worst, float(np.abs(rec.phi.values[rec.valid] - phi.values[rec.valid]).max()))
    return worst


@check("deep-zero: incompatible data, recovered norm grows > 10x over 4 levels")
def _incompatible(rng):
    from .experiments import recover_demo

    rows = [r for r in recover_demo(1.0) if r["scenario"] == "incompatible"]
    return rows[3]["norm2"] > 10 * rows[0]["norm2"]


@check("deep-zero: int (1+t^2)^-2 dt = pi/2", 1e-8)
def _pi_half(rng):
    return abs(cos_power_integral(0.0, 1.0) - math.pi / 2)


@check("deep-zero: counterexample numerator <= 3 for all theta")
def _numerator(rng):
    return all(dz.counterexample_masses(th, b)[0] <= 3 for th in (1.0, 0.5, 0.2, 0.05, 0.01) for b in (0.5, 1.0, 2.0))


@check("deep-zero: ||phi_theta||^2 grows without bound as theta -> 1/2+")
def _divergence(rng):
    dens = [dz.counterexample_masses(th, 1.0)[1] for th in (1.0, 0.8, 0.6, 0.55, 0.51)]
    ratios = [dz.sampling_ratio(th, 1.0)["ratio"] for th in (1.0, 0.8, 0.6, 0.55, 0.51)]
    increasing = all(b > a for a, b in zip(dens, dens[1:]))
    decreasing = all(b < a for a, b in zip(ratios, ratios[1:]))
    return increasing and decreasing and dens[-1] > 10 * dens[0]


@check("deep-zero: ||phi_theta|| is infinite for theta <= 1/2")
def _infinite(rng):
    return all(dz.counterexample_masses(th, 1.0)[1] == math.inf for th in (0.5, 0.2, 0.1, 0.05))


@check("deep-zero: eta_theta is odd", 1e-12)
def _eta_odd(rng):
    g = uniform_grid(20, 0.01)
    eta = dz.counterexample_eta(0.3, 1.0, g)
    even = bg.L2Function.sample(lambda t: np.exp(-t * t) + np.cos(3 * t), g)
    return abs(bg.l2_inner(eta, even))


@check("deep-zero: ||(U_b + U_-b) f||^2 <= 8 ||f||^2_(E,b)", 1e-9)
def _pair_bound(rng):
    worst = -math.inf
    for _ in range(100):
        lhs, rhs = dz.translate_pair_bound(fock.random_vector(rng, 16, unit=True), 1.0)
        worst = max(worst, lhs - rhs)
    return max(0.0, worst)


@check("deep-zero: 4 ||cos(b t) phi||^2 <= 8 ||f||^2_(E,b)", 1e-9)
def _cos_bound(rng):
    g = gauss_hermite_grid(201)
    worst = -math.inf
    for _ in range(30):
        lhs, rhs = dz.cos_weight_bound(fock.random_vector(rng, 16, unit=True), 1.0, g)
        worst = max(worst, lhs - rhs)
    return max(0.0, worst)


def run_checks(tol: Optional[float] = None, seed: int = SEED) -> list[CheckResult]:
    results = []
    for name, fn, default_tol in _CHECKS:
        rng = np.random.default_rng([seed, len(results)])
        out = fn(rng)
        if isinstance(out, (bool, np.bool_)):
            results.append(CheckResult(name, bool(out), None, None))
            continue
        limit = default_tol if tol is None else tol
        residual = float(out)
        results.append(CheckResult(name, bool(residual <= limit), residual, limit))
    return results
