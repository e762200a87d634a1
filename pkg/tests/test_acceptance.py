"""Acceptance criteria 1-10.  Test names carry the criterion number; the
terminal summary prints one PASS/FAIL line per criterion."""
import cmath
import math
import subprocess
import sys
import time

import numpy as np
import pytest

from deepzero import bargmann as bg
from deepzero import deep_zero as dz
from deepzero import fock
from deepzero import operators as ops
from deepzero.quadrature import cos_power_integral, gauss_hermite_grid

from _support import gaussian_packet

BETAS = (0.5, 1.0, 2.0)
DEGREES = (8, 16, 32, 64, 128)


def _report(label, ok, detail):
    print(f"{'PASS' if ok else 'FAIL'} {label}: {detail}")


def _disk(rng, radius, size):
    r = radius * np.sqrt(rng.uniform(0, 1, size))
    return r * np.exp(2j * math.pi * rng.uniform(0, 1, size))


@pytest.fixture(scope="module")
def lambda_table():
    return {
        (p, b): [dz.sampling_constant(p, b, n) for n in DEGREES]
        for p in dz.PARITIES
        for b in BETAS
    }


def test_criterion_01_reproducing_property():
    rng = np.random.default_rng(1)
    start = time.perf_counter()
    worst = 0.0
    for _ in range(200):
        f = fock.random_vector(rng, int(rng.integers(1, 33)))
        w = complex(_disk(rng, 2.0, 1)[0])
        k = fock.kernel_vector(w, f.degree)
        worst = max(worst, abs(fock.inner(f, k) - fock.evaluate(f, w)) / fock.norm(f))
    elapsed = time.perf_counter() - start
    _report("criterion 1", worst < 1e-12 and elapsed < 1, f"rel err {worst:.2e}, {elapsed:.2f}s")
    assert worst < 1e-12
    assert elapsed < 1.0


def test_criterion_02_unitarity_and_commutation():
    rng = np.random.default_rng(2)
    start = time.perf_counter()
    defect = resid = phase_err = 0.0
    for a, b in zip(_disk(rng, 2.0, 20), _disk(rng, 2.0, 20)):
        for x in (a, b):
            defect = max(defect, ops.padded_displacement(x, 32).unitarity_defect())
        phase, r = ops.commutation_check(a, b, 32)
        expected = cmath.exp(-1j * (a * b.conjugate()).imag)
        resid = max(resid, r)
        phase_err = max(phase_err, abs(phase - expected))
    elapsed = time.perf_counter() - start
    ok = defect < 1e-9 and resid < 1e-9 and phase_err < 1e-15 and elapsed < 5
    _report("criterion 2", ok, f"defect {defect:.2e}, commutation {resid:.2e}, {elapsed:.2f}s")
    assert defect < 1e-9
    assert resid < 1e-9
    assert phase_err < 1e-15
    assert elapsed < 5.0


def test_criterion_03_bargmann_isometry_and_intertwining():
    rng = np.random.default_rng(3)
    g = gauss_hermite_grid(201)
    start = time.perf_counter()
    iso = 0.0
    packets = []
    for _ in range(100):
        f, exact = gaussian_packet(rng)
        c = bg.bargmann_forward(bg.L2Function.sample(f, g), 96, check=False)
        iso = max(iso, abs(fock.norm(c) ** 2 - exact) / exact)
        packets.append(f)
    mod = refl = 0.0
    for f in packets[:10]:
        phi = bg.L2Function.sample(f, g)
        wide = bg.bargmann_forward(phi, 128)
        for beta in BETAS:
            lhs = bg.bargmann_forward(bg.modulate(phi, beta), 48).coeffs
            rhs = ops.displacement_matrix(beta, 128, 128).entries[:48] @ wide.coeffs
            mod = max(mod, float(np.abs(lhs - rhs).max()))
        lhs = bg.bargmann_forward(bg.reflect(phi), 48)
        refl = max(refl, fock.norm(lhs - ops.reflect(wide.truncated(48))))
    elapsed = time.perf_counter() - start
    ok = iso < 1e-6 and mod < 1e-6 and refl < 1e-6 and elapsed < 10
    _report("criterion 3", ok, f"isometry {iso:.2e}, modulate {mod:.2e}, reflect {refl:.2e}, {elapsed:.2f}s")
    assert iso < 1e-6
    assert mod < 1e-6
    assert refl < 1e-6
    assert elapsed < 10.0


def test_criterion_04_seminorm_routes_agree():
    rng = np.random.default_rng(4)
    g = gauss_hermite_grid(201)
    start = time.perf_counter()
    algebraic = analytic = 0.0
    for parity in dz.PARITIES:
        for beta in BETAS:
            form = dz.seminorm_gram(parity, beta, 16)
            for _ in range(50):
                v = fock.random_vector(rng, 16, unit=True)
                d = dz.seminorm_direct(v, parity, beta)
                algebraic = max(
                    algebraic,
                    abs(d - form.value(v)),
                    abs(d - dz.symmetrized_seminorm(v, parity, beta)),
                )
                xi, eta = dz.xi_eta(bg.bargmann_inverse(v, g), beta, parity)
                alt = 0.25 * (bg.l2_norm2(xi) + bg.l2_norm2(eta))
                analytic = max(analytic, abs(alt - d))
    elapsed = time.perf_counter() - start
    ok = algebraic < 1e-10 and analytic < 1e-6 and elapsed < 30
    _report("criterion 4", ok, f"algebraic {algebraic:.2e}, xi/eta {analytic:.2e}, {elapsed:.2f}s")
    assert algebraic < 1e-10
    assert analytic < 1e-6
    assert elapsed < 30.0


def test_criterion_05_uniqueness(lambda_table):
    smallest = min(min(v) for v in lambda_table.values())
    at_zero = [dz.sampling_constant(p, 0.0, n) for p in dz.PARITIES for n in DEGREES]
    ok = smallest > 0 and all(x == 1.0 for x in at_zero)
    _report("criterion 5", ok, f"smallest lambda_min {smallest:.3e}, beta=0 values {set(at_zero)}")
    assert smallest > 0
    assert all(x == 1.0 for x in at_zero)


# lambda_min(128) / lambda_min(8) at beta = 1 measured 0.0637 (even) and
# 0.0898 (odd); frozen with margin as a regression bound.
DECAY_BOUND = 0.1


def test_criterion_06_non_sampling(lambda_table):
    ok = True
    for parity in dz.PARITIES:
        lam = lambda_table[parity, 1.0]
        monotone = all(b <= a for a, b in zip(lam, lam[1:]))
        ratio = lam[-1] / lam[0]
        ok &= monotone and ratio < 0.5 and ratio < DECAY_BOUND
        _report(f"criterion 6 ({parity})", monotone and ratio < DECAY_BOUND, f"lambda(128)/lambda(8) = {ratio:.4f}")
        assert monotone
        assert lam[-1] < 0.5 * lam[0]
        assert ratio < DECAY_BOUND


SWEEP_THETAS = (0.5, 0.2, 0.1, 0.05)


def test_criterion_07a_numerator_bounded():
    start = time.perf_counter()
    thetas = (2.0, 1.0, 0.8, 0.6, 0.5, 0.2, 0.1, 0.05, 0.01)
    worst = max(dz.counterexample_masses(th, b)[0] for th in thetas for b in BETAS)
    elapsed = time.perf_counter() - start
    _report("criterion 7a", worst <= 3 and elapsed < 30, f"max numerator {worst:.6f}, {elapsed:.2f}s")
    assert worst <= 3
    assert elapsed < 30.0


def test_criterion_07b_lorentz_square_integral():
    value = cos_power_integral(0.0, 1.0)
    err = abs(value - math.pi / 2)
    _report("criterion 7b", err < 1e-8, f"|I - pi/2| = {err:.2e}")
    assert err < 1e-8


def test_criterion_07c_denominator_growth():
    den_small = dz.counterexample_masses(0.05, 1.0)[1]
    den_half = dz.counterexample_masses(0.5, 1.0)[1]
    ok = den_small > 10 * den_half
    _report("criterion 7c", ok, f"denominator(0.05) = {den_small}, denominator(0.5) = {den_half}")
    assert den_small > 10 * den_half


def test_criterion_07d_ratio_strictly_decreasing():
    ratios = [dz.sampling_ratio(th, 1.0)["ratio"] for th in SWEEP_THETAS]
    ok = all(b < a for a, b in zip(ratios, ratios[1:]))
    _report("criterion 7d", ok, f"ratios {ratios}")
    assert ok


def test_criterion_08_recovery():
    rng = np.random.default_rng(8)
    g = gauss_hermite_grid(201)
    worst = 0.0
    for i in range(50):
        f, _ = gaussian_packet(rng)
        phi = bg.L2Function.sample(f, g)
        parity = dz.PARITIES[i % 2]
        beta = BETAS[i % 3]
        xi, eta = dz.xi_eta(phi, beta, parity)
        rec = dz.recover_phi(xi, eta, beta)
        worst = max(worst, float(np.abs(rec.phi.values[rec.valid] - phi.values[rec.valid]).max()))
    from deepzero.experiments import recover_demo

    bad = [r["norm2"] for r in recover_demo(1.0) if r["scenario"] == "incompatible"]
    growth = bad[3] / bad[0]
    ok = worst < 1e-10 and growth > 10
    _report("criterion 8", ok, f"round trip {worst:.2e}, incompatible growth {growth:.1f}x")
    assert worst < 1e-10
    assert len(bad) == 4
    assert growth > 10


def test_criterion_09_inequalities():
    rng = np.random.default_rng(9)
    g = gauss_hermite_grid(201)
    pair = cosw = -math.inf
    for i in range(100):
        v = fock.random_vector(rng, 16, unit=True)
        parity = dz.PARITIES[i % 2]
        beta = BETAS[i % 3]
        lhs, rhs = dz.translate_pair_bound(v, beta, parity)
        pair = max(pair, lhs - rhs)
        lhs, rhs = dz.cos_weight_bound(v, beta, g, parity)
        cosw = max(cosw, lhs - rhs)
    ok = pair <= 1e-9 and cosw <= 1e-9
    _report("criterion 9", ok, f"max(lhs - rhs): pair {pair:.2e}, cosine {cosw:.2e}")
    assert pair <= 1e-9
    assert cosw <= 1e-9


def test_criterion_10_verify_command():
    start = time.perf_counter()
    proc = subprocess.run(
        [sys.executable, "-m", "deepzero", "verify"], capture_output=True, text=True, timeout=300
    )
    elapsed = time.perf_counter() - start
    ok = proc.returncode == 0 and elapsed < 120
    _report("criterion 10", ok, f"exit {proc.returncode}, {elapsed:.1f}s")
    assert proc.returncode == 0, proc.stdout + proc.stderr
    assert elapsed < 120.0
