import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from numpy.polynomial import laguerre

from deepzero import fock
from deepzero.errors import DegreeOverflowError
from deepzero.fock import FockVector


def polar_inner(f, g, n_radial=80, n_angle=96):
    """<f, g> against exp(-|z|^2) dA / pi by Gauss-Laguerre in r^2 and a
    uniform angle rule; exact for polynomials of moderate degree."""
    s, ws = laguerre.laggauss(n_radial)
    ang = 2 * math.pi * np.arange(n_angle) / n_angle
    z = np.sqrt(s)[:, None] * np.exp(1j * ang)[None, :]
    vals = f(z) * np.conj(g(z))
    return complex(np.sum(ws[:, None] * vals) / n_angle)


complex_lists = st.lists(
    st.complex_numbers(max_magnitude=10, allow_nan=False, allow_infinity=False), min_size=1, max_size=24
)


def test_basis_and_zeros():
    e = FockVector.basis(3, 6)
    assert e.degree == 6
    assert e.coeffs[3] == 1 and np.count_nonzero(e.coeffs) == 1
    assert fock.norm(FockVector.zeros(5)) == 0
    with pytest.raises(ValueError):
        FockVector.basis(6, 6)


def test_coefficients_are_read_only():
    v = FockVector([1, 2, 3])
    with pytest.raises(ValueError):
        v.coeffs[0] = 5


def test_arithmetic_zero_extends():
    a = FockVector([1, 2])
    b = FockVector([1, 1, 1])
    np.testing.assert_array_equal((a + b).coeffs, [2, 3, 1])
    np.testing.assert_array_equal((a - b).coeffs, [0, 1, -1])
    np.testing.assert_array_equal((2 * a).coeffs, [2, 4])
    np.testing.assert_array_equal((-a / 2).coeffs, [-0.5, -1])
    assert a.padded(4).degree == 4
    assert b.truncated(2).degree == 2
    with pytest.raises(ValueError):
        b.padded(2)


@given(complex_lists, complex_lists)
@settings(max_examples=50, deadline=None)
def test_inner_matches_polar_quadrature(cu, cv):
    u, v = FockVector(cu), FockVector(cv)
    ref = polar_inner(lambda z: fock.evaluate(u, z), lambda z: fock.evaluate(v, z))
    scale = max(1.0, fock.norm(u) * fock.norm(v))
    assert abs(fock.inner(u, v) - ref) <= 1e-10 * scale


@given(complex_lists)
@settings(max_examples=50, deadline=None)
def test_inner_hermitian_and_norm(c):
    rng = np.random.default_rng(len(c))
    u, v = FockVector(c), fock.random_vector(rng, len(c))
    assert fock.inner(u, v) == pytest.approx(np.conj(fock.inner(v, u)))
    assert fock.inner(2j * u, v) == pytest.approx(2j * fock.inner(u, v))
    assert fock.norm(u) ** 2 == pytest.approx(fock.inner(u, u).real)


def test_evaluate_against_polynomial():
    rng = np.random.default_rng(0)
    v = fock.random_vector(rng, 20)
    taylor = v.coeffs / np.sqrt([float(math.factorial(j)) for j in range(20)])
    z = np.array([0.3 - 1.2j, 2.0, -1.5j])
    np.testing.assert_allclose(fock.evaluate(v, z), np.polyval(taylor[::-1], z), rtol=1e-13)
    assert isinstance(fock.evaluate(v, 0.5), complex)


def test_kernel_reproduces_against_quadrature():
    rng = np.random.default_rng(1)
    v = fock.random_vector(rng, 12)
    w = 0.7 - 1.1j
    ref = polar_inner(lambda z: fock.evaluate(v, z), lambda z: np.exp(z * np.conj(w)), n_radial=120)
    assert abs(ref - fock.evaluate(v, w)) < 1e-10 * fock.norm(v)
    k = fock.kernel_vector(w, 60)
    assert fock.norm(k) ** 2 == pytest.approx(math.exp(abs(w) ** 2), rel=1e-14)


def test_evaluation_bound_and_sharpness():
    rng = np.random.default_rng(2)
    v = fock.random_vector(rng, 16)
    z = rng.uniform(-2, 2, 50) + 1j * rng.uniform(-2, 2, 50)
    assert np.all(np.abs(fock.evaluate(v, z)) <= fock.evaluation_bound(v, z))
    w = 1.3 + 0.4j
    k = fock.kernel_vector(w, 80)
    assert abs(fock.evaluate(k, w)) == pytest.approx(fock.evaluation_bound(k, w), rel=1e-12)


def test_taylor_round_trip_and_overflow():
    rng = np.random.default_rng(3)
    v = fock.random_vector(rng, 30)
    np.testing.assert_allclose(fock.from_taylor(fock.to_taylor(v)).coeffs, v.coeffs, rtol=1e-14)
    d = fock.derivatives_at_zero(FockVector.basis(4, 5))
    assert d[4] == pytest.approx(math.sqrt(24))
    fock.to_taylor(FockVector.zeros(200))
    with pytest.raises(DegreeOverflowError, match="degree too large"):
        fock.to_taylor(FockVector.zeros(400))
    assert issubclass(DegreeOverflowError, OverflowError)


def test_json_round_trip():
    v = FockVector([1 + 2j, -0.5, 3j])
    back = FockVector.from_json(v.to_json())
    np.testing.assert_array_equal(back.coeffs, v.coeffs)
