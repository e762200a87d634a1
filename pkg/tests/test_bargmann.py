import math

import numpy as np
import pytest
from scipy import integrate

from deepzero import bargmann as bg
from deepzero import fock
from deepzero import operators as ops
from deepzero.errors import AsymmetricGridError, GridMismatchError, GridUnderresolvedError
from deepzero.quadrature import QuadratureGrid, gauss_hermite_grid, uniform_grid

from _support import gaussian_packet


def quad_bargmann(f, z):
    """B f(z) from the kernel by adaptive quadrature on the real line."""
    kern = lambda t: (2 * math.pi) ** -0.25 * np.exp(-1j * z * t + z * z / 2 - t * t / 4) * f(t)  # noqa: E731
    re, _ = integrate.quad(lambda t: kern(t).real, -np.inf, np.inf, epsabs=1e-13, limit=200)
    im, _ = integrate.quad(lambda t: kern(t).imag, -np.inf, np.inf, epsabs=1e-13, limit=200)
    return re + 1j * im


def test_ground_state():
    g = gauss_hermite_grid(201)
    c = bg.bargmann_forward(bg.L2Function.sample(lambda t: np.exp(-t * t / 4), g), 10).coeffs
    assert c[0] == pytest.approx((2 * math.pi) ** 0.25, abs=1e-13)
    assert np.abs(c[1:]).max() < 1e-13


def test_preimage_basis_orthonormal():
    g = gauss_hermite_grid(201)
    gram = bg.preimage_gram(g, 64)
    assert np.abs(gram - np.eye(64)).max() < 1e-12


@pytest.mark.parametrize("seed", range(4))
def test_forward_matches_adaptive_quadrature(seed):
    rng = np.random.default_rng(seed)
    f, _ = gaussian_packet(rng)
    phi = bg.L2Function.sample(f, gauss_hermite_grid(201))
    c = bg.bargmann_forward(phi, 96)
    for z in (0.3, -0.8 + 0.5j, 1.2j):
        ref = quad_bargmann(f, z)
        assert abs(fock.evaluate(c, z) - ref) < 1e-9
        assert abs(bg.bargmann_at(phi, z) - ref) < 1e-9


def test_isometry_against_closed_form():
    rng = np.random.default_rng(7)
    g = gauss_hermite_grid(201)
    for _ in range(20):
        f, exact = gaussian_packet(rng)
        phi = bg.L2Function.sample(f, g)
        assert bg.l2_norm2(phi) == pytest.approx(exact, rel=1e-12)
        c = bg.bargmann_forward(phi, 96, check=False)
        assert fock.norm(c) ** 2 == pytest.approx(exact, rel=1e-10)


def test_inverse_round_trip_and_adjoint():
    rng = np.random.default_rng(8)
    g = gauss_hermite_grid(201)
    v = fock.random_vector(rng, 20)
    phi = bg.bargmann_inverse(v, g)
    np.testing.assert_allclose(bg.bargmann_forward(phi, 20).coeffs, v.coeffs, atol=1e-10)
    assert bg.l2_norm2(phi) == pytest.approx(fock.norm(v) ** 2, rel=1e-12)


def test_intertwining():
    rng = np.random.default_rng(9)
    g = gauss_hermite_grid(201)
    f, _ = gaussian_packet(rng)
    phi = bg.L2Function.sample(f, g)
    wide = bg.bargmann_forward(phi, 128)
    for beta in (0.5, 1.0, 2.0):
        lhs = bg.bargmann_forward(bg.modulate(phi, beta), 40).coeffs
        rhs = ops.displacement_matrix(beta, 128, 128).entries[:40] @ wide.coeffs
        assert np.abs(lhs - rhs).max() < 1e-10
    lhs = bg.bargmann_forward(bg.reflect(phi), 40)
    assert fock.norm(lhs - ops.reflect(wide.truncated(40))) < 1e-10


def test_underresolved_grid_raises():
    g = gauss_hermite_grid(31)
    phi = bg.L2Function.sample(lambda t: np.exp(-t * t / 4 + 6j * t), g)
    with pytest.raises(GridUnderresolvedError, match="grid underresolved"):
        bg.bargmann_forward(phi, 40)
    with pytest.raises(GridUnderresolvedError, match="grid underresolved"):
        bg.bargmann_inverse(fock.FockVector.basis(60), g)


def test_grid_mismatch_and_asymmetry():
    a = bg.L2Function.sample(np.cos, uniform_grid(3.0, 0.5))
    b = bg.L2Function.sample(np.cos, uniform_grid(3.0, 0.25))
    with pytest.raises(GridMismatchError, match="grid mismatch"):
        bg.l2_inner(a, b)
    with pytest.raises(GridMismatchError):
        a + b
    skew = QuadratureGrid([0.0, 1.0, 2.0], [1.0, 1.0, 1.0], "uniform")
    with pytest.raises(AsymmetricGridError, match="asymmetric grid"):
        bg.reflect(bg.L2Function(skew, [1, 2, 3]))
    assert issubclass(AsymmetricGridError, ValueError)


def test_modulate_rejects_complex_shift():
    phi = bg.L2Function.sample(np.cos, uniform_grid(3.0, 0.5))
    with pytest.raises(TypeError):
        bg.modulate(phi, 1 + 1j)
    assert bg.modulate(phi, 0) is phi


def test_function_arithmetic_and_csv():
    g = uniform_grid(2.0, 0.5)
    a = bg.L2Function.sample(np.cos, g)
    b = bg.L2Function.sample(np.sin, g)
    s = a + 2 * b - a
    np.testing.assert_allclose(s.values, 2 * np.sin(g.nodes))
    rows = a.to_csv_rows()
    assert len(rows) == len(g) and len(rows[0]) == 4
