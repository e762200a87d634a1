"""Quadrature on the real line.

Two concerns live here: fixed grids that carry sampled functions (scaled
Gauss-Hermite, uniform), and a panel integrator for integrands with
``|cos(beta t)|**p`` singularities at the zeros of the cosine.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable

import numpy as np
from scipy.linalg import eigh_tridiagonal
from scipy.special import gammaln, roots_jacobi, roots_legendre

from .errors import QuadratureError

GRID_KINDS = ("gauss-hermite-scaled", "adaptive-panel", "uniform")


@dataclass(frozen=True, eq=False)
class QuadratureGrid:
    nodes: np.ndarray
    weights: np.ndarray
    kind: str

    def __post_init__(self):
        t = np.array(self.nodes, dtype=float).reshape(-1)
        w = np.array(self.weights, dtype=float).reshape(-1)
        if t.shape != w.shape:
            raise ValueError("nodes and weights differ in length")
        if self.kind not in GRID_KINDS:
            raise ValueError(f"unknown grid kind {self.kind!r}")
        if np.any(np.diff(t) <= 0):
            raise ValueError("nodes must be strictly increasing")
        if np.any(w <= 0):
            raise ValueError("weights must be strictly positive")
        t.setflags(write=False)
        w.setflags(write=False)
        object.__setattr__(self, "nodes", t)
        object.__setattr__(self, "weights", w)

    def __len__(self) -> int:
        return self.nodes.shape[0]

    @property
    def is_symmetric(self) -> bool:
        scale = max(1.0, float(np.abs(self.nodes).max()))
        return bool(
            np.allclose(self.nodes, -self.nodes[::-1], rtol=0, atol=1e-14 * scale)
            and np.allclose(self.weights, self.weights[::-1], rtol=1e-13, atol=0)
        )

    def integrate(self, values) -> complex:
        return complex(np.dot(self.weights, values))

    def refined(self) -> "QuadratureGrid":
        """Same kind of grid with roughly twice the nodes."""
        if self.kind == "gauss-hermite-scaled":
            return gauss_hermite_grid(2 * len(self))
        if self.kind == "uniform":
            h = self.nodes[1] - self.nodes[0]
            return uniform_grid(float(self.nodes[-1]), h / 2)
        raise ValueError(f"no refinement rule for {self.kind} grids")


def _hermite_function_sums(x: np.ndarray, n: int) -> tuple[np.ndarray, np.ndarray]:
    """``log sum_{k<n} psi_k(x)**2`` without under/overflow.

    ``psi_k`` are the orthonormal Hermite functions.  Returns the log of the
    sum; the second array is the running log scale (diagnostic only).
    """
    log_scale = -0.5 * x * x - 0.25 * math.log(math.pi)
    prev = np.zeros_like(x)
    cur = np.ones_like(x)
    acc = np.ones_like(x)
    for k in range(1, n):
        nxt = math.sqrt(2.0 / k) * x * cur - math.sqrt((k - 1) / k) * prev
        prev, cur = cur, nxt
        acc += cur * cur
        big = np.abs(cur) > 1e100
        if np.any(big):
            s = np.where(big, 1e-100, 1.0)
            prev *= s
            cur *= s
            acc *= s * s
            log_scale = log_scale + np.where(big, 100 * math.log(10), 0.0)
    return np.log(acc) + 2 * log_scale, log_scale


@lru_cache(maxsize=16)
def gauss_hermite_grid(n: int = 201) -> QuadratureGrid:
    """Gauss-Hermite rule rescaled to integrate ``g(t) dt`` directly.

    Exact for ``g(t) = exp(-t**2/2) * p(t)`` with ``deg p < 2n``, i.e. for
    products of two Hermite functions of argument ``t / sqrt(2)``.  Nodes come
    from the Jacobi matrix; weights are ``1 / sum_k psi_k(x_i)**2`` so the
    ``exp(x**2)`` factor never has to be formed.
    """
    if n < 2:
        raise ValueError("need at least two nodes")
    off = np.sqrt(np.arange(1, n) / 2.0)
    x = eigh_tridiagonal(np.zeros(n), off, eigvals_only=True)
    x = 0.5 * (x - x[::-1])
    log_sum, _ = _hermite_function_sums(x, n)
    w = math.sqrt(2.0) * np.exp(-log_sum)
    w = 0.5 * (w + w[::-1])
    return QuadratureGrid(math.sqrt(2.0) * x, w, "gauss-hermite-scaled")


def uniform_grid(half_width: float, spacing: float) -> QuadratureGrid:
    """Trapezoid rule on ``j * spacing``, ``|j * spacing| <= half_width``."""
    j = math.floor(half_width / spacing + 1e-9)
    t = spacing * np.arange(-j, j + 1)
    w = np.full(t.shape, spacing)
    w[0] = w[-1] = spacing / 2
    return QuadratureGrid(t, w, "uniform")


def cos_power_mean(p: float) -> float:
    """Average of ``|cos s|**p`` over a period, for ``p > -1``."""
    return math.exp(gammaln((p + 1) / 2) - gammaln(p / 2 + 1)) / math.sqrt(math.pi)


def _cos_breakpoints(beta: float, t_max: float) -> tuple[np.ndarray, np.ndarray]:
    """Panel edges on [0, t_max] and a flag for edges at zeros of cos(beta t).

    Edges sit at multiples of half the zero spacing, so every panel has at
    most one singular endpoint.
    """
    step = 0.5 * math.pi / beta
    k = np.arange(math.floor(t_max / step) + 1)
    edges = k * step
    flags = k % 2 == 1
    if t_max - edges[-1] > 1e-12 * max(1.0, t_max):
        edges = np.append(edges, t_max)
        flags = np.append(flags, False)
    return edges, flags


@lru_cache(maxsize=64)
def _rule(n: int, p: float, side: str) -> tuple[np.ndarray, np.ndarray]:
    if side == "none":
        return roots_legendre(n)
    if side == "right":
        return roots_jacobi(n, p, 0.0)
    return roots_jacobi(n, 0.0, p)


def _panel_sum(
    func: Callable[[np.ndarray], np.ndarray],
    p: float,
    beta: float,
    edges: np.ndarray,
    flags: np.ndarray,
    n: int,
) -> complex:
    a, b = edges[:-1], edges[1:]
    half = 0.5 * (b - a)
    right = flags[1:]
    left = flags[:-1] & ~right
    plain = ~(left | right)
    total = 0.0 + 0.0j
    for side, sel in (("right", right), ("left", left), ("none", plain)):
        if not np.any(sel):
            continue
        x, w = _rule(n, p, side)
        aa, hh = a[sel][:, None], half[sel][:, None]
        t = aa + hh * (x[None, :] + 1.0)
        if side == "none":
            weight = np.abs(np.cos(beta * t)) ** p
            total += np.sum(hh * (w * weight * func(t)))
            continue
        # distance to the zero, formed without cancellation
        d = hh * ((1.0 - x) if side == "right" else (1.0 + x))[None, :]
        s = beta * d
        smooth = (np.sin(s) / s) ** p
        scale = hh * (beta * hh) ** p
        total += np.sum(scale * (w * smooth * func(t)))
    return complex(total)


def integrate_cos_singular(
    func: Callable[[np.ndarray], np.ndarray],
    p: float,
    beta: float,
    t_max: float,
    symmetric: bool = False,
    order: int = 24,
    rtol: float = 1e-10,
    max_order: int = 768,
) -> complex:
    """``int |cos(beta t)|**p func(t) dt`` over ``[-t_max, t_max]``.

    ``func`` must be smooth between consecutive zeros of the cosine and on
    each side of ``t = 0`` (sign jumps there are fine).  Each panel ending at
    a zero of the cosine is integrated with a Gauss-Jacobi rule carrying the
    ``|t - t_k|**p`` factor exactly, so exponents down to ``p > -1`` are
    handled without grading.  The node count doubles until successive
    estimates agree to ``rtol``; otherwise :class:`QuadratureError`.

    With ``symmetric=True`` only ``[0, t_max]`` is integrated and doubled,
    valid for even ``func``.
    """
    if beta <= 0:
        raise ValueError("beta must be positive")
    if p <= -1:
        return complex(math.inf)
    edges, flags = _cos_breakpoints(beta, t_max)
    if symmetric:
        parts = [(edges, flags)]
    else:
        parts = [(edges, flags), (edges, flags)]
    n = order
    prev = None
    while n <= max_order:
        est = 0.0 + 0.0j
        for i, (e, f) in enumerate(parts):
            if i == 0:
                est += _panel_sum(func, p, beta, e, f, n)
            else:
                est += _panel_sum(lambda t: func(-t), p, beta, e, f, n)
        if symmetric:
            est *= 2
        if prev is not None and abs(est - prev) <= rtol * max(abs(est), 1e-300):
            return est
        prev = est
        n *= 2
    raise QuadratureError(
        f"quadrature not converged (exponent {p}, beta {beta}); last change "
        f"{abs(est - prev):.3e}"
    )


def lorentz_square_tail(t_max: float) -> float:
    """``int_{t_max}^inf (1+t**2)**-2 dt``."""
    return 0.5 * (math.pi / 2 - math.atan(t_max)) - 0.5 * t_max / (1 + t_max * t_max)


def cos_power_integral(p: float, beta: float, t_max: float = 1000.0, rtol: float = 1e-10) -> float:
    """``int_R |cos(beta t)|**p (1+t**2)**-2 dt``; ``inf`` when ``p <= -1``.

    The line is cut at ``t_max`` and both tails are replaced by the period
    average of ``|cos|**p`` times the exact tail of ``(1+t**2)**-2``.
    """
    if p <= -1:
        return math.inf
    core = integrate_cos_singular(
        lambda t: (1.0 + t * t) ** -2, p, beta, t_max, symmetric=True, rtol=rtol
    ).real
    return core + 2 * cos_power_mean(p) * lorentz_square_tail(t_max)
