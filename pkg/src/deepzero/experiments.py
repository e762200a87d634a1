"""Parameter sweeps behind the CLI commands."""
from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Iterable, Sequence, TypeVar

import numpy as np

from .bargmann import L2Function
from .deep_zero import (
    IndexSet,
    SweepRecord,
    recover_phi,
    sampling_ratio,
    seminorm_gram,
    smallest_eigenvalue,
    xi_eta,
)
from .errors import DeepZeroError
from .quadrature import uniform_grid

SAMPLING_HEADER = ("N", "beta", "parity", "pad", "lambda_min")
THETA_HEADER = ("theta", "beta", "numerator", "denominator", "ratio")
RECOVER_HEADER = ("scenario", "level", "nodes", "masked", "zeros", "max_error", "norm2")

T = TypeVar("T")
R = TypeVar("R")


def thread_count() -> int:
    raw = os.environ.get("DEEPZERO_THREADS")
    if raw:
        try:
            return max(1, int(raw))
        except ValueError:
            pass
    return min(8, os.cpu_count() or 1)


def ordered_map(func: Callable[[T], R], items: Sequence[T], threads: int | None = None) -> list[R]:
    """Map in parallel, results in input order; the first exception propagates."""
    threads = thread_count() if threads is None else threads
    if threads <= 1 or len(items) <= 1:
        return [func(x) for x in items]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(func, items))


def sampling_row(degree: int, beta: float, parity: str, pad="auto") -> SweepRecord:
    form = seminorm_gram(IndexSet(parity), beta, degree, pad)
    lam = smallest_eigenvalue(form.matrix)
    return SweepRecord(
        {"N": degree, "beta": beta, "parity": parity, "pad": form.pad, "lambda_min": lam}
    )


def sampling_sweep(
    beta: float, parity: str, degrees: Iterable[int], pad="auto", threads: int | None = None
) -> list[SweepRecord]:
    return ordered_map(lambda n: sampling_row(n, beta, parity, pad), list(degrees), threads)


def theta_row(theta: float, beta: float) -> SweepRecord:
    try:
        return sampling_ratio(theta, beta)
    except DeepZeroError as exc:
        nan = math.nan
        return SweepRecord(
            {"theta": theta, "beta": beta, "numerator": nan, "denominator": nan, "error": str(exc)}
        )


def theta_sweep(beta: float, thetas: Iterable[float], threads: int | None = None) -> list[SweepRecord]:
    return ordered_map(lambda th: theta_row(th, beta), list(thetas), threads)


def _zeros_in_window(beta: float, half_width: float) -> int:
    # zeros of cos(beta t) at (k + 1/2) pi / beta
    k_max = math.floor(half_width * beta / math.pi - 0.5 + 1e-9)
    return 2 * (k_max + 1) if k_max >= 0 else 0


def recover_demo(beta: float, levels: int = 4, half_width: float = 12.0) -> list[SweepRecord]:
    """Recovery on consistent and on incompatible data.

    Scenario ``consistent``: a Gaussian is split into its symmetric pieces and
    recovered on uniform grids whose nodes include every cosine zero; the
    exclusion band is narrower than the spacing, so exactly those nodes are
    masked.

    Scenario ``incompatible``: ``xi = 0`` with a smooth odd ``eta`` that does
    not vanish at the cosine zeros.  Grid spacing ``pi / (beta 3^L)`` puts the
    zeros half-way between nodes, and the discrete norm of the quotient grows
    roughly threefold per level because ``|phi|^2`` has non-integrable
    ``1/(t - t_k)^2`` spikes.
    """
    rows = []
    gauss = lambda t: np.exp(-t * t / 4)  # noqa: E731
    for level in range(1, levels + 1):
        h = math.pi / (2 * beta * 8 * 2 ** (level - 1))
        grid = uniform_grid(half_width, h)
        phi = L2Function.sample(gauss, grid)
        xi, eta = xi_eta(phi, beta, "even")
        exclusion = min(0.1, 0.5 * math.sin(beta * h))
        rec = recover_phi(xi, eta, beta, exclusion)
        err = float(np.abs(rec.phi.values[rec.valid] - phi.values[rec.valid]).max())
        rows.append(
            SweepRecord(
                {
                    "scenario": "consistent",
                    "level": level,
                    "nodes": len(grid),
                    "masked": rec.masked,
                    "zeros": _zeros_in_window(beta, float(grid.nodes[-1])),
                    "max_error": err,
                    "norm2": rec.norm2(),
                }
            )
        )
    for level in range(1, levels + 1):
        h = math.pi / (beta * 3**level)
        grid = uniform_grid(half_width, h)
        xi = L2Function(grid, np.zeros(len(grid)))
        eta = L2Function.sample(lambda t: t * np.exp(-t * t / 8), grid)
        rec = recover_phi(xi, eta, beta, 1e-9)
        rows.append(
            SweepRecord(
                {
                    "scenario": "incompatible",
                    "level": level,
                    "nodes": len(grid),
                    "masked": rec.masked,
                    "zeros": _zeros_in_window(beta, float(grid.nodes[-1])),
                    "max_error": math.nan,
                    "norm2": rec.norm2(),
                }
            )
        )
    return rows
