"""Shared fixtures and independent brute-force oracles.

The oracles deliberately avoid the library's query structures: nearest
distances by direct minimization over explicit arrays, cluster counts by
all-pairs comparison, covering radii by dense uniform grids. Expected
values frozen in the tests were computed with these.
"""

from __future__ import annotations

import math

import numpy as np
import pytest

from qctame import kernels
from qctame.geometry import Window


@pytest.fixture(params=kernels.available_backends())
def nn_backend(request):
    old = kernels.backend()
    kernels.set_backend(request.param)
    yield request.param
    kernels.set_backend(old)


def brute_nearest(points: np.ndarray, w: complex) -> float:
    """Exact nearest distance by direct minimization."""
    points = np.asarray(points, dtype=np.complex128)
    dx = points.real - w.real
    dy = points.imag - w.imag
    return math.sqrt(float(np.min(dx * dx + dy * dy)))


def brute_count(points: np.ndarray, center: complex, eps: float) -> int:
    """Strict open-disk count with the squared-distance convention."""
    points = np.asarray(points, dtype=np.complex128)
    dx = points.real - center.real
    dy = points.imag - center.imag
    return int(np.sum(dx * dx + dy * dy < eps * eps))


def brute_max_cluster(points: np.ndarray, centers: np.ndarray, eps: float):
    """All-pairs max cluster count; returns (count, center) with lexicographic ties."""
    best = (-1, None)
    order = np.lexsort((np.asarray(centers).imag, np.asarray(centers).real))
    for c in np.asarray(centers)[order]:
        n = brute_count(points, complex(c), eps)
        if n > best[0]:
            best = (n, complex(c))
    return best


def brute_covering(points: np.ndarray, window: Window, h: float) -> tuple[float, float]:
    """Dense-grid Lipschitz enclosure of sup dist over the window.

    ``points`` must contain every set point within sup-distance of the
    window. Returns (lo, hi) with hi = lo + h*sqrt(2)/2.
    """
    xmin, xmax, ymin, ymax = window.bbox()
    nx = int(math.ceil((xmax - xmin) / h)) + 1
    ny = int(math.ceil((ymax - ymin) / h)) + 1
    xs = np.linspace(xmin, xmax, nx)
    ys = np.linspace(ymin, ymax, ny)
    grid = (xs[:, None] + 1j * ys[None, :]).ravel()
    grid = window.project(grid)  # pull outside samples onto the window
    pts = np.asarray(points, dtype=np.complex128)
    best = 0.0
    for chunk in np.array_split(grid, max(1, grid.size // 65536)):
        d2 = (chunk.real[:, None] - pts.real[None, :]) ** 2 + (
            chunk.imag[:, None] - pts.imag[None, :]
        ) ** 2
        best = max(best, math.sqrt(float(d2.min(axis=1).max())))
    step = max((xs[1] - xs[0]) if nx > 1 else 0.0, (ys[1] - ys[0]) if ny > 1 else 0.0)
    return best, best + step * math.sqrt(2) / 2


def ring_formula_points(n_max: int, m_lo: int, m_hi: int) -> np.ndarray:
    """Direct transcription of the shrinking-ring formula, independent of the generator."""
    out = []
    for n in range(1, n_max + 1):
        for k in range(n):
            c = 2.0**n + 0.5 ** (n + 1) * np.exp(2j * np.pi * k / n)
            for m in range(m_lo, m_hi + 1):
                out.append(m + 1j * c)
    return np.array(out, dtype=np.complex128)
