"""Extremal-distance machinery: analytic bounds and a condenser solver.

Conventions: the modulus of the curve family joining two continua equals
the condenser capacity (Dirichlet energy of the equilibrium potential);
the reciprocal extremal-length convention is never used. A K-quasiconformal
map distorts any such modulus by at most a factor K in either direction.

The solver discretizes the domain rectangle with a cell-centered 5-point
Laplacian, pins cells within half a cell of each plate polyline to 0 / 1,
leaves the outer boundary insulated, and reports the discrete Dirichlet
energy at spacings h and h/2 together with the first-order Richardson
extrapolation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
import pyamg
import scipy.sparse as sp
from scipy.sparse.linalg import cg

from .geometry import Point
from .qcmaps import segment_distances


class PlatesMergeError(ValueError):
    pass


class SolverConvergenceError(RuntimeError):
    def __init__(self, residual: float, iterations: int):
        super().__init__(
            f"condenser solve did not converge: residual {residual:.3e} after {iterations} iterations"
        )
        self.residual = residual
        self.iterations = iterations


@dataclass(frozen=True)
class Continuum:
    """A polyline continuum; a single vertex is a degenerate point continuum."""

    vertices: tuple[Point, ...]

    def __post_init__(self):
        pts = tuple(Point.of(p) for p in self.vertices)
        if not pts:
            raise ValueError("continuum needs at least one vertex")
        if any(a == b for a, b in zip(pts, pts[1:])):
            raise ValueError("consecutive continuum vertices must be distinct")
        object.__setattr__(self, "vertices", pts)

    def as_array(self) -> np.ndarray:
        return np.array([p.z for p in self.vertices], dtype=np.complex128)

    @property
    def diameter(self) -> float:
        zs = self.as_array()
        if zs.size == 1:
            return 0.0
        return float(np.abs(zs[:, None] - zs[None, :]).max())

    def to_json(self) -> list[list[float]]:
        return [[p.re, p.im] for p in self.vertices]


def continuum(*zs) -> Continuum:
    return Continuum(tuple(Point.of(z) for z in zs))


def _segments(c: Continuum) -> tuple[np.ndarray, np.ndarray]:
    zs = c.as_array()
    if zs.size == 1:
        return zs, zs  # degenerate segment = the point itself
    return zs[:-1], zs[1:]


def continua_distance(e: Continuum, f: Continuum) -> float:
    """Exact distance between two polylines (min over segment pairs)."""
    ea, eb = _segments(e)
    fa, fb = _segments(f)
    best = math.inf
    # endpoints of each against every segment of the other, both ways; for
    # non-crossing polylines the minimum is attained at such a pair
    for zs, (a, b) in ((e.as_array(), (fa, fb)), (f.as_array(), (ea, eb))):
        d = segment_distances(zs, a, b)
        best = min(best, float(d.min()))
    if best > 0 and _polylines_cross(ea, eb, fa, fb):
        return 0.0
    return best


def _polylines_cross(ea, eb, fa, fb) -> bool:
    def orient(p, q, r):
        return np.sign((q - p).real * (r - p).imag - (q - p).imag * (r - p).real)

    for a, b in zip(ea, eb):
        o1 = orient(a, b, fa)
        o2 = orient(a, b, fb)
        o3 = orient(fa, fb, a)
        o4 = orient(fa, fb, b)
        if np.any((o1 * o2 < 0) & (o3 * o4 < 0)):
            return True
    return False


def vuorinen_lower(e: Continuum, f: Continuum) -> float:
    """(2/pi) * log(1 + min(diam E, diam F) / dist(E, F)).

    Lower bound for the modulus of the family joining two disjoint continua
    anywhere in the plane; diameters and distances are Euclidean.
    """
    de, df = e.diameter, f.diameter
    if de == 0 or df == 0:
        raise ValueError("degenerate continuum")
    dist = continua_distance(e, f)
    if dist == 0:
        raise ValueError("continua intersect")
    return (2.0 / math.pi) * math.log1p(min(de, df) / dist)


def ring_upper(n: int, m: int, d: int) -> float:
    """2*pi / log(1 + 2(m-n)/d): modulus bound from the separating ring.

    Upper bound for the modulus of the family joining [n-d, n] and [m, m+d];
    the round ring of radii d/2 and d/2 + m - n centered at n - d/2
    separates the two intervals.
    """
    if m <= n:
        raise ValueError("m must exceed n")
    if d < 1:
        raise ValueError("d must be a positive integer")
    return 2.0 * math.pi / math.log1p(2.0 * (m - n) / d)


def qc_modulus_bounds(K: float, mod_value: float) -> tuple[float, float]:
    """Admissible image-modulus range (mod/K, mod*K) under any K-qc map."""
    if K < 1:
        raise ValueError("dilatation below 1")
    if mod_value < 0:
        raise ValueError("modulus must be nonnegative")
    return (mod_value / K, mod_value * K)


@dataclass(frozen=True)
class CondenserProblem:
    """Two plate polylines in an axis-aligned rectangle, with a grid spacing."""

    x0: float
    x1: float
    y0: float
    y1: float
    plate_e: Continuum
    plate_f: Continuum
    grid_spacing: float

    def __post_init__(self):
        if not (self.x1 > self.x0 and self.y1 > self.y0):
            raise ValueError("domain rectangle is empty")
        h = self.grid_spacing
        if not (h > 0 and (self.x1 - self.x0) / h >= 4 and (self.y1 - self.y0) / h >= 4):
            raise ValueError("grid spacing must fit at least four cells per side")
        for c in (self.plate_e, self.plate_f):
            zs = c.as_array()
            inside = (
                (zs.real >= self.x0)
                & (zs.real <= self.x1)
                & (zs.imag >= self.y0)
                & (zs.imag <= self.y1)
            )
            if not inside.all():
                raise ValueError("plates must lie inside the domain rectangle")
        if continua_distance(self.plate_e, self.plate_f) == 0:
            raise ValueError("continua intersect")

    def to_json(self) -> dict:
        return {
            "domain": [self.x0, self.x1, self.y0, self.y1],
            "plates": {"e": self.plate_e.to_json(), "f": self.plate_f.to_json()},
            "grid_spacing": self.grid_spacing,
        }

    @classmethod
    def from_json(cls, obj: dict) -> "CondenserProblem":
        x0, x1, y0, y1 = obj["domain"]
        return cls(
            x0,
            x1,
            y0,
            y1,
            Continuum(tuple(Point(a, b) for a, b in obj["plates"]["e"])),
            Continuum(tuple(Point(a, b) for a, b in obj["plates"]["f"])),
            obj["grid_spacing"],
        )


@dataclass(frozen=True)
class SolveRecord:
    h: float
    value: float
    residual: float
    iterations: int


@dataclass(frozen=True)
class CondenserEstimate:
    """Finest-grid energy plus the two-grid Richardson extrapolation."""

    value: float
    grid_spacing: float
    extrapolated: float
    records: tuple[SolveRecord, ...]


def _rasterize(problem: CondenserProblem, h: float):
    nx = max(4, round((problem.x1 - problem.x0) / h))
    ny = max(4, round((problem.y1 - problem.y0) / h))
    hx = (problem.x1 - problem.x0) / nx
    hy = (problem.y1 - problem.y0) / ny
    cx = problem.x0 + hx * (np.arange(nx) + 0.5)
    cy = problem.y0 + hy * (np.arange(ny) + 0.5)

    def plate_mask(cont: Continuum) -> np.ndarray:
        mask = np.zeros((nx, ny), dtype=bool)
        a, b = _segments(cont)
        tol = h / 2.0
        for za, zb in zip(a, b):
            ix0 = max(0, int(np.floor((min(za.real, zb.real) - tol - problem.x0) / hx)))
            ix1 = min(nx - 1, int(np.ceil((max(za.real, zb.real) + tol - problem.x0) / hx)))
            iy0 = max(0, int(np.floor((min(za.imag, zb.imag) - tol - problem.y0) / hy)))
            iy1 = min(ny - 1, int(np.ceil((max(za.imag, zb.imag) + tol - problem.y0) / hy)))
            if ix0 > ix1 or iy0 > iy1:
                continue
            sub = (cx[ix0 : ix1 + 1][:, None] + 1j * cy[iy0 : iy1 + 1][None, :]).ravel()
            close = segment_distances(sub, np.array([za]), np.array([zb])) <= tol
            mask[ix0 : ix1 + 1, iy0 : iy1 + 1] |= close.reshape(ix1 - ix0 + 1, iy1 - iy0 + 1)
        return mask

    e_mask = plate_mask(problem.plate_e)
    f_mask = plate_mask(problem.plate_f)
    if not e_mask.any() or not f_mask.any():
        raise PlatesMergeError("plates merge on grid: a plate rasterized to no cells")
    if (e_mask & f_mask).any() or _adjacent(e_mask, f_mask):
        raise PlatesMergeError("plates merge on grid")
    return nx, ny, hx, hy, e_mask, f_mask


def _adjacent(a: np.ndarray, b: np.ndarray) -> bool:
    return bool(
        (a[1:, :] & b[:-1, :]).any()
        or (a[:-1, :] & b[1:, :]).any()
        or (a[:, 1:] & b[:, :-1]).any()
        or (a[:, :-1] & b[:, 1:]).any()
    )


def _solve_once(problem: CondenserProblem, h: float, residual_tol: float, maxiter: int) -> SolveRecord:
    nx, ny, hx, hy, e_mask, f_mask = _rasterize(problem, h)
    wx = hy / hx  # conductance of a horizontal cell edge
    wy = hx / hy
    plate = e_mask | f_mask
    u = np.zeros((nx, ny))
    u[f_mask] = 1.0

    free = ~plate
    idx = -np.ones((nx, ny), dtype=np.int64)
    idx[free] = np.arange(int(free.sum()))
    nfree = int(free.sum())
    if nfree == 0:
        energy = _energy(u, wx, wy)
        return SolveRecord(h=h, value=energy, residual=0.0, iterations=0)

    rows, cols, vals = [], [], []
    diag = np.zeros(nfree)
    b = np.zeros(nfree)

    def couple(ia, ja, ib, jb, w):
        fa = free[ia, ja]
        fb = free[ib, jb]
        va = idx[ia, ja][fa & fb]
        vb = idx[ib, jb][fa & fb]
        rows.append(np.concatenate([va, vb]))
        cols.append(np.concatenate([vb, va]))
        vals.append(np.full(2 * va.size, -w))
        # every edge adds w to both endpoint diagonals; plate neighbors load b
        np.add.at(diag, idx[ia, ja][fa], w)
        np.add.at(diag, idx[ib, jb][fb], w)
        b[idx[ia, ja][fa & ~fb]] += w * u[ib, jb][fa & ~fb]
        b[idx[ib, jb][~fa & fb]] += w * u[ia, ja][~fa & fb]

    ii, jj = np.meshgrid(np.arange(nx - 1), np.arange(ny), indexing="ij")
    couple(ii, jj, ii + 1, jj, wx)
    ii, jj = np.meshgrid(np.arange(nx), np.arange(ny - 1), indexing="ij")
    couple(ii, jj, ii, jj + 1, wy)

    rows.append(np.arange(nfree))
    cols.append(np.arange(nfree))
    vals.append(diag)
    a = sp.csr_matrix(
        (np.concatenate(vals), (np.concatenate(rows), np.concatenate(cols))),
        shape=(nfree, nfree),
    )

    ml = pyamg.ruge_stuben_solver(a, max_coarse=200)
    m = ml.aspreconditioner(cycle="V")
    iters = 0

    def count(_):
        nonlocal iters
        iters += 1

    x, info = cg(a, b, rtol=residual_tol, atol=0.0, maxiter=maxiter, M=m, callback=count)
    bnorm = float(np.linalg.norm(b)) or 1.0
    residual = float(np.linalg.norm(b - a @ x)) / bnorm
    if info != 0 or residual > residual_tol * 10:
        raise SolverConvergenceError(residual, iters)
    u[free] = x
    return SolveRecord(h=h, value=_energy(u, wx, wy), residual=residual, iterations=iters)


def _energy(u: np.ndarray, wx: float, wy: float) -> float:
    ex = wx * np.sum((u[1:, :] - u[:-1, :]) ** 2)
    ey = wy * np.sum((u[:, 1:] - u[:, :-1]) ** 2)
    return float(ex + ey)


def condenser_modulus(
    problem: CondenserProblem,
    *,
    residual_tol: float = 1e-10,
    maxiter: int = 100_000,
) -> CondenserEstimate:
    """Discrete modulus of the family joining the plates, at h and h/2.

    Solves the insulated-boundary Dirichlet problem (plates pinned to 0 and
    1) by AMG-preconditioned conjugate gradients and returns the Dirichlet
    energy; the capacity error is first order in h, so the Richardson value
    is 2*value(h/2) - value(h).
    """
    h = problem.grid_spacing
    coarse = _solve_once(problem, h, residual_tol, maxiter)
    fine = _solve_once(problem, h / 2.0, residual_tol, maxiter)
    return CondenserEstimate(
        value=fine.value,
        grid_spacing=h / 2.0,
        extrapolated=2.0 * fine.value - coarse.value,
        records=(coarse, fine),
    )


def interval_condenser(
    n: int, m: int, d: int, *, grid_spacing: float | None = None, pad_factor: float = 8.0
) -> CondenserProblem:
    """Whole-plane condenser for the intervals [n-d, n] and [m, m+d].

    The plane is truncated to a square box of side pad_factor times the
    configuration diameter, centered on the configuration; the box boundary
    is insulated. The default spacing resolves the plate width d at 8
    cells.
    """
    if m <= n:
        raise ValueError("m must exceed n")
    diam = (m + d) - (n - d)
    side = pad_factor * diam
    cx = ((n - d) + (m + d)) / 2.0
    h = grid_spacing if grid_spacing is not None else d / 8.0
    # snap the box so the real axis is a row of cell centers: odd cell count
    ncells = int(round(side / h))
    if ncells % 2 == 0:
        ncells += 1
    half = ncells * h / 2.0
    return CondenserProblem(
        cx - half,
        cx + half,
        -half,
        half,
        continuum(n - d, n),
        continuum(m, m + d),
        h,
    )


def circle_continuum(center, radius: float, segments: int = 720) -> Continuum:
    """Closed polygonal approximation of a circle (first/last vertex equal)."""
    if radius <= 0:
        raise ValueError("radius must be positive")
    c = complex(center)
    k = np.arange(segments)
    zs = c + radius * np.exp(2j * np.pi * k / segments)
    zs = np.append(zs, zs[0])
    return Continuum(tuple(Point.of(z) for z in zs))


def annulus_condenser(r_inner: float, r_outer: float, grid_spacing: float, pad: float = 0.25) -> CondenserProblem:
    """Condenser between concentric circles |z| = r_inner and |z| = r_outer."""
    if not 0 < r_inner < r_outer:
        raise ValueError("radii must satisfy 0 < r_inner < r_outer")
    h = grid_spacing
    # chord length sqrt(r*h) keeps the polyline within h/8 of the circle
    segments = max(64, int(math.ceil(2 * math.pi * r_outer / math.sqrt(r_inner * h))))
    ncells = int(round(2 * (r_outer + pad) / h))
    if ncells % 2 == 1:
        ncells += 1  # symmetric cell-centered grid about both axes
    half = ncells * h / 2.0
    return CondenserProblem(
        -half,
        half,
        -half,
        half,
        circle_continuum(0, r_inner, segments),
        circle_continuum(0, r_outer, segments),
        h,
    )


def rectangle_condenser(length: float, width: float, grid_spacing: float) -> CondenserProblem:
    """Condenser between the two vertical ends of [0, length] x [0, width]."""
    if length <= 0 or width <= 0:
        raise ValueError("rectangle sides must be positive")
    return CondenserProblem(
        0.0,
        length,
        0.0,
        width,
        continuum(0j, complex(0, width)),
        continuum(complex(length, 0), complex(length, width)),
        grid_spacing,
    )
