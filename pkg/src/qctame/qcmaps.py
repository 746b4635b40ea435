"""Explicit quasiconformal test maps and the checks built on them.

The built-in maps are global sense-preserving homeomorphisms of the plane
with known exact dilatation: conformal affine maps (K = 1), the horizontal
stretch x + iy -> Kx + iy (dilatation exactly K), and piecewise-linear
horizontal reparametrizations with positive slopes (K = max(s, 1/s) over
the slopes). Checks: a finite-difference dilatation estimator, the
diameter-ratio inequality for images of separated real intervals, the
small-image-diameter search, and the uniform-domain curve conditions.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .geometry import Point, Window, as_complex

Box = tuple[float, float, float, float]


class OrientationError(ValueError):
    pass


@dataclass(frozen=True)
class MapSpec:
    """Base class for evaluable plane maps."""

    def apply(self, zs: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def preimage_box(self, box: Box) -> Box:
        """A bounding box whose image covers ``box`` (exact for the built-ins)."""
        raise NotImplementedError

    def push_period(self, b: complex) -> complex | None:
        """Image of a translation symmetry z + b, when it stays a translation."""
        return None

    def exact_dilatation(self) -> float:
        raise NotImplementedError

    @property
    def kind(self) -> str:
        raise NotImplementedError

    def params(self) -> dict:
        return {}

    def to_json(self) -> dict:
        return {"kind": self.kind, "params": self.params()}


@dataclass(frozen=True)
class Identity(MapSpec):
    def apply(self, zs):
        return np.asarray(zs, dtype=np.complex128)

    def preimage_box(self, box):
        return box

    def push_period(self, b):
        return b

    def exact_dilatation(self):
        return 1.0

    @property
    def kind(self):
        return "identity"


@dataclass(frozen=True)
class Affine(MapSpec):
    """z -> a*z + b with complex a != 0 (conformal, dilatation 1)."""

    a: complex
    b: complex = 0j

    def __post_init__(self):
        object.__setattr__(self, "a", complex(self.a))
        object.__setattr__(self, "b", complex(self.b))
        if self.a == 0:
            raise ValueError("affine coefficient a must be nonzero")

    def apply(self, zs):
        zs = np.asarray(zs, dtype=np.complex128)
        if self.a == 1 and self.b == 0:
            return zs
        return self.a * zs + self.b

    def preimage_box(self, box):
        xmin, xmax, ymin, ymax = box
        corners = np.array(
            [complex(xmin, ymin), complex(xmin, ymax), complex(xmax, ymin), complex(xmax, ymax)]
        )
        pre = (corners - self.b) / self.a
        return (pre.real.min(), pre.real.max(), pre.imag.min(), pre.imag.max())

    def push_period(self, b):
        return self.a * b

    def exact_dilatation(self):
        return 1.0

    @property
    def kind(self):
        return "affine"

    def params(self):
        return {"a": [self.a.real, self.a.imag], "b": [self.b.real, self.b.imag]}


@dataclass(frozen=True)
class HorizontalStretch(MapSpec):
    """x + iy -> K*x + iy; dilatation exactly K."""

    K: float

    def __post_init__(self):
        object.__setattr__(self, "K", float(self.K))
        if not (math.isfinite(self.K) and self.K >= 1):
            raise ValueError("stretch factor K must be >= 1")

    def apply(self, zs):
        zs = np.asarray(zs, dtype=np.complex128)
        return self.K * zs.real + 1j * zs.imag

    def preimage_box(self, box):
        xmin, xmax, ymin, ymax = box
        return (xmin / self.K, xmax / self.K, ymin, ymax)

    def push_period(self, b):
        return complex(self.K * b.real, b.imag)

    def exact_dilatation(self):
        return self.K

    @property
    def kind(self):
        return "stretch"

    def params(self):
        return {"K": self.K}


@dataclass(frozen=True)
class PiecewiseAffine(MapSpec):
    """x + iy -> phi(x) + iy with phi continuous piecewise linear, slopes > 0.

    ``breakpoints`` are strictly increasing; ``slopes`` has one more entry
    than ``breakpoints`` and applies left-to-right. phi is anchored by
    phi(breakpoints[0]) = breakpoints[0], so all-ones slopes reproduce the
    identity.
    """

    breakpoints: tuple[float, ...]
    slopes: tuple[float, ...]

    def __post_init__(self):
        bp = tuple(float(b) for b in self.breakpoints)
        sl = tuple(float(s) for s in self.slopes)
        if not bp:
            raise ValueError("need at least one breakpoint")
        if any(b2 <= b1 for b1, b2 in zip(bp, bp[1:])):
            raise ValueError("breakpoints must be strictly increasing")
        if len(sl) != len(bp) + 1:
            raise ValueError("need exactly len(breakpoints) + 1 slopes")
        if any(not (math.isfinite(s) and s > 0) for s in sl):
            raise ValueError("slopes must be positive")
        object.__setattr__(self, "breakpoints", bp)
        object.__setattr__(self, "slopes", sl)
        knots = [bp[0]]
        for b1, b2, s in zip(bp, bp[1:], sl[1:]):
            knots.append(knots[-1] + s * (b2 - b1))
        object.__setattr__(self, "_knots", tuple(knots))

    def _phi(self, x: np.ndarray) -> np.ndarray:
        bp = np.asarray(self.breakpoints)
        kn = np.asarray(self._knots)
        sl = np.asarray(self.slopes)
        idx = np.searchsorted(bp, x, side="right")  # 0 -> left of all breakpoints
        anchor_x = bp[np.clip(idx - 1, 0, len(bp) - 1)]
        anchor_y = kn[np.clip(idx - 1, 0, len(bp) - 1)]
        return anchor_y + sl[idx] * (x - anchor_x)

    def _phi_inv(self, y: np.ndarray) -> np.ndarray:
        bp = np.asarray(self.breakpoints)
        kn = np.asarray(self._knots)
        sl = np.asarray(self.slopes)
        idx = np.searchsorted(kn, y, side="right")
        anchor_x = bp[np.clip(idx - 1, 0, len(bp) - 1)]
        anchor_y = kn[np.clip(idx - 1, 0, len(bp) - 1)]
        return anchor_x + (y - anchor_y) / sl[idx]

    def apply(self, zs):
        zs = np.asarray(zs, dtype=np.complex128)
        return self._phi(zs.real) + 1j * zs.imag

    def preimage_box(self, box):
        xmin, xmax, ymin, ymax = box
        lo, hi = self._phi_inv(np.array([xmin, xmax]))
        return (float(lo), float(hi), ymin, ymax)

    def exact_dilatation(self):
        return max(max(s, 1.0 / s) for s in self.slopes)

    @property
    def kind(self):
        return "piecewise"

    def params(self):
        return {"breakpoints": list(self.breakpoints), "slopes": list(self.slopes)}


def map_from_json(obj: dict) -> MapSpec:
    kind = obj.get("kind")
    params = obj.get("params") or {}
    if kind == "identity":
        return Identity()
    if kind == "affine":
        a, b = params["a"], params["b"]
        return Affine(complex(a[0], a[1]), complex(b[0], b[1]))
    if kind == "stretch":
        return HorizontalStretch(params["K"])
    if kind == "piecewise":
        return PiecewiseAffine(tuple(params["breakpoints"]), tuple(params["slopes"]))
    raise ValueError(f"unknown map kind {kind!r}")


@dataclass(frozen=True)
class Curve:
    """A rectifiable polyline with at least two vertices."""

    vertices: tuple[Point, ...]

    def __post_init__(self):
        pts = tuple(Point.of(p) for p in self.vertices)
        if len(pts) < 2:
            raise ValueError("curve needs at least two vertices")
        if any(a == b for a, b in zip(pts, pts[1:])):
            raise ValueError("consecutive curve vertices must be distinct")
        object.__setattr__(self, "vertices", pts)

    def as_array(self) -> np.ndarray:
        return np.array([p.z for p in self.vertices], dtype=np.complex128)

    @property
    def length(self) -> float:
        zs = self.as_array()
        return float(np.sum(np.abs(np.diff(zs))))

    def cumulative_lengths(self) -> np.ndarray:
        zs = self.as_array()
        return np.concatenate([[0.0], np.cumsum(np.abs(np.diff(zs)))])


def segment_distances(zs: np.ndarray, a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Distances from points ``zs`` to the nearest of the segments a[k]->b[k]."""
    zs = np.asarray(zs, dtype=np.complex128).ravel()
    d = b - a
    len2 = (d * d.conj()).real
    t = ((zs[:, None] - a[None, :]) * d.conj()[None, :]).real
    t = np.clip(np.divide(t, len2[None, :], out=t, where=len2[None, :] > 0), 0.0, 1.0)
    proj = a[None, :] + t * d[None, :]
    return np.abs(zs[:, None] - proj).min(axis=1)


def curve_distance(zs: np.ndarray, curve: Curve) -> np.ndarray:
    v = curve.as_array()
    return segment_distances(zs, v[:-1], v[1:])


def dilatation_estimate(map: MapSpec, window: Window, h: float) -> float:
    """Max sampled dilatation from central finite differences at spacing h.

    Forms mu = f_zbar / f_z at every sample of an h-grid over the window and
    returns the largest (1 + |mu|) / (1 - |mu|). Exact (up to roundoff) for
    maps that are affine on the sampled cells.
    """
    if h <= 0:
        raise ValueError("step h must be positive")
    xmin, xmax, ymin, ymax = window.bbox()
    nx = max(2, min(512, int(math.floor((xmax - xmin) / h)) + 1))
    ny = max(2, min(512, int(math.floor((ymax - ymin) / h)) + 1))
    xs = np.linspace(xmin, xmax, nx)
    ys = np.linspace(ymin, ymax, ny)
    zs = (xs[:, None] + 1j * ys[None, :]).ravel()
    zs = zs[window.contains(zs)]
    fx = (map.apply(zs + h) - map.apply(zs - h)) / (2 * h)
    fy = (map.apply(zs + 1j * h) - map.apply(zs - 1j * h)) / (2 * h)
    fz = 0.5 * (fx - 1j * fy)
    fzb = 0.5 * (fx + 1j * fy)
    bad = np.abs(fzb) >= np.abs(fz)
    if bad.any():
        z = zs[np.flatnonzero(bad)[0]]
        raise OrientationError(f"orientation violated at sample {z}")
    mu = np.abs(fzb) / np.abs(fz)
    return float(np.max((1 + mu) / (1 - mu)))


def _image_diameter(map: MapSpec, lo: float, hi: float, stable_tol: float = 1e-6) -> float:
    """Diameter of f([lo, hi]) from dense samples, refined until stable."""
    n = 64
    prev = -math.inf
    while True:
        img = map.apply(np.linspace(lo, hi, n + 1))
        diam = _point_set_diameter(img)
        if diam - prev <= stable_tol:
            return diam
        prev = diam
        n *= 2
        if n > 1 << 20:
            return diam


def _point_set_diameter(zs: np.ndarray) -> float:
    if zs.size > 2048:  # pairwise would be quadratic; hull vertices suffice
        from scipy.spatial import ConvexHull

        xy = np.column_stack([zs.real, zs.imag])
        try:
            zs = zs[ConvexHull(xy).vertices]
        except Exception:  # collinear input
            pass
    d = np.abs(zs[:, None] - zs[None, :])
    return float(d.max())


def qc_diameter_bound(K: float, n: int, m: int, d: int) -> float:
    """exp(pi^2 K / log(1 + 2(m - n)/d)) - 1, the admissible diameter ratio.

    Upper-bounds min(diam f([n-d, n]), diam f([m, m+d])) / |f(m) - f(n)| for
    any K-quasiconformal plane map f. Overflows to +inf for extreme K (the
    bound is then vacuously true).
    """
    if K < 1:
        raise ValueError("dilatation below 1")
    if m <= n:
        raise ValueError("m must exceed n")
    if d < 1:
        raise ValueError("d must be a positive integer")
    x = math.pi**2 * K / math.log1p(2.0 * (m - n) / d)
    try:
        return math.exp(x) - 1.0
    except OverflowError:
        return math.inf


@dataclass(frozen=True)
class DiameterRatioReport:
    lhs: float
    rhs: float
    holds: bool


def diameter_ratio_check(map: MapSpec, K: float, n: int, m: int, d: int) -> DiameterRatioReport:
    """Check min(diam f(N), diam f(M)) / |f(m) - f(n)| <= qc_diameter_bound(K, n, m, d)

    with N = [n-d, n] and M = [m, m+d]; image diameters are sampled densely.
    """
    rhs = qc_diameter_bound(K, n, m, d)
    fm, fn = map.apply(np.array([float(m), float(n)]))
    denom = abs(fm - fn)
    if denom == 0:
        raise ValueError("degenerate denominator")
    lhs = float(min(_image_diameter(map, n - d, n), _image_diameter(map, m, m + d)) / denom)
    return DiameterRatioReport(lhs=lhs, rhs=rhs, holds=bool(lhs <= rhs))


def small_diameter_search(
    map: MapSpec, d: int, eps: float, lo: int, hi: int
) -> int | None:
    """Smallest n with [n-d, n] inside [lo, hi] and diam f([n-d, n]) <= eps, else None."""
    if d < 1:
        raise ValueError("d must be a positive integer")
    if lo > hi:
        raise ValueError("empty search range")
    for n in range(lo + d, hi + 1):
        if _image_diameter(map, n - d, n) <= eps:
            return n
    return None


@dataclass(frozen=True)
class UniformDomainReport:
    cond1: bool
    cond2: bool
    length: float
    chord: float
    worst_ratio: float  # max over samples of min-arclength / boundary distance


def uniform_domain_check(gamma: Curve, z1, z2, boundary, c: float) -> UniformDomainReport:
    """Check the two c-uniform-domain conditions along a polyline joining z1, z2.

    cond1: length(gamma) <= c * |z1 - z2|. cond2: at every vertex and segment
    midpoint z, min(arclength to z1, arclength to z2) <= c * dist(z, boundary),
    where ``boundary`` is a point set or a curve. cond2 is a sampled check.
    """
    z1, z2 = as_complex(z1), as_complex(z2)
    v = gamma.as_array()
    if not ((v[0] == z1 and v[-1] == z2) or (v[0] == z2 and v[-1] == z1)):
        raise ValueError("endpoint mismatch: curve does not join z1 and z2")
    if v[0] == z2:
        v = v[::-1]
    seg = np.abs(np.diff(v))
    total = float(seg.sum())
    chord = abs(z2 - z1)
    cond1 = total <= c * chord

    cum = np.concatenate([[0.0], np.cumsum(seg)])
    samples = np.concatenate([v, 0.5 * (v[:-1] + v[1:])])
    arcs = np.concatenate([cum, 0.5 * (cum[:-1] + cum[1:])])
    near = np.minimum(arcs, total - arcs)

    if isinstance(boundary, Curve):
        dist = curve_distance(samples, boundary)
    else:
        from .pointsets import nearest_distances

        dist = nearest_distances(boundary, samples)
    with np.errstate(divide="ignore", invalid="ignore"):
        ratios = np.where(near == 0, 0.0, near / dist)
    worst = float(np.max(ratios))
    cond2 = bool(np.all(near <= c * dist))
    return UniformDomainReport(cond1=bool(cond1), cond2=cond2, length=total, chord=chord, worst_ratio=worst)
