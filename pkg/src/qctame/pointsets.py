"""Closed discrete planar point sets: generators, enumeration, and queries.

Built-in families are the integer row, the unit square lattice, the
symmetric and one-sided power-row ladders (rows at +-n**s resp. n**s),
the doubling-row ladder (rows at 2**n, n >= 0), and the shrinking-ring
ladder (n points on a circle of radius 2**-(n+1) centered at height 2**n,
repeated at every integer translate). Explicit finite sets and affinely
mapped sets close the family under file ingestion and coordinate changes.

Generated coordinates are deterministic floating-point expressions, so
set membership and deduplication use exact binary equality throughout.
"""

from __future__ import annotations

import csv
import json
import math
from dataclasses import dataclass, field

import numpy as np

from . import kernels
from .geometry import Point, Window, as_complex, sort_points
from .qcmaps import MapSpec, Affine, map_from_json

Box = tuple[float, float, float, float]  # xmin, xmax, ymin, ymax


class PointFileError(ValueError):
    """Malformed point-list file (message carries the line number)."""


@dataclass(frozen=True)
class SetSpec:
    """Base class for declarative closed discrete sets.

    Subclasses implement ``points_in_box`` returning every set point inside
    a closed bounding box (unsorted). ``declared_period`` is a nonzero b
    such that z + b maps the set onto itself; ``infinite_quotient_punctures``
    declares whether a width-|b| fundamental strip meets infinitely many set
    points (the cluster criterion's hypothesis on the quotient surface).
    """

    def points_in_box(self, box: Box) -> np.ndarray:
        raise NotImplementedError

    @property
    def declared_period(self) -> complex | None:
        return None

    @property
    def infinite_quotient_punctures(self) -> bool:
        return False

    @property
    def kind(self) -> str:
        raise NotImplementedError

    def params(self) -> dict:
        return {}

    def to_json(self) -> dict:
        b = self.declared_period
        return {
            "kind": self.kind,
            "params": self.params(),
            "period": None if b is None else [b.real, b.imag],
        }


@dataclass(frozen=True)
class Integers(SetSpec):
    """The integer row: points k + 0i."""

    def points_in_box(self, box: Box) -> np.ndarray:
        xmin, xmax, ymin, ymax = box
        if ymin > 0 or ymax < 0:
            return np.empty(0, dtype=np.complex128)
        return _int_range(xmin, xmax).astype(np.complex128)

    @property
    def declared_period(self):
        return 1 + 0j

    @property
    def kind(self):
        return "integers"


@dataclass(frozen=True)
class GaussInt(SetSpec):
    """The unit square lattice k + mi."""

    def points_in_box(self, box: Box) -> np.ndarray:
        xmin, xmax, ymin, ymax = box
        xs = _int_range(xmin, xmax)
        ys = _int_range(ymin, ymax)
        if xs.size == 0 or ys.size == 0:
            return np.empty(0, dtype=np.complex128)
        return (xs[:, None] + 1j * ys[None, :]).ravel()

    @property
    def declared_period(self):
        return 1 + 0j

    @property
    def infinite_quotient_punctures(self):
        return True

    @property
    def kind(self):
        return "gaussint"


def _positive_s(s) -> float:
    s = float(s)
    if not (math.isfinite(s) and s > 0):
        raise ValueError("s must be positive")
    return s


@dataclass(frozen=True)
class FamilyAs(SetSpec):
    """Integer rows at heights +-n**s for n = 0, 1, 2, ..."""

    s: float

    def __post_init__(self):
        object.__setattr__(self, "s", _positive_s(self.s))

    def points_in_box(self, box: Box) -> np.ndarray:
        xmin, xmax, ymin, ymax = box
        ymax_abs = max(abs(ymin), abs(ymax), 0.0)
        nmax = int(math.ceil(ymax_abs ** (1.0 / self.s))) + 1
        lv = np.power(np.arange(nmax + 1, dtype=np.float64), self.s)
        levels = np.unique(np.concatenate([-lv, lv]))
        return _rows_in_box(levels, box)

    @property
    def declared_period(self):
        return 1 + 0j

    @property
    def infinite_quotient_punctures(self):
        return True

    @property
    def kind(self):
        return "as"

    def params(self):
        return {"s": self.s}


@dataclass(frozen=True)
class FamilyAsPrime(SetSpec):
    """Integer rows at heights n**s for n = 0, 1, 2, ..."""

    s: float

    def __post_init__(self):
        object.__setattr__(self, "s", _positive_s(self.s))

    def points_in_box(self, box: Box) -> np.ndarray:
        xmin, xmax, ymin, ymax = box
        if ymax < 0:
            return np.empty(0, dtype=np.complex128)
        nmax = int(math.ceil(max(ymax, 0.0) ** (1.0 / self.s))) + 1
        levels = np.power(np.arange(nmax + 1, dtype=np.float64), self.s)
        return _rows_in_box(np.unique(levels), box)

    @property
    def declared_period(self):
        return 1 + 0j

    @property
    def infinite_quotient_punctures(self):
        return True

    @property
    def kind(self):
        return "asprime"

    def params(self):
        return {"s": self.s}


@dataclass(frozen=True)
class Geometric(SetSpec):
    """Integer rows at heights 2**n for n = 0, 1, 2, ..."""

    def points_in_box(self, box: Box) -> np.ndarray:
        xmin, xmax, ymin, ymax = box
        if ymax < 1:
            return np.empty(0, dtype=np.complex128)
        nmax = int(math.ceil(math.log2(max(ymax, 1.0)))) + 1
        levels = 2.0 ** np.arange(nmax + 1)
        return _rows_in_box(levels, box)

    @property
    def declared_period(self):
        return 1 + 0j

    @property
    def infinite_quotient_punctures(self):
        return True

    @property
    def kind(self):
        return "geometric"


@dataclass(frozen=True)
class ShrinkingRings(SetSpec):
    """Rings of n points, radius 2**-(n+1), centered at i*2**n, plus integer translates.

    Ring n >= 1 consists of i*(2**n + 2**-(n+1) * e**(2*pi*i*k/n)) for
    k = 0..n-1; the n = 1 ring is the single point i*(2 + 1/4).
    """

    def points_in_box(self, box: Box) -> np.ndarray:
        xmin, xmax, ymin, ymax = box
        if ymax < 1:
            return np.empty(0, dtype=np.complex128)
        out = []
        n = 1
        while 2.0**n - 0.5 ** (n + 1) <= ymax:
            rho = 0.5 ** (n + 1)
            k = np.arange(n)
            ring = 1j * (2.0**n + rho * np.exp(2j * np.pi * k / n))
            keep = (ring.imag >= ymin) & (ring.imag <= ymax)
            ring = ring[keep]
            if ring.size:
                # integer translates whose x lands in the box
                ms = _int_range(xmin - rho, xmax + rho)
                if ms.size:
                    pts = (ms[:, None] + ring[None, :]).ravel()
                    keep = (pts.real >= xmin) & (pts.real <= xmax)
                    out.append(pts[keep])
            n += 1
            if n > 60:  # heights overflow double range long before this
                break
        if not out:
            return np.empty(0, dtype=np.complex128)
        return np.concatenate(out)

    @property
    def declared_period(self):
        return 1 + 0j

    @property
    def infinite_quotient_punctures(self):
        return True

    @property
    def kind(self):
        return "shrinkingrings"


@dataclass(frozen=True)
class Explicit(SetSpec):
    """A finite, explicitly listed point set."""

    points: tuple[Point, ...]
    period: complex | None = None
    _zs: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        pts = tuple(Point.of(p) for p in self.points)
        if not pts:
            raise ValueError("explicit set must contain at least one point")
        zs = np.array([p.z for p in pts], dtype=np.complex128)
        if np.unique(zs).size != zs.size:
            raise ValueError("explicit set contains a duplicate point")
        object.__setattr__(self, "points", pts)
        object.__setattr__(self, "_zs", zs)

    def points_in_box(self, box: Box) -> np.ndarray:
        xmin, xmax, ymin, ymax = box
        zs = self._zs
        keep = (zs.real >= xmin) & (zs.real <= xmax) & (zs.imag >= ymin) & (zs.imag <= ymax)
        return zs[keep]

    @property
    def declared_period(self):
        return self.period

    @property
    def kind(self):
        return "explicit"

    def params(self):
        return {"points": [[p.re, p.im] for p in self.points]}


@dataclass(frozen=True)
class Mapped(SetSpec):
    """The image of a base set under an invertible built-in map."""

    base: SetSpec
    map: MapSpec
    period: complex | None = None

    def points_in_box(self, box: Box) -> np.ndarray:
        pre = self.map.preimage_box(box)
        zs = self.map.apply(self.base.points_in_box(pre))
        xmin, xmax, ymin, ymax = box
        keep = (zs.real >= xmin) & (zs.real <= xmax) & (zs.imag >= ymin) & (zs.imag <= ymax)
        return zs[keep]

    @property
    def declared_period(self):
        if self.period is not None:
            return self.period
        b = self.base.declared_period
        if b is None:
            return None
        return self.map.push_period(b)

    @property
    def infinite_quotient_punctures(self):
        return self.base.infinite_quotient_punctures

    @property
    def kind(self):
        return "mapped"

    def params(self):
        return {"base": self.base.to_json(), "map": self.map.to_json()}


def _int_range(lo: float, hi: float) -> np.ndarray:
    """Integers in the closed interval [lo, hi] as float64."""
    a = math.ceil(lo)
    b = math.floor(hi)
    if a > b:
        return np.empty(0, dtype=np.float64)
    return np.arange(a, b + 1, dtype=np.float64)


def _rows_in_box(levels: np.ndarray, box: Box) -> np.ndarray:
    xmin, xmax, ymin, ymax = box
    levels = levels[(levels >= ymin) & (levels <= ymax)]
    xs = _int_range(xmin, xmax)
    if levels.size == 0 or xs.size == 0:
        return np.empty(0, dtype=np.complex128)
    return (xs[:, None] + 1j * levels[None, :]).ravel()


def enumerate_points(spec: SetSpec, window: Window) -> np.ndarray:
    """All set points in the closed window, sorted lexicographically by (re, im)."""
    zs = spec.points_in_box(window.bbox())
    return sort_points(zs[window.contains(zs)])


def nearest_distances(
    spec: SetSpec,
    queries: np.ndarray,
    r_start: float = 1.0,
    return_indices: bool = False,
):
    """Exact distances from each query to the nearest set point.

    Enumerates the set on the queries' bounding box inflated by R for a
    doubling schedule R = r_start, 2*r_start, ...; a computed distance d <= R
    is final because any point outside the inflated box lies farther than R.
    """
    qs = np.asarray(queries, dtype=np.complex128).ravel()
    out = np.full(qs.size, np.inf)
    pts_out = np.full(qs.size, np.nan, dtype=np.complex128)
    unresolved = np.ones(qs.size, dtype=bool)
    r = max(float(r_start), 1e-9)
    while unresolved.any():
        sub = qs[unresolved]
        box = (
            sub.real.min() - r,
            sub.real.max() + r,
            sub.imag.min() - r,
            sub.imag.max() + r,
        )
        pts = spec.points_in_box(box)
        if pts.size:
            d, idx = kernels.nearest(pts, sub)
            out[unresolved] = d
            pts_out[unresolved] = pts[idx]
            done = d <= r
        else:
            done = np.zeros(sub.size, dtype=bool)
        mask = unresolved.copy()
        mask[np.flatnonzero(unresolved)[done]] = False
        unresolved = mask
        r *= 2.0
        if r > 1e15 and unresolved.any():
            raise RuntimeError("nearest-distance search did not terminate; set appears empty")
    if return_indices:
        return out, pts_out
    return out


def nearest_distance(spec: SetSpec, w) -> float:
    """Euclidean distance from w to the nearest set point."""
    return float(nearest_distances(spec, np.array([as_complex(w)]))[0])


class MissingPeriodError(ValueError):
    pass


def normalize_period(spec: SetSpec) -> SetSpec:
    """Conjugate the declared translation symmetry z + b to z + 1 via g(z) = z/b."""
    b = spec.declared_period
    if b is None or b == 0:
        raise MissingPeriodError("set has no declared translation symmetry")
    if b == 1:
        return spec
    return Mapped(spec, Affine(1.0 / b, 0.0), period=1 + 0j)


# ---------------------------------------------------------------------------
# File formats: point-list CSV and set-spec JSON


def save_points(spec: SetSpec, window: Window, path) -> int:
    """Write enumerate_points(spec, window) as CSV rows 're,im'; returns the count."""
    zs = enumerate_points(spec, window)
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["re", "im"])
        for z in zs:
            writer.writerow([repr(float(z.real)), repr(float(z.imag))])
    return int(zs.size)


def load_points(path) -> Explicit:
    """Read a point-list CSV (optional 're,im' header) into an explicit set."""
    pts: list[Point] = []
    with open(path, newline="") as fh:
        for lineno, row in enumerate(csv.reader(fh), start=1):
            if not row or (len(row) == 1 and not row[0].strip()):
                continue
            if lineno == 1 and [c.strip().lower() for c in row] == ["re", "im"]:
                continue
            if len(row) != 2:
                raise PointFileError(f"line {lineno}: expected two columns, got {len(row)}")
            try:
                re, im = float(row[0]), float(row[1])
            except ValueError:
                raise PointFileError(f"line {lineno}: could not parse {row!r}") from None
            pts.append(Point(re, im))
    try:
        return Explicit(tuple(pts))
    except ValueError as exc:
        raise PointFileError(str(exc)) from None


_SIMPLE_KINDS = {
    "integers": Integers,
    "gaussint": GaussInt,
    "geometric": Geometric,
    "shrinkingrings": ShrinkingRings,
}


def spec_from_json(obj: dict) -> SetSpec:
    kind = obj.get("kind")
    params = obj.get("params") or {}
    if kind in _SIMPLE_KINDS:
        return _SIMPLE_KINDS[kind]()
    if kind == "as":
        return FamilyAs(params["s"])
    if kind == "asprime":
        return FamilyAsPrime(params["s"])
    if kind == "explicit":
        period = obj.get("period")
        return Explicit(
            tuple(Point(re, im) for re, im in params["points"]),
            period=None if period is None else complex(period[0], period[1]),
        )
    if kind == "mapped":
        period = obj.get("period")
        return Mapped(
            spec_from_json(params["base"]),
            map_from_json(params["map"]),
            period=None if period is None else complex(period[0], period[1]),
        )
    raise ValueError(f"unknown set kind {kind!r}")


def load_spec(path) -> SetSpec:
    with open(path) as fh:
        return spec_from_json(json.load(fh))
