"""Cluster counts in open disks around set points, and the strip scan.

A set that is quasiconformally equivalent to the complement of the integer
row and carries a translation symmetry with infinitely many quotient
punctures must contain, for every eps > 0 and every d, a point with at
least d set points strictly within eps. The scan searches expanding
fundamental-strip windows for such witnesses; exhausting the budget is
evidence (not proof) that no witness exists.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import kernels
from .geometry import Point, Window, as_complex, sort_points
from .pointsets import SetSpec, nearest_distance, normalize_period


class NotASetPointError(ValueError):
    pass


class EmptyWindowError(ValueError):
    pass


@dataclass(frozen=True)
class ClusterWitness:
    """A set point together with the set points strictly inside its eps-disk."""

    center: Point
    epsilon: float
    count: int
    members: tuple[Point, ...]

    def to_json(self) -> dict:
        return {
            "center": [self.center.re, self.center.im],
            "epsilon": self.epsilon,
            "count": self.count,
            "members": [[p.re, p.im] for p in self.members],
        }


def _members(spec: SetSpec, c: complex, eps: float) -> np.ndarray:
    pts = spec.points_in_box((c.real - eps, c.real + eps, c.imag - eps, c.imag + eps))
    if pts.size == 0:
        return pts
    dx = pts.real - c.real
    dy = pts.imag - c.imag
    return sort_points(pts[dx * dx + dy * dy < eps * eps])


def _witness(spec: SetSpec, c: complex, eps: float) -> ClusterWitness:
    members = _members(spec, c, eps)
    return ClusterWitness(
        center=Point.of(c),
        epsilon=float(eps),
        count=int(members.size),
        members=tuple(Point.of(z) for z in members),
    )


def cluster_count(spec: SetSpec, a, eps: float) -> ClusterWitness:
    """Count set points strictly inside the open eps-disk around the set point a."""
    if eps <= 0:
        raise ValueError("eps must be positive")
    c = as_complex(a)
    if nearest_distance(spec, c) != 0.0:
        raise NotASetPointError(f"center not a set point: {c}")
    return _witness(spec, c, eps)


def max_cluster(spec: SetSpec, window: Window, eps: float) -> ClusterWitness:
    """The witness maximizing the cluster count over set points in the window.

    Neighbor counting inflates the candidate region by eps so points just
    outside the window are counted; ties break to the lexicographically
    smallest center.
    """
    if eps <= 0:
        raise ValueError("eps must be positive")
    from .pointsets import enumerate_points

    centers = enumerate_points(spec, window)
    if centers.size == 0:
        raise EmptyWindowError("no set points in window")
    xmin, xmax, ymin, ymax = window.bbox()
    nbrs = spec.points_in_box((xmin - eps, xmax + eps, ymin - eps, ymax + eps))
    counts = kernels.count_within(nbrs, centers, eps)
    best = int(np.argmax(counts))  # first max = lexicographically smallest center
    return _witness(spec, complex(centers[best]), eps)


@dataclass(frozen=True)
class ScanResult:
    """Outcome of a strip scan: a found witness, or the best after exhaustion."""

    found: bool
    witness: ClusterWitness
    trace: tuple[tuple[int, float, int], ...]  # (window index, height, best count)
    eps: float
    d: int

    @property
    def exhausted(self) -> bool:
        return not self.found


def cluster_scan(spec: SetSpec, eps: float, d: int, max_windows: int = 16) -> ScanResult:
    """Search strips [0,1) x [-H, H], H = 2, 4, ..., for a count >= d witness.

    Requires a declared translation symmetry; the set is period-normalized
    first and the witness is reported in normalized coordinates. Returns at
    the first window containing a witness, else the best witness found.
    """
    if eps <= 0:
        raise ValueError("eps must be positive")
    if d < 1:
        raise ValueError("d must be a positive integer")
    s = normalize_period(spec)
    trace: list[tuple[int, float, int]] = []
    best: tuple[int, int, complex] | None = None  # (-count, window index, center)
    for k in range(1, max_windows + 1):
        h = 2.0**k
        cands = s.points_in_box((0.0, 1.0, -h, h))
        centers = sort_points(cands[cands.real < 1.0])
        if centers.size == 0:
            trace.append((k, h, 0))
            continue
        nbrs = s.points_in_box((-eps, 1.0 + eps, -h - eps, h + eps))
        counts = kernels.count_within(nbrs, centers, eps)
        i = int(np.argmax(counts))
        c = int(counts[i])
        trace.append((k, h, c))
        if best is None or -c < best[0]:
            best = (-c, k, complex(centers[i]))
        if c >= d:
            return ScanResult(True, _witness(s, complex(centers[i]), eps), tuple(trace), eps, d)
    if best is None:
        raise EmptyWindowError("no set points in any scanned strip window")
    return ScanResult(False, _witness(s, best[2], eps), tuple(trace), eps, d)
