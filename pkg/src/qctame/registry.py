"""Registered analytic facts about the built-in families.

A finite numerical scan can never prove that the window ratio diverges or
that cluster counts stay bounded; those are analytic statements. This
module transcribes the closed-form window schedules (with their exact
ratio formulas) for the families where divergence is provable, and the
minimum-gap facts that bound cluster counts. Verdicts only cite these
entries after the numerics corroborate them.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .geometry import Point, Window, square
from .pointsets import (
    FamilyAs,
    FamilyAsPrime,
    GaussInt,
    Geometric,
    Integers,
    Mapped,
    SetSpec,
    ShrinkingRings,
    nearest_distances,
)
from .qcmaps import Affine, Identity

SQRT2 = math.sqrt(2.0)


def _resolve(spec: SetSpec) -> SetSpec:
    """See through mapped wrappers whose map is the identity."""
    while isinstance(spec, Mapped):
        m = spec.map
        if isinstance(m, Identity) or (isinstance(m, Affine) and m.a == 1 and m.b == 0):
            spec = spec.base
        else:
            return spec
    return spec


@dataclass(frozen=True)
class DivergenceWitness:
    """A family-specific window schedule whose exact ratios diverge."""

    name: str
    first_index: int
    window_at: Callable[[int], Window]
    ratio_at: Callable[[int], float]
    index_of: Callable[[Window], int | None]

    def closed_form_for(self, window: Window) -> float | None:
        n = self.index_of(window)
        if n is None or n < self.first_index:
            return None
        if self.window_at(n) != window:
            return None
        return self.ratio_at(n)

    def schedule(self, count: int) -> list[Window]:
        return [self.window_at(n) for n in range(self.first_index, self.first_index + count)]


def _origin_square_witness(name: str, extent_at, ratio_at, index_of_extent, first: int):
    def window_at(n: int) -> Window:
        return square(0, extent_at(n))

    def index_of(w: Window) -> int | None:
        if w.shape != "square" or w.center != Point(0.0, 0.0):
            return None
        return index_of_extent(w.extent)

    return DivergenceWitness(name, first, window_at, ratio_at, index_of)


def _power_gap_ratio(n: int, s: float) -> float:
    g = np.power(float(n), s) - np.power(float(n - 1), s)
    return 2.0 * np.power(float(n), s) / math.sqrt(g * g + 1.0)


def divergence_witness(spec: SetSpec) -> DivergenceWitness | None:
    spec = _resolve(spec)
    if isinstance(spec, GaussInt):
        return _origin_square_witness(
            "square-lattice",
            extent_at=float,
            ratio_at=lambda n: n * SQRT2,
            index_of_extent=lambda r: int(r) if float(int(r)) == r and r >= 1 else None,
            first=1,
        )
    if isinstance(spec, FamilyAs):
        s = spec.s
        if s <= 1:
            # flat regime: the covering radius over any origin square of
            # extent > 1 is sqrt(2)/2, attained at the bottom unit cells
            return _origin_square_witness(
                f"symmetric-power-rows(s={s:g})",
                extent_at=float,
                ratio_at=lambda n: n * SQRT2,
                index_of_extent=lambda r: int(r) if float(int(r)) == r and r >= 2 else None,
                first=2,
            )

        def extent_at(n: int) -> float:
            return float(np.power(float(n), s))

        def index_of_extent(r: float) -> int | None:
            n = int(round(r ** (1.0 / s)))
            return n if n >= 1 and extent_at(n) == r else None

        return _origin_square_witness(
            f"symmetric-power-rows(s={s:g})",
            extent_at=extent_at,
            ratio_at=lambda n: _power_gap_ratio(n, s),
            index_of_extent=index_of_extent,
            first=2,
        )
    if isinstance(spec, FamilyAsPrime):
        s = spec.s

        def window_at(n: int) -> Window:
            half = float(np.power(float(n), s)) / 2.0
            return square(complex(0.0, half), half)

        def index_of(w: Window) -> int | None:
            if w.shape != "square":
                return None
            n = int(round((2.0 * w.extent) ** (1.0 / s)))
            if n < 1 or window_at(n) != w:
                return None
            return n

        return DivergenceWitness(
            f"one-sided-power-rows(s={s:g})",
            2,
            window_at,
            lambda n: 0.5 * _power_gap_ratio(n, s),
            index_of,
        )
    return None


def between_levels_window(n: int) -> Window:
    """Square filling the vertical gap between row heights 2**n and 2**(n+1)."""
    half = 2.0 ** (n - 1)
    return square(complex(0.0, 3.0 * half), half)


def bounded_schedule(spec: SetSpec, count: int) -> list[Window]:
    """A default window schedule for families without a divergence witness."""
    spec = _resolve(spec)
    if isinstance(spec, (Geometric, ShrinkingRings)):
        return [between_levels_window(n) for n in range(count)]
    if isinstance(spec, Integers):
        return [square(0, 2.0**k) for k in range(1, count + 1)]
    # anchor generic windows at the set point nearest the origin
    _, pts = nearest_distances(spec, np.array([0j]), return_indices=True)
    anchor = complex(pts[0])
    return [square(anchor, 2.0**k) for k in range(1, count + 1)]


@dataclass(frozen=True)
class ClusterBound:
    """An analytic bound forcing cluster scans to exhaust for some (eps, d)."""

    name: str
    eps: float
    d: int
    reason: str


def cluster_bound(spec: SetSpec) -> ClusterBound | None:
    spec = _resolve(spec)
    if isinstance(spec, Geometric):
        return ClusterBound(
            name="doubling-rows",
            eps=0.5,
            d=2,
            reason=(
                "every pair of distinct points differs by at least 1 "
                "(horizontal unit steps within a row; row heights 2**n are "
                "at least 1 apart), so every open 0.5-disk holds one point"
            ),
        )
    return None
