import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from qctame import (
    CertifiedInterval,
    FamilyAs,
    GaussInt,
    Geometric,
    Integers,
    RefinementBudgetError,
    ShrinkingRings,
    covering_radius,
    covering_ratio,
    disk,
    ratio_scan,
    square,
)
from qctame.pointsets import enumerate_points
from qctame.registry import between_levels_window, divergence_witness

from conftest import brute_covering

SQRT_HALF = math.sqrt(2) / 2


def test_interval_validation():
    with pytest.raises(ValueError):
        CertifiedInterval(1.0, 0.0)
    with pytest.raises(ValueError):
        CertifiedInterval(0.0, math.inf)
    iv = CertifiedInterval(1.0, 2.0)
    assert iv.mid == 1.5 and iv.width == 1.0 and iv.contains(1.0)


def test_gaussint_square_contains_cell_center_distance():
    iv = covering_radius(GaussInt(), square(0, 3), 1e-3)
    assert iv.width <= 1e-3
    assert iv.contains(SQRT_HALF)


def test_flat_power_rows_square():
    iv = covering_radius(FamilyAs(0.5), square(0, 10), 1e-3)
    assert iv.width <= 1e-3
    assert iv.contains(SQRT_HALF)


def test_integers_disk_radius_is_extent():
    iv = covering_radius(Integers(), disk(0, 5), 1e-3)
    assert iv.width <= 1e-3
    assert iv.contains(5.0)


def test_matches_brute_force_enclosure():
    w = square(0.5 + 0.25j, 2.0)
    pts = GaussInt().points_in_box((-6, 7, -6, 7))
    lo_b, hi_b = brute_covering(pts, w, 0.005)
    iv = covering_radius(GaussInt(), w, 1e-3)
    assert iv.lo <= hi_b and lo_b <= iv.hi  # the two enclosures overlap


def test_budget_error_reports_best_interval():
    with pytest.raises(RefinementBudgetError, match="refinement budget exhausted") as exc:
        covering_radius(GaussInt(), square(0, 3), 1e-9, sample_budget=2000)
    best = exc.value.best
    assert best.lo <= SQRT_HALF <= best.hi


def test_ratio_examples():
    for r in (1.0, 2.0, 5.0):
        iv = covering_ratio(Integers(), disk(0, r), 1e-3)
        assert iv.contains(1.0)
    iv = covering_ratio(GaussInt(), square(0, 4), 1e-3)
    assert iv.contains(4 * math.sqrt(2))


def test_steep_power_rows_ratio_closed_form():
    s, n = 2.0, 4
    g = n**s - (n - 1) ** s
    closed = 2 * n**s / math.sqrt(g * g + 1)
    iv = covering_ratio(FamilyAs(2.0), square(0, float(n**2)), 0.02)
    assert iv.contains(closed)


@settings(max_examples=12, deadline=None)
@given(
    st.sampled_from([Integers(), GaussInt(), FamilyAs(0.5), Geometric()]),
    st.complex_numbers(max_magnitude=8, allow_nan=False, allow_infinity=False),
    st.floats(min_value=0.5, max_value=6.0),
)
def test_sandwich_disk_square_disk(spec, z, r):
    tol = 1e-2
    d_small = covering_radius(spec, disk(z, r), tol)
    d_square = covering_radius(spec, square(z, r), tol)
    d_big = covering_radius(spec, disk(z, math.sqrt(2) * r), tol)
    assert d_small.lo <= d_square.hi
    assert d_square.lo <= d_big.hi


def test_monotone_in_extent():
    prev = None
    for r in (1.0, 2.0, 4.0, 8.0):
        iv = covering_radius(Geometric(), square(2j, r), 1e-3)
        if prev is not None:
            assert prev.lo <= iv.lo + 1e-3
        prev = iv


def test_refinement_convergence_on_tol_halving():
    tols = [0.1, 0.05, 0.025, 0.0125]
    ivs = [covering_radius(GaussInt(), square(0.1 + 0.2j, 2.5), t) for t in tols]
    for a, b in zip(ivs, ivs[1:]):
        assert b.lo >= a.lo - 1e-15
        assert b.hi <= a.hi + 1e-15


def test_translation_equivariance_within_tolerance():
    tol = 1e-3
    a = covering_radius(ShrinkingRings(), square(1.3 + 5j, 2.0), tol)
    b = covering_radius(ShrinkingRings(), square(2.3 + 5j, 2.0), tol)
    assert abs(a.mid - b.mid) <= 2 * tol


def test_covering_sees_points_outside_window():
    # window deep in the empty lower half plane of the doubling ladder: the
    # nearest points lie far outside the window; the sup sits at the bottom
    # edge above a half-integer, dist((0.5, -11), (0, 1)) = sqrt(144.25)
    iv = covering_radius(Geometric(), square(-10j, 1.0), 1e-2)
    assert iv.contains(math.sqrt(144.25))


# --- ratio_scan ------------------------------------------------------------


def test_scan_divergent_square_lattice():
    wit = divergence_witness(GaussInt())
    report = ratio_scan(GaussInt(), wit.schedule(8), 1e-3)
    assert report.verdict_hint == "Divergent"
    assert report.witness_family == "square-lattice"
    assert report.max_ratio_lo == pytest.approx(8 * math.sqrt(2), rel=1e-2)
    los = [s.ratio.lo for s in report.samples]
    assert los == sorted(los)


def test_scan_bounded_doubling_rows():
    sched = [between_levels_window(n) for n in range(6)]
    report = ratio_scan(Geometric(), sched, 1e-3)
    assert report.verdict_hint == "Bounded"
    assert report.witness_family is None
    assert report.bounded_by <= 4.0


def test_scan_marks_failures_undetermined():
    wit = divergence_witness(GaussInt())
    report = ratio_scan(GaussInt(), wit.schedule(3), 1e-9, sample_budget=2000)
    assert report.verdict_hint == "Undetermined"
    assert any(s.failed for s in report.samples)
    assert all("budget" in s.error for s in report.samples if s.failed)


def test_scan_threads_do_not_change_results():
    wit = divergence_witness(GaussInt())
    a = ratio_scan(GaussInt(), wit.schedule(5), 1e-3, threads=1)
    b = ratio_scan(GaussInt(), wit.schedule(5), 1e-3, threads=4)
    assert [(s.ratio.lo, s.ratio.hi) for s in a.samples] == [
        (s.ratio.lo, s.ratio.hi) for s in b.samples
    ]
    assert a.verdict_hint == b.verdict_hint == "Divergent"


def test_scan_requires_nonempty_schedule():
    with pytest.raises(ValueError):
        ratio_scan(GaussInt(), [], 1e-3)


def test_enumerate_agreement_inside_scan_windows():
    # the witness windows must actually contain lattice points (sanity)
    wit = divergence_witness(GaussInt())
    for w in wit.schedule(3):
        assert enumerate_points(GaussInt(), w).size > 0
