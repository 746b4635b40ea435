import json

import pytest

from qctame import (
    ClassifyBudget,
    Explicit,
    FamilyAs,
    FamilyAsPrime,
    GaussInt,
    Geometric,
    Integers,
    Mapped,
    Point,
    ShrinkingRings,
    classify,
    normalize_period,
)
from qctame.qcmaps import Affine
from qctame.registry import cluster_bound, divergence_witness

FAST = ClassifyBudget(schedule_length=6, scan_windows=10)


def test_square_lattice_obstructed_by_ratio():
    v = classify(GaussInt(), FAST)
    assert v.classification == "ObstructedByA"
    assert v.registered_example == "square-lattice"
    assert v.ratio_report is not None and v.ratio_report.verdict_hint == "Divergent"
    # the cluster sub-report is still attached
    assert v.cluster_result is not None


def test_integer_row_is_inconclusive():
    v = classify(Integers(), FAST)
    assert v.classification == "Inconclusive"
    assert v.registered_example is None
    assert v.ratio_report.verdict_hint == "Bounded"
    # one point per fundamental strip: the cluster hypothesis flag is off
    assert v.cluster_result is None


@pytest.mark.parametrize("s", [0.5, 1.0, 2.0])
def test_power_rows_obstructed_by_ratio(s):
    v = classify(FamilyAs(s), FAST)
    assert v.classification == "ObstructedByA"


def test_one_sided_power_rows_obstructed(s=2.0):
    v = classify(FamilyAsPrime(s), FAST)
    assert v.classification == "ObstructedByA"


def test_doubling_rows_obstructed_by_cluster_bound():
    v = classify(Geometric(), FAST)
    assert v.classification == "ObstructedByB"
    assert v.registered_example == "doubling-rows"
    assert v.ratio_report.verdict_hint == "Bounded"
    assert v.cluster_result.exhausted


def test_shrinking_rings_inconclusive():
    v = classify(ShrinkingRings(), ClassifyBudget(schedule_length=4, scan_windows=10))
    assert v.classification == "Inconclusive"
    # the default cluster scan finds witnesses, so no obstruction either way
    assert v.cluster_result is not None and v.cluster_result.found


def test_explicit_set_is_inconclusive():
    v = classify(Explicit((Point(0, 0), Point(1, 0), Point(0, 1))), FAST)
    assert v.classification == "Inconclusive"
    assert v.cluster_result is None


def test_stability_under_period_normalization():
    for spec in (GaussInt(), Geometric()):
        a = classify(spec, FAST)
        b = classify(normalize_period(spec), FAST)
        assert a.classification == b.classification
        assert a.registered_example == b.registered_example


def test_registry_sees_through_identity_wrappers():
    wrapped = Mapped(GaussInt(), Affine(1.0, 0.0))
    assert divergence_witness(wrapped) is not None
    assert cluster_bound(Mapped(Geometric(), Affine(1.0, 0.0))) is not None
    # a genuine coordinate change is not recognized
    assert divergence_witness(Mapped(GaussInt(), Affine(2.0, 0.0))) is None


def test_verdict_json_shape():
    v = classify(GaussInt(), FAST)
    obj = v.to_json()
    assert obj["classification"] == "ObstructedByA"
    assert obj["theorem_a"]["verdict_hint"] == "Divergent"
    assert obj["theorem_b"]["found"] is False
    assert isinstance(obj["theorem_a"]["windows"], list)
    json.dumps(obj)  # serializable


def test_never_divergent_without_registration():
    # explicit sets can only ever reach Bounded/Undetermined
    spec = Explicit(tuple(Point(float(i), 0.0) for i in range(-20, 21)))
    v = classify(spec, FAST)
    assert v.ratio_report.verdict_hint in ("Bounded", "Undetermined")
    assert v.classification == "Inconclusive"
