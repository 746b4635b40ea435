"""Acceptance suite: every numbered exit criterion, one pass/fail line each.

Run with ``pytest tests/test_acceptance.py -v -s`` to see the lines as they
print. Expected values come from closed forms, brute-force oracles, or
direct formula evaluation; tolerances are pinned here, not tuned later.
Criterion 6 is asserted as stated; for d in {2, 4, 8} its ring-index clause
is unattainable (the antipodal chord of the d-ring equals eps exactly and
the open disk excludes it), so those cases carry strict xfail marks. The
companion test pins the true behavior for all d.
"""

import json
import math
import time

import numpy as np
import pytest

from qctame import (
    ClassifyBudget,
    FamilyAs,
    FamilyAsPrime,
    GaussInt,
    Geometric,
    Integers,
    ShrinkingRings,
    annulus_condenser,
    classify,
    cluster_scan,
    condenser_modulus,
    covering_radius,
    covering_ratio,
    interval_condenser,
    ratio_scan,
    rectangle_condenser,
    ring_upper,
    square,
    vuorinen_lower,
)
from qctame.cli import main as cli_main
from qctame.modulus import continuum
from qctame.qcmaps import Affine, HorizontalStretch, Identity, PiecewiseAffine, diameter_ratio_check
from qctame.registry import between_levels_window

from conftest import brute_count

SQRT2 = math.sqrt(2)


def report(num: int, ok: bool, detail: str) -> None:
    print(f"\nACCEPTANCE {num} {'PASS' if ok else 'FAIL'}: {detail}")
    assert ok, f"criterion {num}: {detail}"


def test_criterion_1_flat_power_rows():
    t0 = time.perf_counter()
    spec = FamilyAs(0.5)
    ok = True
    details = []
    for r in (2.0, 5.0, 10.0, 20.0):
        iv = covering_radius(spec, square(0, r), 1e-3)
        ratio = covering_ratio(spec, square(0, r), 1e-3)
        contains = iv.contains(SQRT2 / 2)
        exceeds = ratio.lo > r * SQRT2 * (1 - 1e-2)
        ok &= contains and exceeds
        details.append(f"r={r:g}: d in [{iv.lo:.6f},{iv.hi:.6f}], ratio_lo={ratio.lo:.4f}")
    elapsed = time.perf_counter() - t0
    ok &= elapsed < 10.0
    report(1, ok, f"{'; '.join(details)}; {elapsed:.2f}s < 10s")


def test_criterion_2_steep_power_rows():
    t0 = time.perf_counter()
    spec = FamilyAs(2.0)
    mids = []
    ok = True
    for n in (2, 4, 8, 16):
        g = float(n**2 - (n - 1) ** 2)
        closed = 2 * n**2 / math.sqrt(g * g + 1)
        d_expected = math.sqrt(g * g + 1) / 2
        ratio = covering_ratio(spec, square(0, float(n**2)), 0.005 * d_expected)
        ok &= abs(ratio.mid - closed) <= 0.01 * closed
        ok &= ratio.contains(closed)
        mids.append(ratio.mid)
    ok &= mids == sorted(mids)
    windows = [square(0, float(n**2)) for n in (2, 4, 8, 16)]
    rep = ratio_scan(spec, windows, 1e-3)
    ok &= rep.verdict_hint == "Divergent"
    report(
        2,
        ok,
        f"ratios {['%.4f' % m for m in mids]} increasing, verdict {rep.verdict_hint}, "
        f"{time.perf_counter() - t0:.2f}s",
    )


def test_criterion_3_lattice_vs_integer_row():
    t0 = time.perf_counter()
    va = classify(GaussInt())
    vb = classify(Integers())
    elapsed = time.perf_counter() - t0
    ok = (
        va.classification == "ObstructedByA"
        and vb.classification == "Inconclusive"
        and elapsed < 30.0
    )
    report(3, ok, f"gaussint={va.classification}, integers={vb.classification}, {elapsed:.2f}s < 30s")


def test_criterion_4_one_sided_power_rows():
    t0 = time.perf_counter()
    spec = FamilyAsPrime(2.0)
    ok = True
    vals = []
    for n in (2, 4, 8):
        g = float(n**2 - (n - 1) ** 2)
        closed = n**2 / math.sqrt(g * g + 1)
        half = float(n**2) / 2.0
        d_expected = math.sqrt(g * g + 1) / 2
        ratio = covering_ratio(spec, square(complex(0, half), half), 0.005 * d_expected)
        ok &= abs(ratio.mid - closed) <= 0.01 * closed and ratio.contains(closed)
        vals.append(ratio.mid)
    report(4, ok, f"ratios {['%.4f' % v for v in vals]}, {time.perf_counter() - t0:.2f}s")


def _geometric_strip_oracle(height: float, eps: float) -> int:
    """All-pairs best cluster count over the doubling-row strip, by formula."""
    rows = [2.0**n for n in range(18) if 2.0**n <= height]
    centers = np.array([1j * y for y in rows])
    if centers.size == 0:
        return 0
    nbrs = np.array([m + 1j * y for y in rows for m in (-1, 0, 1)])
    return max(brute_count(nbrs, complex(c), eps) for c in centers)


def test_criterion_5_doubling_rows():
    t0 = time.perf_counter()
    sched = [between_levels_window(n) for n in range(16)]  # gaps up to 2**16
    rep = ratio_scan(Geometric(), sched, 1e-3)
    ok = rep.verdict_hint == "Bounded" and rep.bounded_by <= 4.0

    scan = cluster_scan(Geometric(), 0.5, 2, max_windows=16)  # strips up to 2**16
    ok &= scan.exhausted
    for k, height, best in scan.trace:
        expected = _geometric_strip_oracle(height, 0.5)
        ok &= best == expected == (1 if height >= 1 else 0)

    verdict = classify(Geometric())
    ok &= verdict.classification == "ObstructedByB"
    elapsed = time.perf_counter() - t0
    ok &= elapsed < 60.0
    report(
        5,
        ok,
        f"ratio verdict {rep.verdict_hint} (max hi {rep.bounded_by:.4f} <= 4), "
        f"strip counts all 1 (oracle agrees), classify {verdict.classification}, "
        f"{elapsed:.2f}s < 60s",
    )


def _ring_index(center: complex) -> int:
    return int(round(math.log2(center.imag)))


def _rings_brute_best(height: float, eps: float) -> int:
    ms = np.arange(-2, 4)
    pts = []
    for n in range(1, 18):
        if 2.0**n - 0.5 ** (n + 1) > height + eps:
            break
        k = np.arange(n)
        ring = 1j * (2.0**n + 0.5 ** (n + 1) * np.exp(2j * np.pi * k / n))
        pts.append((ms[:, None] + ring[None, :]).ravel())
    zs = np.concatenate(pts) if pts else np.empty(0, dtype=complex)
    centers = zs[(zs.real >= 0) & (zs.real < 1) & (np.abs(zs.imag) <= height)]
    if centers.size == 0:
        return 0
    return max(brute_count(zs, complex(c), eps) for c in centers)


# first ring reaching count >= d under the strict open-disk semantics;
# for even d the d-ring's antipodal chord equals eps = 2**-d exactly and is
# excluded (d = 6 sneaks in because one antipodal chord rounds below eps)
TRUE_FIRST_RING = {2: 3, 3: 3, 4: 5, 5: 5, 6: 6, 7: 7, 8: 9}


@pytest.mark.parametrize(
    "d",
    [
        pytest.param(2, marks=pytest.mark.xfail(
            reason="antipodal chord of the 2-ring equals eps; open disk excludes it",
            strict=True)),
        3,
        pytest.param(4, marks=pytest.mark.xfail(
            reason="antipodal chord of the 4-ring equals eps; open disk excludes it",
            strict=True)),
        5,
        6,
        7,
        pytest.param(8, marks=pytest.mark.xfail(
            reason="antipodal chords of the 8-ring round to >= eps; open disk excludes them",
            strict=True)),
    ],
)
def test_criterion_6_shrinking_rings_as_stated(d):
    eps = 2.0**-d
    res = cluster_scan(ShrinkingRings(), eps, d, max_windows=16)
    found = res.found and res.witness.count >= d
    brute = _rings_brute_best(res.trace[-1][1], eps)
    agrees = brute == res.witness.count
    ring = _ring_index(res.witness.center.z)
    ok = found and agrees and ring == d
    report(6, ok, f"d={d}: witness ring {ring} count {res.witness.count} (brute {brute})")


def test_criterion_6_true_behavior_and_classify():
    for d in range(2, 9):
        eps = 2.0**-d
        res = cluster_scan(ShrinkingRings(), eps, d, max_windows=16)
        assert res.found and res.witness.count >= d
        assert _ring_index(res.witness.center.z) == TRUE_FIRST_RING[d]
        assert res.witness.count == _rings_brute_best(res.trace[-1][1], eps)
    verdict = classify(ShrinkingRings(), ClassifyBudget(schedule_length=8))
    assert verdict.classification == "Inconclusive"
    print("\nACCEPTANCE 6 (companion) PASS: true first rings "
          f"{TRUE_FIRST_RING}, classify Inconclusive")


def test_criterion_7_solver_closed_forms():
    target = 2 * math.pi
    t0 = time.perf_counter()
    est = condenser_modulus(annulus_condenser(1.0, math.e, 1 / 128))
    t_annulus = time.perf_counter() - t0
    coarse = est.records[0].value
    err_h = abs(coarse - target) / target
    err_rich = abs(est.extrapolated - target) / target
    ok = err_h < 0.02 and err_rich < 0.005 and t_annulus < 60.0

    t0 = time.perf_counter()
    rect = condenser_modulus(rectangle_condenser(2.0, 1.0, 1 / 128))
    t_rect = time.perf_counter() - t0
    err_rect = abs(rect.value - 0.5) / 0.5
    ok &= err_rect < 0.02 and t_rect < 60.0
    report(
        7,
        ok,
        f"annulus value(1/128) err {100 * err_h:.3f}% < 2%, Richardson err "
        f"{100 * err_rich:.4f}% < 0.5% ({t_annulus:.1f}s); rectangle err "
        f"{100 * err_rect:.3f}% < 2% ({t_rect:.1f}s)",
    )


def test_criterion_8_bound_sandwich():
    ok = True
    details = []
    for m in (2, 5, 10):
        for d in (1, 2):
            est = condenser_modulus(interval_condenser(0, m, d))
            lo = vuorinen_lower(continuum(-d, 0), continuum(m, m + d))
            hi = ring_upper(0, m, d)
            inside = 1.1 * lo <= est.extrapolated <= 0.9 * hi
            ok &= inside
            details.append(f"(m={m},d={d}): {lo:.3f} <~ {est.extrapolated:.3f} <~ {hi:.3f}")
    report(8, ok, "; ".join(details))


def test_criterion_9_diameter_ratio_property():
    rng = np.random.default_rng(20250809)
    maps = [
        lambda: Identity(),
        lambda: Affine(
            complex(rng.uniform(0.2, 3.0), rng.uniform(-2.0, 2.0)),
            complex(rng.uniform(-5.0, 5.0), rng.uniform(-5.0, 5.0)),
        ),
        lambda: HorizontalStretch(rng.uniform(1.0, 10.0)),
        lambda: PiecewiseAffine(
            (rng.uniform(-20.0, 0.0),),
            (rng.uniform(0.1, 1.0), rng.uniform(1.0, 10.0)),
        ),
    ]
    violations = 0
    for _ in range(1000):
        mp = maps[rng.integers(0, len(maps))]()
        n = int(rng.integers(-100, 100))
        m = n + int(rng.integers(1, 1001))
        d = int(rng.integers(1, 101))
        rep = diameter_ratio_check(mp, mp.exact_dilatation(), n, m, d)
        violations += not rep.holds
    report(9, violations == 0, f"1000 randomized cases, {violations} violations")


def _determinism_bundle(out) -> list:
    out.mkdir()
    assert cli_main(["generate", "--set", "gaussint", "--square", "0,0,3",
                     "--out", str(out / "pts.csv")]) == 0
    sched = out / "sched.json"
    sched.write_text(json.dumps(
        [{"shape": "square", "center": [0.0, 0.0], "extent": float(n)} for n in (1, 2, 4)]
    ))
    assert cli_main(["covering", "--set", "gaussint", "--schedule", str(sched),
                     "--out", str(out), "--svg"]) == 0
    assert cli_main(["cluster", "--set", "shrinkingrings", "--eps", "0.05", "--d", "5",
                     "--out", str(out), "--svg"]) == 0
    assert cli_main(["modulus", "--annulus", "1", "2", "--h", "0.1", "--out", str(out)]) == 0
    assert cli_main(["qcmap-check", "--map", "stretch", "--K", "3", "--out", str(out)]) == 0
    assert cli_main(["classify", "--set", "gaussint", "--schedule-length", "6",
                     "--out", str(out)]) == 0
    names = sorted(p.name for p in out.iterdir())
    return [(n, (out / n).read_bytes()) for n in names]


def test_criterion_10_determinism(tmp_path):
    a = _determinism_bundle(tmp_path / "run1")
    b = _determinism_bundle(tmp_path / "run2")
    names_equal = [x[0] for x in a] == [x[0] for x in b]
    diffs = [na for (na, ba), (_, bb) in zip(a, b) if ba != bb]
    ok = names_equal and not diffs
    report(10, ok, f"{len(a)} machine outputs byte-identical across two runs"
           + (f"; differing: {diffs}" if diffs else ""))
