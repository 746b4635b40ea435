"""Combine the ratio criterion and the cluster criterion into one verdict.

The ratio criterion runs first (cheaper); both sub-reports are always
attached. "ObstructedByA" needs a Divergent growth report, which in turn
needs a registered closed-form witness corroborated numerically.
"ObstructedByB" needs the translation symmetry, the quotient-punctures
flag, a registered cluster bound, and a scan that exhausts in agreement
with it. Anything else is "Inconclusive" with diagnostics; module errors
degrade to Inconclusive rather than aborting.
"""

from __future__ import annotations

from dataclasses import dataclass

from . import registry
from .clustering import ScanResult, cluster_scan
from .covering import GrowthReport, ratio_scan
from .pointsets import SetSpec

OBSTRUCTED_BY_A = "ObstructedByA"
OBSTRUCTED_BY_B = "ObstructedByB"
INCONCLUSIVE = "Inconclusive"


@dataclass(frozen=True)
class ClassifyBudget:
    schedule_length: int = 12
    tol: float = 1e-3
    scan_windows: int = 16
    scan_eps: float = 0.5
    scan_d: int = 2
    sample_budget: int = 100_000_000
    threads: int = 1


@dataclass(frozen=True)
class Verdict:
    classification: str
    ratio_report: GrowthReport | None
    cluster_result: ScanResult | None
    registered_example: str | None
    diagnostics: tuple[str, ...]

    def to_json(self) -> dict:
        a = None
        if self.ratio_report is not None:
            a = self.ratio_report.summary()
            a["windows"] = [
                {
                    "shape": s.window.shape,
                    "center": [s.window.center.re, s.window.center.im],
                    "extent": s.window.extent,
                    "ratio_lo": None if s.ratio is None else s.ratio.lo,
                    "ratio_hi": None if s.ratio is None else s.ratio.hi,
                    "closed_form": s.closed_form,
                    "error": s.error,
                }
                for s in self.ratio_report.samples
            ]
        b = None
        if self.cluster_result is not None:
            r = self.cluster_result
            b = {
                "found": r.found,
                "eps": r.eps,
                "d": r.d,
                "best": r.witness.to_json(),
                "trace": [list(t) for t in r.trace],
            }
        return {
            "classification": self.classification,
            "registered_example": self.registered_example,
            "theorem_a": a,
            "theorem_b": b,
            "diagnostics": list(self.diagnostics),
        }


def classify(spec: SetSpec, budget: ClassifyBudget = ClassifyBudget()) -> Verdict:
    """Run both criteria with registered schedules and report the strongest verdict."""
    diagnostics: list[str] = []

    witness = registry.divergence_witness(spec)
    if witness is not None:
        schedule = witness.schedule(budget.schedule_length)
    else:
        schedule = registry.bounded_schedule(spec, budget.schedule_length)
    report: GrowthReport | None
    try:
        report = ratio_scan(
            spec,
            schedule,
            budget.tol,
            threads=budget.threads,
            sample_budget=budget.sample_budget,
        )
    except Exception as exc:
        report = None
        diagnostics.append(f"ratio scan failed: {exc}")

    bound = registry.cluster_bound(spec)
    scan: ScanResult | None = None
    if spec.declared_period is not None and spec.infinite_quotient_punctures:
        eps = bound.eps if bound is not None else budget.scan_eps
        d = bound.d if bound is not None else budget.scan_d
        try:
            scan = cluster_scan(spec, eps, d, max_windows=budget.scan_windows)
        except Exception as exc:
            diagnostics.append(f"cluster scan failed: {exc}")

    if report is not None and report.verdict_hint == "Divergent":
        return Verdict(OBSTRUCTED_BY_A, report, scan, report.witness_family, tuple(diagnostics))

    if bound is not None and scan is not None:
        if scan.exhausted:
            return Verdict(OBSTRUCTED_BY_B, report, scan, bound.name, tuple(diagnostics))
        diagnostics.append(
            f"registered cluster bound {bound.name!r} contradicted by a witness; "
            "treating the registration as unusable"
        )

    return Verdict(INCONCLUSIVE, report, scan, None, tuple(diagnostics))
