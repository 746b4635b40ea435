"""Command-line surface: generate, covering, cluster, modulus, qcmap-check, classify.

Every run writes a machine-readable summary JSON next to its outputs and
prints a one-line human summary. Exit codes: 0 completed, 2 bad input,
3 budget exhausted. Disabling --svg never changes computed values.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from . import svg
from .clustering import cluster_scan, max_cluster
from .covering import RefinementBudgetError, ratio_scan
from .geometry import Window, disk, square
from .modulus import (
    CondenserProblem,
    SolverConvergenceError,
    annulus_condenser,
    condenser_modulus,
    interval_condenser,
    rectangle_condenser,
    ring_upper,
    vuorinen_lower,
)
from .pointsets import (
    FamilyAs,
    FamilyAsPrime,
    GaussInt,
    Geometric,
    Integers,
    SetSpec,
    ShrinkingRings,
    load_points,
    save_points,
)
from .qcmaps import (
    Affine,
    HorizontalStretch,
    Identity,
    PiecewiseAffine,
    diameter_ratio_check,
    dilatation_estimate,
)
from .verdict import ClassifyBudget, classify

EXIT_OK = 0
EXIT_BAD_INPUT = 2
EXIT_BUDGET = 3


class InputError(ValueError):
    pass


def _fmt(x: float) -> str:
    """Shortest round-trip decimal form for machine CSV output."""
    return repr(float(x))


def _human(x: float) -> str:
    return f"{x:.6g}"


def _write_json(path, obj) -> None:
    with open(path, "w") as fh:
        json.dump(obj, fh, indent=2, sort_keys=True)
        fh.write("\n")


def _write_csv(path, header: list[str], rows: list[list]) -> None:
    with open(path, "w") as fh:
        fh.write(",".join(header) + "\n")
        for row in rows:
            fh.write(",".join(_fmt(v) if isinstance(v, float) else str(v) for v in row) + "\n")


def _parse_triple(text: str) -> tuple[float, float, float]:
    parts = text.split(",")
    if len(parts) != 3:
        raise InputError(f"expected cx,cy,r, got {text!r}")
    try:
        cx, cy, r = (float(p) for p in parts)
    except ValueError:
        raise InputError(f"could not parse numbers in {text!r}") from None
    return cx, cy, r


def _build_set(args) -> SetSpec:
    if getattr(args, "points", None):
        return load_points(args.points)
    name = getattr(args, "set", None)
    if name is None:
        raise InputError("no set selected: pass --set NAME or --points FILE")
    name = name.lower()
    if name in ("as", "asprime"):
        if args.s is None:
            raise InputError(f"--set {name} requires --s S")
        if args.s <= 0:
            raise InputError("s must be positive")
        return FamilyAs(args.s) if name == "as" else FamilyAsPrime(args.s)
    simple = {
        "integers": Integers,
        "gaussint": GaussInt,
        "geometric": Geometric,
        "shrinkingrings": ShrinkingRings,
    }
    if name not in simple:
        raise InputError(f"unknown set {name!r}")
    return simple[name]()


def _build_window(args) -> Window | None:
    if getattr(args, "disk", None):
        cx, cy, r = _parse_triple(args.disk)
        if r <= 0:
            raise InputError("window extent must be positive")
        return disk(complex(cx, cy), r)
    if getattr(args, "square", None):
        cx, cy, r = _parse_triple(args.square)
        if r <= 0:
            raise InputError("window extent must be positive")
        return square(complex(cx, cy), r)
    return None


def _load_schedule(path) -> list[Window]:
    with open(path) as fh:
        data = json.load(fh)
    out = []
    for row in data:
        w = Window(row["shape"], complex(row["center"][0], row["center"][1]), row["extent"])
        out.append(w)
    return out


def _outdir(args) -> str:
    os.makedirs(args.out, exist_ok=True)
    return args.out


def _add_common(p, window_flags=True, out_help="output directory", out_default="."):
    p.add_argument("--set", help="built-in set name: integers|gaussint|as|asprime|geometric|shrinkingrings")
    p.add_argument("--s", type=float, help="exponent for the as/asprime families")
    p.add_argument("--points", help="point-list CSV defining an explicit set")
    p.add_argument("--out", default=out_default, help=out_help)
    p.add_argument("--svg", action="store_true", help="also emit an SVG plot")
    p.add_argument("--threads", type=int, default=os.cpu_count() or 1)
    if window_flags:
        p.add_argument("--disk", help="disk window cx,cy,r")
        p.add_argument("--square", help="square window cx,cy,r")
        p.add_argument("--schedule", help="JSON window schedule file")


def cmd_generate(args) -> int:
    spec = _build_set(args)
    window = _build_window(args)
    if window is None:
        raise InputError("generate requires --disk or --square")
    count = save_points(spec, window, args.out)
    print(f"wrote {count} points to {args.out}")
    return EXIT_OK


def cmd_covering(args) -> int:
    spec = _build_set(args)
    out = _outdir(args)
    if args.schedule:
        schedule = _load_schedule(args.schedule)
    else:
        window = _build_window(args)
        if window is None:
            raise InputError("covering requires --disk, --square, or --schedule")
        schedule = [window]
    report = ratio_scan(spec, schedule, args.tol, threads=args.threads, sample_budget=args.budget)
    rows = []
    for s in report.samples:
        rows.append(
            [
                s.window.shape,
                float(s.window.center.re),
                float(s.window.center.im),
                float(s.window.extent),
                float(s.ratio.lo) if s.ratio else "failed",
                float(s.ratio.hi) if s.ratio else "failed",
            ]
        )
    _write_csv(
        os.path.join(out, "covering.csv"),
        ["window_shape", "center_re", "center_im", "extent", "ratio_lo", "ratio_hi"],
        rows,
    )
    _write_json(os.path.join(out, "covering_summary.json"), report.summary())
    if args.svg:
        ok = [s for s in report.samples if s.ratio]
        svg.line_plot(
            [
                ([s.window.extent for s in ok], [s.ratio.lo for s in ok], "ratio lo"),
                ([s.window.extent for s in ok], [s.ratio.hi for s in ok], "ratio hi"),
            ],
            os.path.join(out, "covering.svg"),
            title="window ratio",
            xlabel="extent",
            ylabel="extent / covering radius",
        )
    print(
        f"verdict {report.verdict_hint}; max ratio lower bound {_human(report.max_ratio_lo)}"
    )
    return EXIT_BUDGET if any(s.failed for s in report.samples) else EXIT_OK


def cmd_cluster(args) -> int:
    spec = _build_set(args)
    out = _outdir(args)
    if args.eps is None or args.eps <= 0:
        raise InputError("cluster requires --eps > 0")
    window = _build_window(args)
    if window is not None:
        witness = max_cluster(spec, window, args.eps)
        _write_json(os.path.join(out, "cluster_witness.json"), witness.to_json())
        _write_json(
            os.path.join(out, "cluster_summary.json"),
            {"mode": "max_cluster", "count": witness.count, "eps": args.eps},
        )
        print(f"max cluster count {witness.count} at ({_human(witness.center.re)}, {_human(witness.center.im)})")
        return EXIT_OK
    if args.d is None or args.d < 1:
        raise InputError("cluster scan requires --d >= 1")
    result = cluster_scan(spec, args.eps, args.d, max_windows=args.budget)
    _write_json(os.path.join(out, "cluster_witness.json"), result.witness.to_json())
    _write_csv(
        os.path.join(out, "cluster_trace.csv"),
        ["window_index", "height", "best_count"],
        [[k, float(h), c] for k, h, c in result.trace],
    )
    _write_json(
        os.path.join(out, "cluster_summary.json"),
        {
            "mode": "scan",
            "found": result.found,
            "eps": args.eps,
            "d": args.d,
            "count": result.witness.count,
            "windows_scanned": len(result.trace),
        },
    )
    if args.svg:
        svg.line_plot(
            [([float(k) for k, _, _ in result.trace], [float(c) for _, _, c in result.trace], "best count")],
            os.path.join(out, "cluster.svg"),
            title="cluster scan",
            xlabel="window index (height 2^k)",
            ylabel="best count",
        )
    if result.found:
        w = result.witness
        print(f"witness found: count {w.count} at ({_human(w.center.re)}, {_human(w.center.im)})")
        return EXIT_OK
    print(f"exhausted after {len(result.trace)} windows; best count {result.witness.count}")
    return EXIT_BUDGET


def cmd_modulus(args) -> int:
    out = _outdir(args)
    problems: list[tuple[str, CondenserProblem]] = []
    bounds = None
    if args.annulus:
        r1, r2 = args.annulus
        if not 0 < r1 < r2:
            raise InputError("annulus radii must satisfy 0 < r < R")
        problems.append(("annulus", annulus_condenser(r1, r2, args.h)))
    elif args.rectangle:
        length, width_ = args.rectangle
        if length <= 0 or width_ <= 0:
            raise InputError("rectangle sides must be positive")
        problems.append(("rectangle", rectangle_condenser(length, width_, args.h)))
    elif args.intervals:
        parts = args.intervals.split(",")
        if len(parts) != 3:
            raise InputError("--intervals expects n,m,d")
        n, m, d = (int(p) for p in parts)
        if m <= n or d < 1:
            raise InputError("--intervals requires m > n and d >= 1")
        problems.append(
            ("intervals", interval_condenser(n, m, d, grid_spacing=args.h, pad_factor=args.pad))
        )
        bounds = {"vuorinen_lower": vuorinen_lower_of(n, m, d), "ring_upper": ring_upper(n, m, d)}
    elif args.problem:
        with open(args.problem) as fh:
            problems.append(("problem", CondenserProblem.from_json(json.load(fh))))
    else:
        raise InputError("modulus requires --annulus, --rectangle, --intervals, or --problem")

    rows = []
    summaries = {}
    for name, problem in problems:
        est = condenser_modulus(problem, maxiter=args.budget)
        for rec in est.records:
            rows.append([float(rec.h), float(rec.value), float(rec.residual), rec.iterations, float(est.extrapolated)])
        summaries[name] = {
            "value": est.value,
            "grid_spacing": est.grid_spacing,
            "extrapolated": est.extrapolated,
        }
        if bounds:
            summaries[name].update(bounds)
        print(f"{name}: modulus {_human(est.value)} (extrapolated {_human(est.extrapolated)})")
    _write_csv(
        os.path.join(out, "modulus.csv"),
        ["h", "value", "residual", "iterations", "extrapolated"],
        rows,
    )
    _write_json(os.path.join(out, "modulus_summary.json"), summaries)
    if args.svg:
        svg.line_plot(
            [([r[0] for r in rows], [r[1] for r in rows], "value(h)")],
            os.path.join(out, "modulus.svg"),
            title="grid convergence",
            xlabel="h",
            ylabel="modulus",
        )
    return EXIT_OK


def vuorinen_lower_of(n: int, m: int, d: int) -> float:
    from .modulus import continuum

    return vuorinen_lower(continuum(n - d, n), continuum(m, m + d))


def cmd_qcmap_check(args) -> int:
    out = _outdir(args)
    maps = {
        "identity": Identity(),
        "affine": Affine(complex(*args.a), complex(*args.b)) if args.a else Affine(1 + 2j, 3.0),
        "stretch": HorizontalStretch(args.K),
        "piecewise": PiecewiseAffine((-1.0, 1.0), (1.0, args.K, 1.0)),
    }
    if args.map not in maps:
        raise InputError(f"unknown map {args.map!r}")
    mp = maps[args.map]
    k_exact = mp.exact_dilatation()
    k_used = max(args.K, k_exact)
    rows = []
    for n, m, d in args.cases:
        rep = diameter_ratio_check(mp, k_used, n, m, d)
        rows.append({"n": n, "m": m, "d": d, "K": k_used, "lhs": rep.lhs, "rhs": rep.rhs, "holds": rep.holds})
    est = dilatation_estimate(mp, square(0, 4.0), 1e-3)
    result = {
        "map": mp.to_json(),
        "dilatation_estimate": est,
        "exact_dilatation": k_exact,
        "checks": rows,
    }
    _write_json(os.path.join(out, "qcmap_check.json"), result)
    ok = all(r["holds"] for r in rows)
    print(f"dilatation estimate {_human(est)} (exact {_human(k_exact)}); checks hold: {ok}")
    return EXIT_OK


def cmd_classify(args) -> int:
    spec = _build_set(args)
    out = _outdir(args)
    budget = ClassifyBudget(
        schedule_length=args.schedule_length,
        tol=args.tol,
        scan_windows=args.budget,
        threads=args.threads,
    )
    verdict = classify(spec, budget)
    _write_json(os.path.join(out, "verdict.json"), verdict.to_json())
    tag = f" ({verdict.registered_example})" if verdict.registered_example else ""
    print(f"{verdict.classification}{tag}")
    return EXIT_OK


def _cases_arg(text: str) -> list[tuple[int, int, int]]:
    out = []
    for chunk in text.split(";"):
        n, m, d = (int(p) for p in chunk.split(","))
        out.append((n, m, d))
    return out


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="qctame", description=__doc__)
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("generate", help="enumerate a set on a window into CSV")
    _add_common(p, window_flags=True, out_help="output CSV file", out_default="points.csv")
    p.set_defaults(fn=cmd_generate)

    p = sub.add_parser("covering", help="certified window ratios over a schedule")
    _add_common(p)
    p.add_argument("--tol", type=float, default=1e-3)
    p.add_argument("--budget", type=int, default=100_000_000, help="sample budget per window")
    p.set_defaults(fn=cmd_covering)

    p = sub.add_parser("cluster", help="cluster counts: window max or strip scan")
    _add_common(p)
    p.add_argument("--eps", type=float)
    p.add_argument("--d", type=int)
    p.add_argument("--budget", type=int, default=16, help="strip windows to scan")
    p.set_defaults(fn=cmd_cluster)

    p = sub.add_parser("modulus", help="condenser modulus of standard configurations")
    p.add_argument("--annulus", nargs=2, type=float, metavar=("R1", "R2"))
    p.add_argument("--rectangle", nargs=2, type=float, metavar=("L", "W"))
    p.add_argument("--intervals", help="n,m,d interval condenser")
    p.add_argument("--problem", help="condenser problem JSON file")
    p.add_argument("--h", type=float, default=1.0 / 64.0, help="grid spacing")
    p.add_argument("--pad", type=float, default=8.0, help="box side / configuration diameter")
    p.add_argument("--out", default=".")
    p.add_argument("--svg", action="store_true")
    p.add_argument("--threads", type=int, default=os.cpu_count() or 1)
    p.add_argument("--budget", type=int, default=100_000, help="solver iteration budget")
    p.set_defaults(fn=cmd_modulus)

    p = sub.add_parser("qcmap-check", help="dilatation estimate and diameter-ratio checks")
    p.add_argument("--map", default="identity", help="identity|affine|stretch|piecewise")
    p.add_argument("--K", type=float, default=1.0)
    p.add_argument("--a", nargs=2, type=float, help="affine coefficient a (re im)")
    p.add_argument("--b", nargs=2, type=float, default=(0.0, 0.0), help="affine offset b (re im)")
    p.add_argument("--cases", type=_cases_arg, default=[(0, 2, 1), (0, 10, 1), (0, 10, 2)],
                   help="semicolon-separated n,m,d triples")
    p.add_argument("--out", default=".")
    p.set_defaults(fn=cmd_qcmap_check)

    p = sub.add_parser("classify", help="combined obstruction verdict for a set")
    _add_common(p, window_flags=False)
    p.add_argument("--tol", type=float, default=1e-3)
    p.add_argument("--schedule-length", type=int, default=12)
    p.add_argument("--budget", type=int, default=16, help="cluster scan windows")
    p.set_defaults(fn=cmd_classify)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        code = args.fn(args)
    except (InputError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BAD_INPUT
    except (RefinementBudgetError, SolverConvergenceError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    return code


if __name__ == "__main__":
    sys.exit(main())
