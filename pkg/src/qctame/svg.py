"""Minimal deterministic SVG line plots (no plotting dependency)."""

from __future__ import annotations

import math

_COLORS = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf"]


def _ticks(lo: float, hi: float, target: int = 6) -> list[float]:
    if hi <= lo:
        hi = lo + 1.0
    raw = (hi - lo) / target
    mag = 10.0 ** math.floor(math.log10(raw))
    for mult in (1.0, 2.0, 5.0, 10.0):
        if raw <= mult * mag:
            step = mult * mag
            break
    first = math.ceil(lo / step) * step
    out = []
    t = first
    while t <= hi + 1e-12 * step:
        out.append(0.0 if abs(t) < 1e-12 * step else t)
        t += step
    return out


def _fmt(x: float) -> str:
    return f"{x:.6g}"


def line_plot(
    series: list[tuple[list[float], list[float], str]],
    path,
    *,
    title: str = "",
    xlabel: str = "",
    ylabel: str = "",
    logx: bool = False,
    logy: bool = False,
    width: int = 640,
    height: int = 420,
) -> None:
    """Write an SVG plot of (x, y, label) polyline series to ``path``."""
    ml, mr, mt, mb = 64, 16, 28, 44
    pw, ph = width - ml - mr, height - mt - mb

    def tx(v: float) -> float:
        return math.log10(v) if logx else v

    def ty(v: float) -> float:
        return math.log10(v) if logy else v

    xs = [tx(x) for s in series for x in s[0]]
    ys = [ty(y) for s in series for y in s[1]]
    if not xs or not ys:
        raise ValueError("nothing to plot")
    x0, x1 = min(xs), max(xs)
    y0, y1 = min(ys), max(ys)
    if x1 == x0:
        x0, x1 = x0 - 0.5, x1 + 0.5
    if y1 == y0:
        y0, y1 = y0 - 0.5, y1 + 0.5
    padx = 0.04 * (x1 - x0)
    pady = 0.06 * (y1 - y0)
    x0, x1 = x0 - padx, x1 + padx
    y0, y1 = y0 - pady, y1 + pady

    def px(v: float) -> float:
        return ml + (tx(v) - x0) / (x1 - x0) * pw

    def py(v: float) -> float:
        return mt + ph - (ty(v) - y0) / (y1 - y0) * ph

    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}" font-family="monospace" font-size="11">',
        f'<rect width="{width}" height="{height}" fill="white"/>',
        f'<rect x="{ml}" y="{mt}" width="{pw}" height="{ph}" fill="none" stroke="#333"/>',
    ]
    if title:
        out.append(f'<text x="{width / 2:.1f}" y="18" text-anchor="middle">{title}</text>')
    for t in _ticks(x0, x1):
        if logx:
            label = _fmt(10.0**t)
            xpix = ml + (t - x0) / (x1 - x0) * pw
        else:
            label = _fmt(t)
            xpix = px(t)
        if ml - 1 <= xpix <= ml + pw + 1:
            out.append(f'<line x1="{xpix:.1f}" y1="{mt + ph}" x2="{xpix:.1f}" y2="{mt + ph + 4}" stroke="#333"/>')
            out.append(f'<text x="{xpix:.1f}" y="{mt + ph + 16}" text-anchor="middle">{label}</text>')
    for t in _ticks(y0, y1):
        if logy:
            label = _fmt(10.0**t)
            ypix = mt + ph - (t - y0) / (y1 - y0) * ph
        else:
            label = _fmt(t)
            ypix = py(t)
        if mt - 1 <= ypix <= mt + ph + 1:
            out.append(f'<line x1="{ml - 4}" y1="{ypix:.1f}" x2="{ml}" y2="{ypix:.1f}" stroke="#333"/>')
            out.append(f'<text x="{ml - 6}" y="{ypix + 3:.1f}" text-anchor="end">{label}</text>')
    if xlabel:
        out.append(f'<text x="{ml + pw / 2:.1f}" y="{height - 8}" text-anchor="middle">{xlabel}</text>')
    if ylabel:
        out.append(
            f'<text x="14" y="{mt + ph / 2:.1f}" text-anchor="middle" '
            f'transform="rotate(-90 14 {mt + ph / 2:.1f})">{ylabel}</text>'
        )
    for i, (sx, sy, label) in enumerate(series):
        color = _COLORS[i % len(_COLORS)]
        pts = " ".join(f"{px(x):.2f},{py(y):.2f}" for x, y in zip(sx, sy))
        out.append(f'<polyline points="{pts}" fill="none" stroke="{color}" stroke-width="1.5"/>')
        for x, y in zip(sx, sy):
            out.append(f'<circle cx="{px(x):.2f}" cy="{py(y):.2f}" r="2.2" fill="{color}"/>')
        if label:
            out.append(
                f'<text x="{ml + pw - 6}" y="{mt + 14 + 14 * i}" text-anchor="end" '
                f'fill="{color}">{label}</text>'
            )
    out.append("</svg>")
    with open(path, "w") as fh:
        fh.write("\n".join(out) + "\n")
