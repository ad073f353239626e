"""A minimal SVG 1.1 line-chart writer: axes, ticks, polylines, legend.

Kept dependency-free on purpose; the charts are plain diagnostic plots, not
publication graphics.
"""

from __future__ import annotations

import math
from pathlib import Path

__all__ = ["line_chart"]

_COLORS = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b")

_W, _H = 720, 480
_ML, _MR, _MT, _MB = 72, 24, 40, 56


def _nice_ticks(lo: float, hi: float, n: int = 6) -> list[float]:
    if not math.isfinite(lo) or not math.isfinite(hi):
        return []
    if hi == lo:
        hi = lo + 1.0
    raw = (hi - lo) / n
    mag = 10.0 ** math.floor(math.log10(raw))
    for mult in (1.0, 2.0, 2.5, 5.0, 10.0):
        step = mult * mag
        if raw <= step:
            break
    start = math.ceil(lo / step) * step
    ticks = []
    t = start
    while t <= hi + 1e-12 * abs(step):
        ticks.append(0.0 if abs(t) < 1e-12 * step else t)
        t += step
    return ticks


def _fmt(v: float) -> str:
    if v == 0.0:
        return "0"
    if abs(v) >= 1e4 or abs(v) < 1e-3:
        return f"{v:.2e}"
    return f"{v:.6g}"


def line_chart(path: str | Path, x, series: dict[str, list[float]],
               title: str = "", x_label: str = "", y_label: str = "") -> None:
    """Write one chart with a shared x grid and one polyline per series.

    Non-finite points break the polyline rather than distorting the scale.
    """
    x = [float(v) for v in x]
    finite = [v for ys in series.values() for v in ys if math.isfinite(v)]
    if not x or not finite:
        raise ValueError("nothing to plot")
    x0, x1 = min(x), max(x)
    y0, y1 = min(finite), max(finite)
    if y0 == y1:
        y0, y1 = y0 - 1.0, y1 + 1.0
    pad = 0.05 * (y1 - y0)
    y0, y1 = y0 - pad, y1 + pad
    pw, ph = _W - _ML - _MR, _H - _MT - _MB

    def sx(v):
        return _ML + pw * (v - x0) / (x1 - x0) if x1 > x0 else _ML + pw / 2

    def sy(v):
        return _MT + ph * (1.0 - (v - y0) / (y1 - y0))

    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{_W}" height="{_H}" '
        f'viewBox="0 0 {_W} {_H}">',
        f'<rect width="{_W}" height="{_H}" fill="white"/>',
        f'<text x="{_W/2:.1f}" y="24" text-anchor="middle" font-size="16" '
        f'font-family="sans-serif">{title}</text>',
    ]
    for t in _nice_ticks(x0, x1):
        px = sx(t)
        parts.append(f'<line x1="{px:.1f}" y1="{_MT}" x2="{px:.1f}" y2="{_H-_MB}" '
                     f'stroke="#dddddd" stroke-width="1"/>')
        parts.append(f'<text x="{px:.1f}" y="{_H-_MB+18}" text-anchor="middle" '
                     f'font-size="11" font-family="sans-serif">{_fmt(t)}</text>')
    for t in _nice_ticks(y0, y1):
        py = sy(t)
        parts.append(f'<line x1="{_ML}" y1="{py:.1f}" x2="{_W-_MR}" y2="{py:.1f}" '
                     f'stroke="#dddddd" stroke-width="1"/>')
        parts.append(f'<text x="{_ML-6}" y="{py+4:.1f}" text-anchor="end" '
                     f'font-size="11" font-family="sans-serif">{_fmt(t)}</text>')
    parts.append(f'<rect x="{_ML}" y="{_MT}" width="{pw}" height="{ph}" fill="none" '
                 f'stroke="black" stroke-width="1"/>')
    parts.append(f'<text x="{_ML + pw/2:.1f}" y="{_H-12}" text-anchor="middle" '
                 f'font-size="13" font-family="sans-serif">{x_label}</text>')
    parts.append(f'<text x="18" y="{_MT + ph/2:.1f}" text-anchor="middle" font-size="13" '
                 f'font-family="sans-serif" transform="rotate(-90 18 {_MT + ph/2:.1f})">'
                 f'{y_label}</text>')
    for i, (name, ys) in enumerate(series.items()):
        color = _COLORS[i % len(_COLORS)]
        pts = []
        runs = []
        for xv, yv in zip(x, ys):
            if math.isfinite(yv):
                pts.append(f"{sx(xv):.2f},{sy(yv):.2f}")
            elif pts:
                runs.append(pts)
                pts = []
        if pts:
            runs.append(pts)
        for run in runs:
            if len(run) == 1:
                cx, cy = run[0].split(",")
                parts.append(f'<circle cx="{cx}" cy="{cy}" r="2.5" fill="{color}"/>')
            else:
                parts.append(f'<polyline points="{" ".join(run)}" fill="none" '
                             f'stroke="{color}" stroke-width="1.8"/>')
        ly = _MT + 16 + 16 * i
        parts.append(f'<line x1="{_W-_MR-140}" y1="{ly-4}" x2="{_W-_MR-116}" y2="{ly-4}" '
                     f'stroke="{color}" stroke-width="2.5"/>')
        parts.append(f'<text x="{_W-_MR-110}" y="{ly}" font-size="12" '
                     f'font-family="sans-serif">{name}</text>')
    parts.append("</svg>")
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text("\n".join(parts) + "\n")
