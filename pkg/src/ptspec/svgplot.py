"""Minimal deterministic SVG plotting for ptspec CSV data.

Hand-rolled on purpose: the output is byte-stable for identical input
(no timestamps, ids, or library version strings), which matplotlib SVG
does not guarantee.
"""

from __future__ import annotations

import math
from pathlib import Path

_W, _H = 640, 480
_ML, _MR, _MT, _MB = 70, 20, 20, 50
_COLORS = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b")


def _nice_ticks(lo: float, hi: float, n: int = 5):
    if not math.isfinite(lo) or not math.isfinite(hi):
        return [0.0]
    if hi <= lo:
        hi = lo + 1.0
    raw = (hi - lo) / n
    mag = 10.0 ** math.floor(math.log10(raw))
    for m in (1.0, 2.0, 2.5, 5.0, 10.0):
        if raw <= m * mag:
            step = m * mag
            break
    start = math.ceil(lo / step) * step
    ticks = []
    x = start
    while x <= hi + 1e-12 * step:
        ticks.append(round(x / step) * step)
        x += step
    return ticks or [lo]


def render_svg(
    series: list[dict],
    x_label: str = "x",
    y_label: str = "y",
    title: str = "",
) -> str:
    """SVG text for line/scatter series: [{x, y, label, kind}]."""
    xs = [v for s in series for v in s["x"] if math.isfinite(v)]
    ys = [v for s in series for v in s["y"] if math.isfinite(v)]
    if not xs or not ys:
        raise ValueError("nothing to plot")
    x0, x1 = min(xs), max(xs)
    y0, y1 = min(ys), max(ys)
    if x1 == x0:
        x0, x1 = x0 - 0.5, x1 + 0.5
    if y1 == y0:
        y0, y1 = y0 - 0.5, y1 + 0.5
    padx = 0.04 * (x1 - x0)
    pady = 0.04 * (y1 - y0)
    x0, x1 = x0 - padx, x1 + padx
    y0, y1 = y0 - pady, y1 + pady
    iw = _W - _ML - _MR
    ih = _H - _MT - _MB

    def px(x):
        return _ML + iw * (x - x0) / (x1 - x0)

    def py(y):
        return _MT + ih * (y1 - y) / (y1 - y0)

    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{_W}" height="{_H}" '
        f'viewBox="0 0 {_W} {_H}">',
        f'<rect x="0" y="0" width="{_W}" height="{_H}" fill="white"/>',
        f'<rect x="{_ML}" y="{_MT}" width="{iw}" height="{ih}" fill="none" '
        f'stroke="black" stroke-width="1"/>',
    ]
    for tx in _nice_ticks(x0, x1):
        if not x0 <= tx <= x1:
            continue
        X = px(tx)
        out.append(
            f'<line x1="{X:.2f}" y1="{_MT + ih}" x2="{X:.2f}" y2="{_MT + ih + 5}" stroke="black"/>'
        )
        out.append(
            f'<text x="{X:.2f}" y="{_MT + ih + 20}" font-size="11" text-anchor="middle">{tx:.6g}</text>'
        )
    for ty in _nice_ticks(y0, y1):
        if not y0 <= ty <= y1:
            continue
        Y = py(ty)
        out.append(
            f'<line x1="{_ML - 5}" y1="{Y:.2f}" x2="{_ML}" y2="{Y:.2f}" stroke="black"/>'
        )
        out.append(
            f'<text x="{_ML - 8}" y="{Y + 4:.2f}" font-size="11" text-anchor="end">{ty:.6g}</text>'
        )
    out.append(
        f'<text x="{_ML + iw / 2}" y="{_H - 12}" font-size="13" text-anchor="middle">{x_label}</text>'
    )
    out.append(
        f'<text x="16" y="{_MT + ih / 2}" font-size="13" text-anchor="middle" '
        f'transform="rotate(-90 16 {_MT + ih / 2})">{y_label}</text>'
    )
    if title:
        out.append(
            f'<text x="{_ML + iw / 2}" y="14" font-size="13" text-anchor="middle">{title}</text>'
        )
    for i, s in enumerate(series):
        color = _COLORS[i % len(_COLORS)]
        pts = [
            (px(x), py(y))
            for x, y in zip(s["x"], s["y"])
            if math.isfinite(x) and math.isfinite(y)
        ]
        if s.get("kind", "line") == "line" and len(pts) > 1:
            path = " ".join(f"{X:.2f},{Y:.2f}" for X, Y in pts)
            out.append(
                f'<polyline points="{path}" fill="none" stroke="{color}" stroke-width="1.5"/>'
            )
        else:
            for X, Y in pts:
                out.append(f'<circle cx="{X:.2f}" cy="{Y:.2f}" r="2.5" fill="{color}"/>')
        if s.get("label"):
            out.append(
                f'<text x="{_W - _MR - 6}" y="{_MT + 16 + 14 * i}" font-size="11" '
                f'text-anchor="end" fill="{color}">{s["label"]}</text>'
            )
    out.append("</svg>")
    return "\n".join(out) + "\n"


def plot_csv(
    csv_path,
    out_path,
    x_col: str,
    y_cols: list[str],
    kind: str = "line",
    title: str = "",
) -> None:
    from .output import read_csv

    columns, rows = read_csv(csv_path)
    if x_col not in columns:
        raise ValueError(f"column {x_col!r} not in {columns}")
    xi = columns.index(x_col)
    series = []
    for yc in y_cols:
        if yc not in columns:
            raise ValueError(f"column {yc!r} not in {columns}")
        yi = columns.index(yc)
        xs, ys = [], []
        for row in rows:
            x, y = row[xi], row[yi]
            if isinstance(x, float) and isinstance(y, float):
                xs.append(x)
                ys.append(y)
        series.append({"x": xs, "y": ys, "label": yc, "kind": kind})
    Path(out_path).write_text(render_svg(series, x_label=x_col, y_label=",".join(y_cols), title=title))
