"""Minimal deterministic SVG chart emission for the CLI.

Each plotted series becomes one <polyline class="series"> (or one
<circle class="point"> group for scatters), so tests can count elements.
"""

from __future__ import annotations

import math
from xml.sax.saxutils import escape

WIDTH = 640
HEIGHT = 400
MARGIN = 50

_PALETTE = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#8c564b", "#e377c2")


def _scale(values: list[float]) -> tuple[float, float]:
    lo, hi = min(values), max(values)
    if lo == hi:
        lo, hi = lo - 1.0, hi + 1.0
    return lo, hi


def _x(v: float, lo: float, hi: float) -> float:
    return MARGIN + (v - lo) / (hi - lo) * (WIDTH - 2 * MARGIN)


def _y(v: float, lo: float, hi: float) -> float:
    return HEIGHT - MARGIN - (v - lo) / (hi - lo) * (HEIGHT - 2 * MARGIN)


def _document(body: list[str], x_label: str, y_label: str, title: str) -> str:
    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" '
        f'viewBox="0 0 {WIDTH} {HEIGHT}">',
        f'<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>',
        f'<line x1="{MARGIN}" y1="{HEIGHT - MARGIN}" x2="{WIDTH - MARGIN}" '
        f'y2="{HEIGHT - MARGIN}" stroke="black"/>',
        f'<line x1="{MARGIN}" y1="{MARGIN}" x2="{MARGIN}" '
        f'y2="{HEIGHT - MARGIN}" stroke="black"/>',
        f'<text x="{WIDTH // 2}" y="20" text-anchor="middle">{escape(title)}</text>',
        f'<text x="{WIDTH // 2}" y="{HEIGHT - 10}" text-anchor="middle">'
        f"{escape(x_label)}</text>",
        f'<text x="15" y="{HEIGHT // 2}" text-anchor="middle" '
        f'transform="rotate(-90 15 {HEIGHT // 2})">{escape(y_label)}</text>',
        *body,
        "</svg>",
    ]
    return "\n".join(parts)


def line_chart(
    series: list[tuple[str, list[tuple[float, float]]]],
    title: str = "",
    x_label: str = "day",
    y_label: str = "hits",
) -> str:
    """Multi-series line chart; one polyline per series plus a legend."""
    xs = [x for _, pts in series for x, _ in pts]
    ys = [y for _, pts in series for _, y in pts]
    if not xs:
        return _document(["<!-- no data -->"], x_label, y_label, title)
    xlo, xhi = _scale(xs)
    ylo, yhi = _scale(ys)
    body = []
    for i, (label, pts) in enumerate(series):
        color = _PALETTE[i % len(_PALETTE)]
        coords = " ".join(
            f"{_x(x, xlo, xhi):.2f},{_y(y, ylo, yhi):.2f}" for x, y in pts
        )
        body.append(
            f'<polyline class="series" fill="none" stroke="{color}" '
            f'points="{coords}"/>'
        )
        body.append(
            f'<text x="{WIDTH - MARGIN + 5}" y="{MARGIN + 15 * i}" '
            f'fill="{color}" font-size="11">{escape(label)}</text>'
        )
    return _document(body, x_label, y_label, title)


def loglog_scatter(
    points: list[tuple[float, float]],
    fit_line: tuple[float, float] | None = None,
    title: str = "",
    x_label: str = "log rank",
    y_label: str = "log count",
) -> str:
    """Scatter of (log x, log y) with an optional fitted line.

    `fit_line` is (slope, intercept) in log-log space.
    """
    pts = [(math.log(x), math.log(y)) for x, y in points if x > 0 and y > 0]
    if not pts:
        return _document(["<!-- no data -->"], x_label, y_label, title)
    xlo, xhi = _scale([p[0] for p in pts])
    ylo, yhi = _scale([p[1] for p in pts])
    body = []
    for lx, ly in pts:
        body.append(
            f'<circle class="point" cx="{_x(lx, xlo, xhi):.2f}" '
            f'cy="{_y(ly, ylo, yhi):.2f}" r="3" fill="#1f77b4"/>'
        )
    if fit_line is not None:
        slope, intercept = fit_line
        y0 = intercept + slope * xlo
        y1 = intercept + slope * xhi
        body.append(
            f'<polyline class="series" fill="none" stroke="#d62728" points="'
            f"{_x(xlo, xlo, xhi):.2f},{_y(y0, ylo, yhi):.2f} "
            f'{_x(xhi, xlo, xhi):.2f},{_y(y1, ylo, yhi):.2f}"/>'
        )
    return _document(body, x_label, y_label, title)


def bar_chart(
    items: list[tuple[str, float]],
    title: str = "",
    x_label: str = "format",
    y_label: str = "fraction",
) -> str:
    """Simple bar chart; one rect per item."""
    if not items:
        return _document(["<!-- no data -->"], x_label, y_label, title)
    ymax = max(v for _, v in items) or 1.0
    n = len(items)
    slot = (WIDTH - 2 * MARGIN) / n
    body = []
    for i, (label, value) in enumerate(items):
        h = (value / ymax) * (HEIGHT - 2 * MARGIN)
        x = MARGIN + i * slot + slot * 0.15
        body.append(
            f'<rect class="bar" x="{x:.2f}" y="{HEIGHT - MARGIN - h:.2f}" '
            f'width="{slot * 0.7:.2f}" height="{h:.2f}" fill="#1f77b4"/>'
        )
        body.append(
            f'<text x="{MARGIN + (i + 0.5) * slot:.2f}" y="{HEIGHT - MARGIN + 15}" '
            f'text-anchor="middle" font-size="11">{escape(label)}</text>'
        )
    return _document(body, x_label, y_label, title)
