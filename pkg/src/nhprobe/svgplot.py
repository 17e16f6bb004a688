"""Minimal deterministic SVG output: L(t) line plots and phase-diagram
heatmaps with a dashed analytic boundary.  No plotting dependency; byte
output depends only on the data."""

from __future__ import annotations

import math

import numpy as np

WIDTH, HEIGHT = 640, 480
MARGIN_L, MARGIN_R, MARGIN_T, MARGIN_B = 70, 90, 40, 55

# fixed anchors of a dark-blue -> teal -> yellow map; values always span [0, 1]
_ANCHORS = [
    (0.0, (68, 1, 84)),
    (0.25, (59, 82, 139)),
    (0.5, (33, 145, 140)),
    (0.75, (94, 201, 98)),
    (1.0, (253, 231, 37)),
]


def _color(value: float) -> str:
    if math.isnan(value):
        return "rgb(200,200,200)"
    v = min(max(value, 0.0), 1.0)
    for (lo, c0), (hi, c1) in zip(_ANCHORS, _ANCHORS[1:]):
        if v <= hi:
            f = (v - lo) / (hi - lo)
            rgb = tuple(round(a + f * (b - a)) for a, b in zip(c0, c1))
            return "rgb(%d,%d,%d)" % rgb
    return "rgb(%d,%d,%d)" % _ANCHORS[-1][1]


def _fmt(x: float) -> str:
    return f"{x:.6g}"


def _axis_ticks(lo: float, hi: float, n: int = 5):
    if hi <= lo:
        return [lo]
    raw = np.linspace(lo, hi, n)
    return [float(v) for v in raw]


class _Canvas:
    def __init__(self):
        self.parts = [
            f'<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" '
            f'viewBox="0 0 {WIDTH} {HEIGHT}">',
            f'<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>',
        ]

    def add(self, element: str):
        self.parts.append(element)

    def text(self, x, y, s, size=13, anchor="middle", rotate=None):
        transform = f' transform="rotate(-90 {_fmt(x)} {_fmt(y)})"' if rotate else ""
        self.add(f'<text x="{_fmt(x)}" y="{_fmt(y)}" font-family="sans-serif" '
                 f'font-size="{size}" text-anchor="{anchor}"{transform}>{s}</text>')

    def render(self) -> str:
        return "\n".join(self.parts + ["</svg>"]) + "\n"


def _frame(canvas: _Canvas, x_lo, x_hi, y_lo, y_hi, xlabel, ylabel, title):
    plot_w = WIDTH - MARGIN_L - MARGIN_R
    plot_h = HEIGHT - MARGIN_T - MARGIN_B

    def sx(x):
        return MARGIN_L + (x - x_lo) / (x_hi - x_lo) * plot_w

    def sy(y):
        return HEIGHT - MARGIN_B - (y - y_lo) / (y_hi - y_lo) * plot_h

    canvas.add(f'<rect x="{MARGIN_L}" y="{MARGIN_T}" width="{plot_w}" height="{plot_h}" '
               'fill="none" stroke="black"/>')
    for tick in _axis_ticks(x_lo, x_hi):
        canvas.add(f'<line x1="{_fmt(sx(tick))}" y1="{HEIGHT - MARGIN_B}" '
                   f'x2="{_fmt(sx(tick))}" y2="{HEIGHT - MARGIN_B + 5}" stroke="black"/>')
        canvas.text(sx(tick), HEIGHT - MARGIN_B + 18, _fmt(tick), size=11)
    for tick in _axis_ticks(y_lo, y_hi):
        canvas.add(f'<line x1="{MARGIN_L - 5}" y1="{_fmt(sy(tick))}" '
                   f'x2="{MARGIN_L}" y2="{_fmt(sy(tick))}" stroke="black"/>')
        canvas.text(MARGIN_L - 10, sy(tick) + 4, _fmt(tick), size=11, anchor="end")
    canvas.text((MARGIN_L + WIDTH - MARGIN_R) / 2, HEIGHT - 12, xlabel)
    canvas.text(18, (MARGIN_T + HEIGHT - MARGIN_B) / 2, ylabel, rotate=True)
    if title:
        canvas.text((MARGIN_L + WIDTH - MARGIN_R) / 2, 24, title, size=15)
    return sx, sy


def line_plot(times, values, path, title="", xlabel="t", ylabel="L(t)"):
    """Single-series line plot with the y axis fixed to [0, 1.05]."""
    times = np.asarray(times, dtype=float)
    values = np.asarray(values, dtype=float)
    canvas = _Canvas()
    x_hi = float(times[-1]) if times[-1] > times[0] else float(times[0] + 1)
    sx, sy = _frame(canvas, float(times[0]), x_hi, 0.0, 1.05, xlabel, ylabel, title)
    points = " ".join(f"{_fmt(sx(t))},{_fmt(sy(v))}" for t, v in zip(times, values))
    canvas.add(f'<polyline points="{points}" fill="none" stroke="rgb(178,34,34)" '
               'stroke-width="1.5"/>')
    with open(path, "w", encoding="ascii") as handle:
        handle.write(canvas.render())


def heatmap(x_values, y_values, grid, path, xlabel="", ylabel="",
            title="", boundary=None):
    """Cell heatmap of values in [0, 1] with an optional dashed boundary curve.

    `grid[i, j]` is the value at (x_values[j], y_values[i]).  The color
    scale is fixed to [0, 1] so separate runs are comparable.  `boundary`
    is a list of (x, y) pairs drawn as a dashed polyline, clipped to the
    axis ranges.
    """
    xs = np.asarray(x_values, dtype=float)
    ys = np.asarray(y_values, dtype=float)
    grid = np.asarray(grid, dtype=float)
    if grid.shape != (len(ys), len(xs)):
        raise ValueError(f"grid shape {grid.shape} does not match axes "
                         f"({len(ys)}, {len(xs)})")

    def edges(vals):
        if len(vals) == 1:
            half = 0.5 if vals[0] == 0 else abs(vals[0]) * 0.5 + 0.5
            return np.array([vals[0] - half, vals[0] + half])
        mids = (vals[1:] + vals[:-1]) / 2
        first = vals[0] - (mids[0] - vals[0])
        last = vals[-1] + (vals[-1] - mids[-1])
        return np.concatenate([[first], mids, [last]])

    ex, ey = edges(xs), edges(ys)
    canvas = _Canvas()
    sx, sy = _frame(canvas, ex[0], ex[-1], ey[0], ey[-1], xlabel, ylabel, title)
    for i in range(len(ys)):
        for j in range(len(xs)):
            x0, x1 = sx(ex[j]), sx(ex[j + 1])
            y0, y1 = sy(ey[i + 1]), sy(ey[i])
            canvas.add(f'<rect x="{_fmt(x0)}" y="{_fmt(y0)}" '
                       f'width="{_fmt(x1 - x0)}" height="{_fmt(y1 - y0)}" '
                       f'fill="{_color(grid[i, j])}"/>')
    if boundary:
        inside = [(x, y) for x, y in boundary
                  if ex[0] - 1e-12 <= x <= ex[-1] + 1e-12
                  and ey[0] - 1e-12 <= y <= ey[-1] + 1e-12]
        if len(inside) >= 2:
            points = " ".join(f"{_fmt(sx(x))},{_fmt(sy(y))}" for x, y in inside)
            canvas.add(f'<polyline points="{points}" fill="none" stroke="white" '
                       'stroke-width="2" stroke-dasharray="8,5"/>')
    bar_x = WIDTH - MARGIN_R + 25
    bar_h = HEIGHT - MARGIN_T - MARGIN_B
    for k in range(64):
        frac_lo = k / 64
        y0 = HEIGHT - MARGIN_B - (k + 1) / 64 * bar_h
        canvas.add(f'<rect x="{bar_x}" y="{_fmt(y0)}" width="16" '
                   f'height="{_fmt(bar_h / 64 + 0.5)}" fill="{_color(frac_lo)}"/>')
    canvas.add(f'<rect x="{bar_x}" y="{MARGIN_T}" width="16" height="{bar_h}" '
               'fill="none" stroke="black"/>')
    for frac in (0.0, 0.5, 1.0):
        y = HEIGHT - MARGIN_B - frac * bar_h
        canvas.text(bar_x + 22, y + 4, _fmt(frac), size=11, anchor="start")
    with open(path, "w", encoding="ascii") as handle:
        handle.write(canvas.render())
