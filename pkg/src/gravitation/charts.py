"""Minimal deterministic SVG charts for the figure pipelines.

Hand-rolled on purpose: axes, ticks, polylines, and bars only, with fixed
float formatting and no timestamps, so rerendering a figure is always
byte-identical.
"""

from __future__ import annotations

import math

PALETTE = ("#1f6fb4", "#d1495b", "#3a7d44", "#8c6bb1", "#e08e29", "#5c5c5c")


def _num(x: float) -> str:
    return format(float(x), ".2f")


def _ticks(lo: float, hi: float, count: int = 5) -> list[float]:
    if hi <= lo:
        hi = lo + 1.0
    return [lo + (hi - lo) * i / (count - 1) for i in range(count)]


def _tick_label(value: float) -> str:
    return format(value, ".3g")


class _Frame:
    """Maps data coordinates into a margined SVG viewport."""

    def __init__(self, x_range, y_range, width, height, log_x=False):
        self.left, self.right = 62.0, width - 18.0
        self.top, self.bottom = 34.0, height - 44.0
        self.log_x = log_x
        x_lo, x_hi = x_range
        if log_x:
            x_lo, x_hi = math.log10(x_lo), math.log10(x_hi)
        self.x_lo, self.x_hi = x_lo, max(x_hi, x_lo + 1e-300)
        self.y_lo, self.y_hi = y_range
        if self.y_hi <= self.y_lo:
            self.y_hi = self.y_lo + 1.0

    def x(self, value: float) -> float:
        v = math.log10(value) if self.log_x else value
        frac = (v - self.x_lo) / (self.x_hi - self.x_lo)
        return self.left + frac * (self.right - self.left)

    def y(self, value: float) -> float:
        frac = (value - self.y_lo) / (self.y_hi - self.y_lo)
        return self.bottom - frac * (self.bottom - self.top)


def _axes(frame: _Frame, xlabel: str, ylabel: str, x_tick_values, y_tick_values,
          x_tick_labels=None) -> list[str]:
    parts = [
        f'<line x1="{_num(frame.left)}" y1="{_num(frame.bottom)}" '
        f'x2="{_num(frame.right)}" y2="{_num(frame.bottom)}" stroke="black"/>',
        f'<line x1="{_num(frame.left)}" y1="{_num(frame.top)}" '
        f'x2="{_num(frame.left)}" y2="{_num(frame.bottom)}" stroke="black"/>',
    ]
    labels = x_tick_labels or [_tick_label(v) for v in x_tick_values]
    for value, label in zip(x_tick_values, labels):
        x = frame.x(value)
        parts.append(
            f'<line x1="{_num(x)}" y1="{_num(frame.bottom)}" x2="{_num(x)}" '
            f'y2="{_num(frame.bottom + 4)}" stroke="black"/>'
        )
        parts.append(
            f'<text x="{_num(x)}" y="{_num(frame.bottom + 16)}" font-size="10" '
            f'text-anchor="middle">{label}</text>'
        )
    for value in y_tick_values:
        y = frame.y(value)
        parts.append(
            f'<line x1="{_num(frame.left - 4)}" y1="{_num(y)}" '
            f'x2="{_num(frame.left)}" y2="{_num(y)}" stroke="black"/>'
        )
        parts.append(
            f'<text x="{_num(frame.left - 7)}" y="{_num(y + 3)}" font-size="10" '
            f'text-anchor="end">{_tick_label(value)}</text>'
        )
    mid_x = (frame.left + frame.right) / 2
    parts.append(
        f'<text x="{_num(mid_x)}" y="{_num(frame.bottom + 32)}" font-size="11" '
        f'text-anchor="middle">{xlabel}</text>'
    )
    mid_y = (frame.top + frame.bottom) / 2
    parts.append(
        f'<text x="14" y="{_num(mid_y)}" font-size="11" text-anchor="middle" '
        f'transform="rotate(-90 14 {_num(mid_y)})">{ylabel}</text>'
    )
    return parts


def line_chart(series, title="", xlabel="", ylabel="", width=720, height=460,
               log_x=False, y_range=None) -> str:
    """Render labeled (xs, ys) series as polylines.

    ``series`` is a list of ``(label, xs, ys)`` triples sharing axes.
    """
    all_x = [x for _, xs, _ in series for x in xs]
    all_y = [y for _, _, ys in series for y in ys]
    x_range = (min(all_x), max(all_x))
    if y_range is None:
        pad = 0.05 * (max(all_y) - min(all_y) or 1.0)
        y_range = (min(all_y) - pad, max(all_y) + pad)
    frame = _Frame(x_range, y_range, width, height, log_x=log_x)

    if log_x:
        lo, hi = math.log10(x_range[0]), math.log10(x_range[1])
        x_ticks = [10.0 ** t for t in _ticks(lo, hi)]
    else:
        x_ticks = _ticks(*x_range)
    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}">',
        '<rect width="100%" height="100%" fill="white"/>',
        f'<text x="{_num(width / 2)}" y="20" font-size="13" '
        f'text-anchor="middle">{title}</text>',
    ]
    parts.extend(_axes(frame, xlabel, ylabel, x_ticks, _ticks(*y_range)))
    for idx, (label, xs, ys) in enumerate(series):
        color = PALETTE[idx % len(PALETTE)]
        coords = " ".join(f"{_num(frame.x(x))},{_num(frame.y(y))}" for x, y in zip(xs, ys))
        parts.append(f'<polyline points="{coords}" fill="none" stroke="{color}" '
                     'stroke-width="1.6"/>')
        legend_y = 40 + 14 * idx
        parts.append(f'<line x1="{_num(frame.right - 150)}" y1="{_num(legend_y)}" '
                     f'x2="{_num(frame.right - 130)}" y2="{_num(legend_y)}" '
                     f'stroke="{color}" stroke-width="1.6"/>')
        parts.append(f'<text x="{_num(frame.right - 125)}" y="{_num(legend_y + 3)}" '
                     f'font-size="10">{label}</text>')
    parts.append("</svg>")
    return "\n".join(parts) + "\n"


def bar_panel_grid(panels, title="", xlabel="", panel_width=240,
                   panel_height=190, columns=4) -> str:
    """Render a grid of bar-chart panels, one per ``(label, values)`` pair."""
    rows = (len(panels) + columns - 1) // columns
    width = columns * panel_width
    height = rows * panel_height + 28
    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}">',
        '<rect width="100%" height="100%" fill="white"/>',
        f'<text x="{_num(width / 2)}" y="18" font-size="13" '
        f'text-anchor="middle">{title}</text>',
    ]
    for idx, (label, values) in enumerate(panels):
        col, row = idx % columns, idx // columns
        ox = col * panel_width + 34.0
        oy = row * panel_height + 52.0
        plot_w = panel_width - 48.0
        plot_h = panel_height - 58.0
        peak = max(max(values), 1e-300)
        n = len(values)
        parts.append(f'<text x="{_num(ox + plot_w / 2)}" y="{_num(oy - 6)}" '
                     f'font-size="10" text-anchor="middle">{label}</text>')
        parts.append(f'<line x1="{_num(ox)}" y1="{_num(oy + plot_h)}" '
                     f'x2="{_num(ox + plot_w)}" y2="{_num(oy + plot_h)}" stroke="black"/>')
        bar_w = plot_w / n
        for k, v in enumerate(values):
            h = plot_h * (v / peak)
            if h < 0.01:
                continue
            parts.append(
                f'<rect x="{_num(ox + k * bar_w)}" y="{_num(oy + plot_h - h)}" '
                f'width="{_num(max(bar_w, 0.3))}" height="{_num(h)}" '
                f'fill="{PALETTE[0]}"/>'
            )
        for frac, tick in ((0.0, "0"), (0.5, str((n - 1) // 2)), (1.0, str(n - 1))):
            x = ox + frac * plot_w
            parts.append(f'<text x="{_num(x)}" y="{_num(oy + plot_h + 12)}" '
                         f'font-size="9" text-anchor="middle">{tick}</text>')
    if xlabel:
        parts.append(f'<text x="{_num(width / 2)}" y="{_num(height - 6)}" '
                     f'font-size="11" text-anchor="middle">{xlabel}</text>')
    parts.append("</svg>")
    return "\n".join(parts) + "\n"
