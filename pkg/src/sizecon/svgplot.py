"""Minimal SVG plotter: axes, scatter markers, and lines.

CSV files remain the authoritative outputs; these plots are lightweight
visual companions with no third-party plotting dependency.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

WIDTH, HEIGHT = 640, 440
MARGIN_LEFT, MARGIN_RIGHT, MARGIN_TOP, MARGIN_BOTTOM = 70, 20, 40, 55
PALETTE = ("#e06c00", "#1f77b4", "#2ca02c", "#9467bd", "#d62728", "#555555")


@dataclass
class Series:
    label: str
    xs: Sequence[float]
    ys: Sequence[float]
    kind: str = "scatter"          # "scatter" or "line"
    color: str | None = None
    dashed: bool = False
    marker: str = "cross"          # "cross", "plus", "circle"


@dataclass
class Figure:
    title: str
    xlabel: str
    ylabel: str
    series: list[Series] = field(default_factory=list)


def _ticks(lo: float, hi: float, count: int = 5) -> list[float]:
    if hi == lo:
        hi = lo + 1.0
    step = (hi - lo) / (count - 1)
    return [lo + i * step for i in range(count)]


def _fmt(value: float) -> str:
    if value == 0:
        return "0"
    if abs(value) >= 1000 or abs(value) < 0.01:
        return f"{value:.2e}"
    return f"{value:.4g}"


def _marker_svg(shape: str, x: float, y: float, color: str) -> str:
    r = 4
    if shape == "circle":
        return f'<circle cx="{x:.1f}" cy="{y:.1f}" r="{r}" fill="none" stroke="{color}"/>'
    if shape == "plus":
        return (
            f'<path d="M {x - r:.1f} {y:.1f} H {x + r:.1f} M {x:.1f} {y - r:.1f} '
            f'V {y + r:.1f}" stroke="{color}"/>'
        )
    return (
        f'<path d="M {x - r:.1f} {y - r:.1f} L {x + r:.1f} {y + r:.1f} '
        f'M {x - r:.1f} {y + r:.1f} L {x + r:.1f} {y - r:.1f}" stroke="{color}"/>'
    )


def render(figure: Figure) -> str:
    """Render a figure to an SVG document string."""
    xs = [x for s in figure.series for x in s.xs]
    ys = [y for s in figure.series for y in s.ys]
    if not xs:
        xs, ys = [0.0, 1.0], [0.0, 1.0]
    x_lo, x_hi = min(xs), max(xs)
    y_lo, y_hi = min(ys), max(ys)
    if x_hi == x_lo:
        x_lo, x_hi = x_lo - 0.5, x_hi + 0.5
    if y_hi == y_lo:
        y_lo, y_hi = y_lo - 0.5, y_hi + 0.5
    y_pad = 0.06 * (y_hi - y_lo)
    y_lo, y_hi = y_lo - y_pad, y_hi + y_pad
    x_pad = 0.04 * (x_hi - x_lo)
    x_lo, x_hi = x_lo - x_pad, x_hi + x_pad

    plot_w = WIDTH - MARGIN_LEFT - MARGIN_RIGHT
    plot_h = HEIGHT - MARGIN_TOP - MARGIN_BOTTOM

    def px(x: float) -> float:
        return MARGIN_LEFT + (x - x_lo) / (x_hi - x_lo) * plot_w

    def py(y: float) -> float:
        return MARGIN_TOP + (y_hi - y) / (y_hi - y_lo) * plot_h

    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" '
        f'viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">',
        f'<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>',
        f'<text x="{WIDTH / 2}" y="22" text-anchor="middle" font-size="15">{figure.title}</text>',
    ]
    axis = f'{MARGIN_LEFT} {MARGIN_TOP} v {plot_h} h {plot_w}'
    parts.append(f'<path d="M {axis}" fill="none" stroke="black"/>')
    for tx in _ticks(x_lo, x_hi):
        x = px(tx)
        parts.append(
            f'<line x1="{x:.1f}" y1="{py(y_lo):.1f}" x2="{x:.1f}" y2="{py(y_lo) + 5:.1f}" stroke="black"/>'
        )
        parts.append(
            f'<text x="{x:.1f}" y="{py(y_lo) + 20:.1f}" text-anchor="middle">{_fmt(tx)}</text>'
        )
    for ty in _ticks(y_lo, y_hi):
        y = py(ty)
        parts.append(
            f'<line x1="{MARGIN_LEFT - 5}" y1="{y:.1f}" x2="{MARGIN_LEFT}" y2="{y:.1f}" stroke="black"/>'
        )
        parts.append(
            f'<text x="{MARGIN_LEFT - 9}" y="{y + 4:.1f}" text-anchor="end">{_fmt(ty)}</text>'
        )
    parts.append(
        f'<text x="{MARGIN_LEFT + plot_w / 2}" y="{HEIGHT - 12}" text-anchor="middle">{figure.xlabel}</text>'
    )
    parts.append(
        f'<text x="18" y="{MARGIN_TOP + plot_h / 2}" text-anchor="middle" '
        f'transform="rotate(-90 18 {MARGIN_TOP + plot_h / 2})">{figure.ylabel}</text>'
    )

    legend_y = MARGIN_TOP + 8
    for i, s in enumerate(figure.series):
        color = s.color or PALETTE[i % len(PALETTE)]
        if s.kind == "line":
            path = " ".join(
                f"{'M' if j == 0 else 'L'} {px(x):.1f} {py(y):.1f}"
                for j, (x, y) in enumerate(zip(s.xs, s.ys))
            )
            dash = ' stroke-dasharray="6 4"' if s.dashed else ""
            parts.append(f'<path d="{path}" fill="none" stroke="{color}"{dash}/>')
        else:
            for x, y in zip(s.xs, s.ys):
                parts.append(_marker_svg(s.marker, px(x), py(y), color))
        if s.label:
            lx = MARGIN_LEFT + plot_w - 150
            parts.append(
                f'<line x1="{lx}" y1="{legend_y}" x2="{lx + 18}" y2="{legend_y}" stroke="{color}"/>'
            )
            parts.append(f'<text x="{lx + 24}" y="{legend_y + 4}">{s.label}</text>')
            legend_y += 16
    parts.append("</svg>")
    return "\n".join(parts) + "\n"


def write(figure: Figure, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(render(figure))
