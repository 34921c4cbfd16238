"""Deterministic SVG heatmaps for trajectory maps.

Pure string assembly: no image codecs, byte-identical output for
identical inputs and style.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import InvalidStyle

# value fraction -> RGB, interpolated linearly between stops
DEFAULT_STOPS = (
    (0.00, (255, 255, 255)),
    (0.25, (199, 199, 229)),
    (0.50, (140, 140, 203)),
    (0.75, (81, 81, 177)),
    (1.00, (23, 23, 151)),
)


@dataclass
class HeatmapStyle:
    colormap: tuple = DEFAULT_STOPS
    v_min: float = -1.0
    v_max: float = 1.0
    cell_px: int = 12

    def __post_init__(self):
        if not self.v_min < self.v_max:
            raise InvalidStyle(f"v_min {self.v_min} must be < v_max {self.v_max}")
        if self.cell_px < 1:
            raise InvalidStyle("cell_px must be >= 1")
        fracs = [f for f, _ in self.colormap]
        if len(fracs) < 2 or fracs != sorted(fracs) or fracs[0] != 0.0 or fracs[-1] != 1.0:
            raise InvalidStyle("colormap stops must span [0, 1] in increasing order")

    def rgb(self, value: float) -> tuple[int, int, int]:
        span = self.v_max - self.v_min
        f = min(max((value - self.v_min) / span, 0.0), 1.0)
        stops = self.colormap
        for (f0, c0), (f1, c1) in zip(stops[:-1], stops[1:]):
            if f <= f1:
                w = 0.0 if f1 == f0 else (f - f0) / (f1 - f0)
                return tuple(int(round(a + w * (b - a))) for a, b in zip(c0, c1))
        return stops[-1][1]


def render_svg(matrix: np.ndarray, labels: list[str], style: HeatmapStyle | None = None) -> str:
    """n x n heatmap with row/column labels taken from the point labels."""
    style = style or HeatmapStyle()
    m = np.asarray(matrix, dtype=np.float64)
    n = m.shape[0]
    cp = style.cell_px
    font = max(min(cp - 2, 10), 4)
    margin = 6 * font  # label gutter left and top
    size = margin + n * cp
    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{size}" height="{size}" '
        f'viewBox="0 0 {size} {size}">'
    ]
    parts.append('<g shape-rendering="crispEdges">')
    for i in range(n):
        for j in range(n):
            r, g, b = style.rgb(float(m[i, j]))
            parts.append(
                f'<rect x="{margin + j * cp}" y="{margin + i * cp}" '
                f'width="{cp}" height="{cp}" fill="rgb({r},{g},{b})"/>'
            )
    parts.append("</g>")
    parts.append(f'<g font-family="monospace" font-size="{font}" fill="black">')
    for i, label in enumerate(labels):
        y = margin + i * cp + (cp + font) // 2
        parts.append(f'<text x="2" y="{y}" text-anchor="start">{_esc(label)}</text>')
        x = margin + i * cp + cp // 2
        parts.append(
            f'<text x="{x}" y="{margin - 4}" text-anchor="end" '
            f'transform="rotate(-90 {x} {margin - 4})">{_esc(label)}</text>'
        )
    parts.append("</g>")
    parts.append("</svg>")
    return "\n".join(parts) + "\n"


def _esc(text: str) -> str:
    return text.replace("&", "&amp;").replace("<", "&lt;").replace(">", "&gt;")
