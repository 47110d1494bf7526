"""Text and SVG output for patches (SVG only for d <= 2)."""

from __future__ import annotations

from typing import Sequence
from xml.sax.saxutils import escape

from .patch import Patch

PALETTE = (
    "#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b",
    "#e377c2", "#7f7f7f", "#bcbd22", "#17becf", "#393b79", "#e7ba52",
)

UNIT = 10  # pixels per lattice unit


class RenderError(ValueError):
    pass


def dump_text(patch: Patch, colors: Sequence[str]) -> str:
    """One line per point, ``x_1 ... x_d colour``, lexicographic order."""
    return "".join(" ".join(map(str, x)) + f" {colors[c]}\n" for x, c in patch.items())


def fill(index: int) -> str:
    return PALETTE[index % len(PALETTE)]


def render_svg(patch: Patch, colors: Sequence[str]) -> str:
    if patch.dim > 2:
        raise RenderError(f"SVG unsupported for d={patch.dim}")
    if not patch.points:
        lo, hi = (0,) * patch.dim, (-1,) * patch.dim
    else:
        lo, hi = patch.bounds()
    width = (hi[0] - lo[0] + 1) * UNIT
    height = (hi[1] - lo[1] + 1) * UNIT if patch.dim == 2 else UNIT
    out = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" '
        f'width="{width}" height="{height}" viewBox="0 0 {width} {height}">',
    ]
    for x, c in patch.items():
        px = (x[0] - lo[0]) * UNIT
        name = escape(colors[c])
        if patch.dim == 1:
            y = UNIT // 2
            out.append(f'<line x1="{px}" y1="{y}" x2="{px + UNIT}" y2="{y}" '
                       f'stroke="{fill(c)}" stroke-width="{UNIT // 2}">'
                       f'<title>{name}</title></line>')
        else:
            py = (x[1] - lo[1]) * UNIT
            out.append(f'<rect x="{px}" y="{py}" width="{UNIT}" height="{UNIT}" '
                       f'fill="{fill(c)}"><title>{name}</title></rect>')
    out.append("</svg>")
    return "\n".join(out) + "\n"
