"""Standalone SVG rendering of an embedding."""

from __future__ import annotations

from dataclasses import dataclass
from xml.sax.saxutils import escape

import numpy as np

from .compass import COMPASS
from .embed import Embedding

# colour-blind friendly categorical palette (Okabe-Ito plus extras)
PALETTE = (
    "#e69f00", "#56b4e9", "#009e73", "#f0e442", "#0072b2", "#d55e00", "#cc79a7",
    "#000000", "#999999", "#882255", "#44aa99", "#117733", "#332288", "#ddcc77",
    "#aa4499", "#88ccee", "#661100", "#6699cc",
)
RAMP = ((68, 1, 84), (59, 82, 139), (33, 145, 140), (94, 201, 98), (253, 231, 37))


@dataclass
class MapStyle:
    width: int = 800
    height: int = 800
    margin: int = 40
    radius: float = 4.0
    square: float = 12.0
    legend_width: int = 200
    default_color: str = "#9ecae1"


def _ramp(t: float) -> str:
    t = min(max(t, 0.0), 1.0) * (len(RAMP) - 1)
    i = min(int(t), len(RAMP) - 2)
    f = t - i
    rgb = [round(a + (b - a) * f) for a, b in zip(RAMP[i], RAMP[i + 1])]
    return "#{:02x}{:02x}{:02x}".format(*rgb)


def _fmt(x: float) -> str:
    return f"{x:.2f}"


def render_map_svg(emb: Embedding, coloring: dict | None = None, style: MapStyle | None = None) -> str:
    """SVG with one circle per item; compass items are labelled squares.

    ``coloring`` maps labels to either category names (categorical palette,
    first-seen order) or numbers (continuous ramp from min to max). Items
    missing from it use ``style.default_color``.
    """
    style = style or MapStyle()
    coloring = coloring or {}
    xy = np.asarray(emb.coords, dtype=float)
    lo, hi = xy.min(axis=0), xy.max(axis=0)
    span = float(max((hi - lo).max(), 1e-12))
    inner = min(style.width, style.height) - 2 * style.margin
    pts = (xy - lo) / span * inner + style.margin
    pts[:, 1] = style.height - pts[:, 1]

    values = [coloring[l] for l in emb.labels if l in coloring]
    numeric = bool(values) and all(isinstance(v, (int, float)) for v in values)
    colors: dict[str, str] = {}
    legend: list[tuple[str, str]] = []
    if numeric:
        vmin, vmax = min(values), max(values)
        for l in emb.labels:
            if l in coloring:
                t = 0.5 if vmax == vmin else (coloring[l] - vmin) / (vmax - vmin)
                colors[l] = _ramp(t)
        legend = [(_ramp(0.0), f"{vmin:.4g}"), (_ramp(0.5), f"{(vmin + vmax) / 2:.4g}"), (_ramp(1.0), f"{vmax:.4g}")]
    else:
        cats: dict[str, str] = {}
        for l in emb.labels:
            if l in coloring:
                cat = str(coloring[l])
                if cat not in cats:
                    cats[cat] = PALETTE[len(cats) % len(PALETTE)]
                colors[l] = cats[cat]
        legend = [(c, name) for name, c in cats.items()]

    total_w = style.width + style.legend_width
    out = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{total_w}" height="{style.height}" '
        f'viewBox="0 0 {total_w} {style.height}">',
        f'<rect x="0" y="0" width="{total_w}" height="{style.height}" fill="#ffffff"/>',
        '<g id="points">',
    ]
    squares = []
    for l, (x, y) in zip(emb.labels, pts):
        fill = colors.get(l, style.default_color)
        if l in COMPASS:
            s = style.square
            squares.append(
                f'<rect x="{_fmt(x - s / 2)}" y="{_fmt(y - s / 2)}" width="{_fmt(s)}" height="{_fmt(s)}" '
                f'fill="{fill}" stroke="#000000"><title>{escape(l)}</title></rect>'
                f'<text x="{_fmt(x + s)}" y="{_fmt(y - s)}" font-family="sans-serif" font-size="14">{escape(l)}</text>'
            )
        else:
            out.append(f'<circle cx="{_fmt(x)}" cy="{_fmt(y)}" r="{_fmt(style.radius)}" fill="{fill}">'
                       f'<title>{escape(l)}</title></circle>')
    out.append("</g>")
    out.append('<g id="compass">')
    out.extend(squares)
    out.append("</g>")
    out.append('<g id="legend" font-family="sans-serif" font-size="12">')
    lx = style.width + 10
    for k, (c, name) in enumerate(legend):
        y = style.margin + 20 * k
        out.append(f'<rect x="{lx}" y="{y}" width="12" height="12" fill="{c}"/>')
        out.append(f'<text x="{lx + 18}" y="{y + 10}">{escape(name)}</text>')
    out.append("</g>")
    out.append("</svg>")
    return "\n".join(out) + "\n"
