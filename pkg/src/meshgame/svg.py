"""Deterministic SVG rendering of planar mesh overlays.

Output is a pure function of the inputs: fixed header, viewBox from the
joint bounding box of all layers plus a 5% margin, one group per layer in
call order, one polygon per element. Writing the same layers twice yields
byte-identical files. Intended for the wireframe comparison figures
(initial vs equilibrium vs best).
"""
from __future__ import annotations

from pathlib import Path

import numpy as np

from .mesh import Mesh, as_coords3

MARGIN = 0.05

#: Layer colors used by the comparison reports.
INITIAL_COLOR = "black"
NASH_COLOR = "blue"
BEST_COLOR = "red"


def _fmt(x: float) -> str:
    return f"{x:.9g}"


def render_svg(mesh: Mesh, layers) -> str:
    """Render overlay layers of one mesh as an SVG document string.

    layers: sequence of (coords, stroke_color) pairs; all coordinates must
    be planar (z = 0). Groups appear in layer order, so later layers draw on
    top of earlier ones.
    """
    if not layers:
        raise ValueError("need at least one layer")
    stacks = []
    for coords, _ in layers:
        pts = as_coords3(coords)
        if pts.shape != mesh.coords.shape:
            raise ValueError(f"layer coords shape {pts.shape} does not match mesh")
        if np.any(pts[:, 2] != 0.0):
            raise ValueError("SVG rendering requires planar coordinates (z = 0)")
        stacks.append(pts)

    allpts = np.concatenate(stacks)
    xmin, ymin = allpts[:, 0].min(), allpts[:, 1].min()
    xmax, ymax = allpts[:, 0].max(), allpts[:, 1].max()
    margin = MARGIN * max(xmax - xmin, ymax - ymin, 1e-30)
    # SVG y points down; negate y so the figure keeps math orientation.
    vb_x = xmin - margin
    vb_y = -(ymax + margin)
    vb_w = (xmax - xmin) + 2 * margin
    vb_h = (ymax - ymin) + 2 * margin
    stroke = 0.004 * max(vb_w, vb_h)

    out = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" '
        f'viewBox="{_fmt(vb_x)} {_fmt(vb_y)} {_fmt(vb_w)} {_fmt(vb_h)}">',
    ]
    for pts, (_, color) in zip(stacks, layers):
        out.append(
            f'<g fill="none" stroke="{color}" stroke-width="{_fmt(stroke)}" '
            'stroke-linejoin="round">'
        )
        for element in mesh.elements:
            corners = " ".join(
                f"{_fmt(pts[v, 0])},{_fmt(-pts[v, 1])}" for v in element
            )
            out.append(f'<polygon points="{corners}"/>')
        out.append("</g>")
    out.append("</svg>")
    return "\n".join(out) + "\n"


def emit_svg(mesh: Mesh, layers, path) -> None:
    """Write the overlay SVG for layers of (coords, stroke_color)."""
    Path(path).write_text(render_svg(mesh, layers))
