"""SVG 1.1 emission: user units are millimetres, one group per layer.

The drawing's y-up mm coordinates are flipped at write time (no transform
attributes), so a parser can measure geometry straight from the path data.
Coordinates are written at 1e-7 mm resolution, far below every geometric
tolerance in the toolkit, and formatting is fixed so identical drawings give
byte-identical files.
"""

from __future__ import annotations

from ..errors import NonPositiveValue
from .files import atomic_write_text
from .pattern import (Circle, DashedLine, ExportedDrawing, LAYERS, MARGIN_MM,
                      Polyline, drawing_bounds)

_LAYER_STROKE = {
    "cut": "#000000",
    "crease": "#808080",
    "eyelet": "#0000ff",
    "tab": "#007f00",
}
_STROKE_WIDTH_MM = 0.2


def _fmt(value: float) -> str:
    text = f"{value:.7f}".rstrip("0").rstrip(".")
    return "0" if text == "-0" else text


def drawing_to_svg(drawing: ExportedDrawing) -> str:
    min_x, min_y, max_x, max_y = drawing_bounds(drawing)
    width = (max_x - min_x) + 2.0 * MARGIN_MM
    height = (max_y - min_y) + 2.0 * MARGIN_MM
    ox = MARGIN_MM - min_x
    oy = max_y + MARGIN_MM

    def pt(p):
        return f"{_fmt(p[0] + ox)},{_fmt(oy - p[1])}"

    lines = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" '
        f'width="{_fmt(width)}mm" height="{_fmt(height)}mm" '
        f'viewBox="0 0 {_fmt(width)} {_fmt(height)}">',
    ]
    for layer in LAYERS:
        stroke = _LAYER_STROKE[layer]
        lines.append(f'<g id="{layer}" fill="none" stroke="{stroke}" '
                     f'stroke-width="{_fmt(_STROKE_WIDTH_MM)}">')
        items = drawing.layers.get(layer, [])
        strips = sorted({idx for idx, _ in items})
        for strip in strips:
            lines.append(f'<g id="{layer}-strip{strip}">')
            for idx, element in items:
                if idx != strip:
                    continue
                if isinstance(element, Polyline):
                    d = "M " + " L ".join(pt(p) for p in element.points)
                    if element.closed:
                        d += " Z"
                    lines.append(f'<path d="{d}"/>')
                elif isinstance(element, DashedLine):
                    d = " ".join(f"M {pt(a)} L {pt(b)}"
                                 for a, b in element.segments)
                    lines.append(f'<path class="{element.kind}" d="{d}"/>')
                elif isinstance(element, Circle):
                    cx, cy = element.center
                    lines.append(f'<circle cx="{_fmt(cx + ox)}" '
                                 f'cy="{_fmt(oy - cy)}" '
                                 f'r="{_fmt(element.radius)}"/>')
                else:
                    raise NonPositiveValue(f"unknown drawing element {element!r}")
            lines.append('</g>')
        lines.append('</g>')
    lines.append('</svg>')
    return "\n".join(lines) + "\n"


def write_svg(drawing: ExportedDrawing, path) -> None:
    atomic_write_text(path, drawing_to_svg(drawing))
