"""Minimal DXF R12 emission mirroring the SVG layers.

Entities: closed POLYLINEs for outlines and tabs, LINEs for dash segments,
CIRCLEs for eyelets and relief holes.  Coordinates are drawing units = mm,
y-up as in the source geometry.  R12 ASCII is the laser-cutter lingua
franca and needs no library support.
"""

from __future__ import annotations

from ..errors import NonPositiveValue
from .files import atomic_write_text
from .pattern import Circle, DashedLine, ExportedDrawing, LAYERS, Polyline

_LAYER_COLOR = {"cut": 7, "crease": 8, "eyelet": 5, "tab": 3}


def _fmt(value: float) -> str:
    text = f"{value:.7f}".rstrip("0").rstrip(".")
    return "0" if text == "-0" else text


def _entity_line(out, layer, p0, p1):
    out += ["0", "LINE", "8", layer,
            "10", _fmt(p0[0]), "20", _fmt(p0[1]), "30", "0",
            "11", _fmt(p1[0]), "21", _fmt(p1[1]), "31", "0"]


def drawing_to_dxf(drawing: ExportedDrawing) -> str:
    out = ["0", "SECTION", "2", "TABLES",
           "0", "TABLE", "2", "LAYER", "70", str(len(LAYERS))]
    for layer in LAYERS:
        out += ["0", "LAYER", "2", layer, "70", "0",
                "62", str(_LAYER_COLOR[layer]), "6", "CONTINUOUS"]
    out += ["0", "ENDTAB", "0", "ENDSEC", "0", "SECTION", "2", "ENTITIES"]

    for layer in LAYERS:
        for _, element in drawing.layers.get(layer, []):
            if isinstance(element, Polyline):
                flag = "1" if element.closed else "0"
                out += ["0", "POLYLINE", "8", layer, "66", "1", "70", flag]
                for x, y in element.points:
                    out += ["0", "VERTEX", "8", layer,
                            "10", _fmt(x), "20", _fmt(y), "30", "0"]
                out += ["0", "SEQEND"]
            elif isinstance(element, DashedLine):
                for p0, p1 in element.segments:
                    _entity_line(out, layer, p0, p1)
            elif isinstance(element, Circle):
                out += ["0", "CIRCLE", "8", layer,
                        "10", _fmt(element.center[0]),
                        "20", _fmt(element.center[1]), "30", "0",
                        "40", _fmt(element.radius)]
            else:
                raise NonPositiveValue(f"unknown drawing element {element!r}")

    out += ["0", "ENDSEC", "0", "EOF"]
    return "\n".join(out) + "\n"


def write_dxf(drawing: ExportedDrawing, path) -> None:
    atomic_write_text(path, drawing_to_dxf(drawing))
