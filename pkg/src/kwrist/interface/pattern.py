"""Manufacturable drawing assembly from flat crease patterns.

One strip per unit, laid out side by side.  Foldable creases become dash
segments (laser dash cutting), interior crease junctions get round relief
holes so material thickness does not bind, tendon-routing points get eyelet
circles, and the closing seam plus the bottom hexagon sides carry connection
tabs.  Output is a semantic-layer drawing ("cut", "crease", "eyelet",
"tab"); SVG and DXF emitters render it.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ..errors import StyleInfeasible
from ..geometry import BOUNDARY, CreasePattern, cell_tendon_diagonal, unroll_strip
from ..sizing import OrthosisDesign

LAYERS = ("cut", "crease", "eyelet", "tab")

#: Gap between neighbouring strips in the layout (mm).
STRIP_GAP_MM = 15.0
#: Drawing margin handled by the emitters (mm).
MARGIN_MM = 5.0


@dataclass(frozen=True)
class PatternStyle:
    """Manufacturing style knobs, all mm.

    dash_on/dash_off: target perforation pattern of foldable creases;
    fillet_radius: relief-hole radius at interior crease junctions;
    eyelet_diameter: tendon-routing aperture; tab_width: connection
    allowance depth.
    """

    dash_on: float = 2.0
    dash_off: float = 2.0
    fillet_radius: float = 1.5
    eyelet_diameter: float = 4.0
    tab_width: float = 8.0

    def __post_init__(self):
        for name in ("dash_on", "dash_off", "fillet_radius", "eyelet_diameter",
                     "tab_width"):
            if getattr(self, name) < 0.0:
                raise StyleInfeasible(f"{name} must be >= 0")


@dataclass(frozen=True)
class Polyline:
    points: tuple
    closed: bool = False


@dataclass(frozen=True)
class DashedLine:
    """A crease rendered as collinear dash segments; the first segment
    starts at the crease start and the last one ends at the crease end."""

    segments: tuple
    kind: str


@dataclass(frozen=True)
class Circle:
    center: tuple
    radius: float


@dataclass
class ExportedDrawing:
    """Layer name -> list of (strip index 1..n, element)."""

    layers: dict

    def elements(self, layer: str):
        return [element for _, element in self.layers[layer]]

    def strip_elements(self, layer: str, strip: int):
        return [element for idx, element in self.layers[layer] if idx == strip]


def _element_points(element):
    if isinstance(element, Polyline):
        return list(element.points)
    if isinstance(element, DashedLine):
        return [p for seg in element.segments for p in seg]
    if isinstance(element, Circle):
        cx, cy = element.center
        r = element.radius
        return [(cx - r, cy - r), (cx + r, cy + r)]
    raise TypeError(f"unknown drawing element {element!r}")


def drawing_bounds(drawing: ExportedDrawing) -> tuple:
    """(min_x, min_y, max_x, max_y) over every element."""
    xs, ys = [], []
    for items in drawing.layers.values():
        for _, element in items:
            for x, y in _element_points(element):
                xs.append(x)
                ys.append(y)
    return min(xs), min(ys), max(xs), max(ys)


def _shift_element(element, dx, dy):
    if isinstance(element, Polyline):
        return Polyline(tuple((x + dx, y + dy) for x, y in element.points),
                        element.closed)
    if isinstance(element, DashedLine):
        return DashedLine(tuple(((x0 + dx, y0 + dy), (x1 + dx, y1 + dy))
                                for (x0, y0), (x1, y1) in element.segments),
                          element.kind)
    if isinstance(element, Circle):
        return Circle((element.center[0] + dx, element.center[1] + dy),
                      element.radius)
    raise TypeError(f"unknown drawing element {element!r}")


def dash_segments(p0, p1, dash_on: float, dash_off: float) -> tuple:
    """Dash a segment so both endpoints are covered by dashes.

    The dash count is fitted to the length, and the gap is stretched or
    squeezed around ``dash_off`` so the first dash starts at p0 and the last
    ends exactly at p1; short or degenerate patterns fall back to a single
    solid segment.
    """
    length = math.dist(p0, p1)
    if dash_on <= 0.0 or dash_off <= 0.0 or length <= dash_on + dash_off:
        return ((tuple(p0), tuple(p1)),)
    n = max(2, round((length + dash_off) / (dash_on + dash_off)))
    gap = (length - n * dash_on) / (n - 1)
    if gap <= 0.0:
        return ((tuple(p0), tuple(p1)),)
    ux = (p1[0] - p0[0]) / length
    uy = (p1[1] - p0[1]) / length
    segments = []
    for k in range(n):
        s0 = k * (dash_on + gap)
        s1 = s0 + dash_on
        segments.append(((p0[0] + ux * s0, p0[1] + uy * s0),
                         (p0[0] + ux * s1, p0[1] + uy * s1)))
    return tuple(segments)


def _outward_normal(p0, p1, interior_point) -> tuple:
    ex, ey = p1[0] - p0[0], p1[1] - p0[1]
    length = math.hypot(ex, ey)
    nx, ny = -ey / length, ex / length
    mx, my = 0.5 * (p0[0] + p1[0]), 0.5 * (p0[1] + p1[1])
    if nx * (interior_point[0] - mx) + ny * (interior_point[1] - my) > 0.0:
        nx, ny = -nx, -ny
    return nx, ny


def _strip_elements(pattern: CreasePattern, style: PatternStyle) -> dict:
    """Raw drawing elements of one strip in the pattern's own coordinates."""
    cells = pattern.cells
    bottom_pts = [tuple(c[0]) for c in cells] + [tuple(cells[5][1])]
    top_pts = [tuple(c[3]) for c in cells] + [tuple(cells[5][2])]

    outline = Polyline(tuple(bottom_pts + top_pts[::-1]), closed=True)
    cut = [outline]
    if style.fillet_radius > 0.0:
        for pts in (bottom_pts[1:6], top_pts[1:6]):
            for p in pts:
                cut.append(Circle(p, style.fillet_radius))

    crease = []
    for c in pattern.creases:
        if c.kind == BOUNDARY:
            continue
        crease.append(DashedLine(dash_segments(c.start, c.end, style.dash_on,
                                               style.dash_off), c.kind))

    eyelet = [Circle(tuple(p), style.eyelet_diameter / 2.0)
              for p in pattern.eyelet_anchors]

    tab = []
    if style.tab_width > 0.0:
        centroids = [tuple(np.mean(c, axis=0)) for c in cells]
        seam = pattern.tab_edges[0]
        nx, ny = _outward_normal(seam[0], seam[1], centroids[5])
        w = style.tab_width
        tab.append(Polyline((tuple(seam[0]),
                             (seam[0][0] + nx * w, seam[0][1] + ny * w),
                             (seam[1][0] + nx * w, seam[1][1] + ny * w),
                             tuple(seam[1])), closed=True))
        for j, edge in enumerate(pattern.tab_edges[1:]):
            nx, ny = _outward_normal(edge[0], edge[1], centroids[j])
            tab.append(Polyline((tuple(edge[0]),
                                 (edge[0][0] + nx * w, edge[0][1] + ny * w),
                                 (edge[1][0] + nx * w, edge[1][1] + ny * w),
                                 tuple(edge[1])), closed=True))

    return {"cut": cut, "crease": crease, "eyelet": eyelet, "tab": tab}


def export_pattern(design: OrthosisDesign, style: PatternStyle | None = None
                   ) -> ExportedDrawing:
    """Drawing of all five strips, laid out left to right without overlap."""
    style = style or PatternStyle()
    for idx, unit in enumerate(design.units, start=1):
        smallest = min(unit.a1, unit.b)
        if style.eyelet_diameter >= smallest:
            raise StyleInfeasible(
                f"strip {idx}: eyelet diameter {style.eyelet_diameter} does not "
                f"fit cells with min feature {smallest}")
        diag = cell_tendon_diagonal(unit)
        if 2.0 * style.fillet_radius >= min(unit.a1, unit.a2, unit.b, diag):
            raise StyleInfeasible(
                f"strip {idx}: fillet radius {style.fillet_radius} too large "
                f"for the cell features")

    layers = {name: [] for name in LAYERS}
    cursor = 0.0
    for idx, unit in enumerate(design.units, start=1):
        raw = _strip_elements(unroll_strip(unit), style)
        xs, ys = [], []
        for elements in raw.values():
            for element in elements:
                for x, y in _element_points(element):
                    xs.append(x)
                    ys.append(y)
        dx = cursor - min(xs)
        dy = -min(ys)
        for name, elements in raw.items():
            layers[name].extend((idx, _shift_element(e, dx, dy))
                                for e in elements)
        cursor += (max(xs) - min(xs)) + STRIP_GAP_MM
    return ExportedDrawing(layers)
