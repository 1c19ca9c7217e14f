"""Kresling unit geometry.

A unit is a ring of six quadrilateral cells folded between two rigid regular
hexagons.  Straight-strip units (``TKO``) have parallelogram cells and equal
hexagons; annular-strip units (``CKO``) have two hexagon sizes and their flat
pattern curves around an arc.  This module covers the flat (unfolded) cell
layouts, hexagonal 3D frames, and the stacking compatibility rule; folding
kinematics live in :mod:`kwrist.kinematics`.

Units: lengths in mm, angles in degrees unless a name says otherwise.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .errors import DegenerateCell, KindShapeMismatch, NonPositiveLength

# Hexagon sides shared by stacked units must agree to this (mm).
INTERFACE_TOL = 1e-6
# |a1 - a2| below this counts as a straight-strip (equal hexagon) unit (mm).
EQUAL_SIDE_TOL = 1e-9


class UnitKind(str, enum.Enum):
    """Straight-strip (equal hexagons) vs annular-strip (two sizes) unit."""

    TKO = "TKO"
    CKO = "CKO"


class Chirality(str, enum.Enum):
    """Twist direction of the folded unit, viewed from the +normal side.

    CW units twist their top hexagon clockwise at the neutral fold and their
    tendon diagonals run from bottom vertex k to top vertex k+1 (column shift
    +1).  CCW is the mirror image (shift -1).
    """

    CW = "CW"
    CCW = "CCW"

    @property
    def column_shift(self) -> int:
        return 1 if self is Chirality.CW else -1

    @property
    def mirrored(self) -> "Chirality":
        return Chirality.CCW if self is Chirality.CW else Chirality.CW


@dataclass(frozen=True)
class UnitSpec:
    """One Kresling unit: hexagon sides a1 (bottom) / a2 (top), slant crease
    length b, flat-cell base angle alpha (deg), and twist chirality."""

    kind: UnitKind
    a1: float
    a2: float
    b: float
    alpha: float
    chirality: Chirality

    def __post_init__(self):
        for name in ("a1", "a2", "b"):
            if not getattr(self, name) > 0.0:
                raise NonPositiveLength(f"{name} must be positive, got {getattr(self, name)}")
        if not 0.0 < self.alpha < 180.0:
            raise NonPositiveLength(f"alpha must lie in (0, 180) deg, got {self.alpha}")
        equal = abs(self.a1 - self.a2) <= EQUAL_SIDE_TOL
        if self.kind is UnitKind.TKO and not equal:
            raise KindShapeMismatch(
                f"straight-strip unit requires a1 == a2, got {self.a1} and {self.a2}")
        if self.kind is UnitKind.CKO and equal:
            raise KindShapeMismatch(
                f"annular-strip unit requires a1 != a2, both are {self.a1}")

    @property
    def column_shift(self) -> int:
        return self.chirality.column_shift


def make_unit_spec(kind, a1, a2, b, alpha, chirality) -> UnitSpec:
    """Validated UnitSpec constructor; accepts enum values or their names."""
    return UnitSpec(UnitKind(kind), float(a1), float(a2), float(b), float(alpha),
                    Chirality(chirality))


def check_compatibility(lower: UnitSpec, upper: UnitSpec) -> bool:
    """True when the two units can share their interface hexagon.

    ``lower`` sits on the forearm side, ``upper`` on the palm side; the
    shared hexagon is the lower unit's top (side a2) and the upper unit's
    bottom (side a1).
    """
    return abs(lower.a2 - upper.a1) <= INTERFACE_TOL


def cell_tendon_diagonal(spec: UnitSpec) -> float:
    """Length of the cell diagonal spanned by a tendon (the short diagonal).

    In the flat cell the tendon runs between the corner pair not joined by a
    slant crease; with sides a1, b enclosing the base angle alpha the law of
    cosines gives the length directly.  The same corner pair is used for
    annular cells.
    """
    a, b = spec.a1, spec.b
    alpha = math.radians(spec.alpha)
    return math.sqrt(a * a + b * b - 2.0 * a * b * math.cos(alpha))


# --- hexagonal frames ----------------------------------------------------------


@dataclass(frozen=True)
class SpatialFrame:
    """A rigid hexagon frame: plane pose plus circumradius.

    For a regular hexagon the circumradius equals the side length, so
    ``radius`` is also the hexagon side in mm.
    """

    center: np.ndarray
    normal: np.ndarray
    reference_direction: np.ndarray
    radius: float

    def __post_init__(self):
        object.__setattr__(self, "center", np.asarray(self.center, dtype=float))
        object.__setattr__(self, "normal", np.asarray(self.normal, dtype=float))
        object.__setattr__(self, "reference_direction",
                           np.asarray(self.reference_direction, dtype=float))
        if abs(np.linalg.norm(self.normal) - 1.0) > 1e-12:
            raise NonPositiveLength("frame normal must be a unit vector")
        if abs(np.linalg.norm(self.reference_direction) - 1.0) > 1e-12:
            raise NonPositiveLength("frame reference direction must be a unit vector")
        if abs(float(np.dot(self.normal, self.reference_direction))) > 1e-12:
            raise NonPositiveLength("frame normal and reference must be orthogonal")
        if not self.radius > 0.0:
            raise NonPositiveLength("frame radius must be positive")

    @property
    def binormal(self) -> np.ndarray:
        return np.cross(self.normal, self.reference_direction)

    @classmethod
    def axis_aligned(cls, radius: float, center=(0.0, 0.0, 0.0)) -> "SpatialFrame":
        return cls(np.asarray(center, dtype=float), np.array([0.0, 0.0, 1.0]),
                   np.array([1.0, 0.0, 0.0]), float(radius))

    def with_radius(self, radius: float) -> "SpatialFrame":
        return SpatialFrame(self.center, self.normal, self.reference_direction,
                            float(radius))


def frame_vertices(frame: SpatialFrame, twist_offset: float = 0.0) -> np.ndarray:
    """The six hexagon vertices of a frame, shape (6, 3).

    Vertex k sits at azimuth 60*k + twist_offset (deg) from the frame's
    reference direction, at distance ``radius`` from the center.
    """
    ks = np.arange(6)
    az = np.radians(60.0 * ks + twist_offset)
    r = frame.reference_direction
    w = frame.binormal
    return (frame.center[None, :]
            + frame.radius * (np.cos(az)[:, None] * r[None, :]
                              + np.sin(az)[:, None] * w[None, :]))


# --- flat crease patterns --------------------------------------------------------

MOUNTAIN = "mountain"
VALLEY = "valley"
BOUNDARY = "boundary"


@dataclass(frozen=True)
class Crease:
    """One straight crease or boundary edge of the flat pattern."""

    start: tuple
    end: tuple
    kind: str  # mountain | valley | boundary

    @property
    def length(self) -> float:
        return math.hypot(self.end[0] - self.start[0], self.end[1] - self.start[1])


@dataclass(frozen=True)
class CreasePattern:
    """Flat layout of one unit strip.

    cells: six quadrilaterals as (4, 2) vertex arrays ordered
      (bottom-start, bottom-end, top-end, top-start);
    creases: hexagon sides and interior slants (mountain), tendon diagonals
      (valley), the two open strip ends (boundary);
    eyelet_anchors: (6, 2) tendon-routing points, one per cell at the top end
      of its tendon diagonal;
    tab_edges: edges that receive a connection allowance (the closing seam
      slant plus the six bottom sides).
    """

    cells: tuple
    creases: tuple
    eyelet_anchors: np.ndarray
    tab_edges: tuple

    def boundary_lengths(self) -> tuple:
        """(sum of bottom-side lengths, sum of top-side lengths)."""
        bottom = sum(math.dist(c[0], c[1]) for c in self.cells)
        top = sum(math.dist(c[3], c[2]) for c in self.cells)
        return bottom, top


def _strip_rows(spec: UnitSpec):
    """Flat vertex rows (bottom I_0..I_6, top O_0..O_6) for the right-leaning
    layout.  Straight band for equal hexagons, annular band otherwise."""
    a1, a2, b = spec.a1, spec.a2, spec.b
    alpha = math.radians(spec.alpha)
    if abs(math.sin(alpha)) * min(a1, b) < 1e-9:
        raise DegenerateCell("cell collapses: base angle too close to 0 or 180 deg")

    if spec.kind is UnitKind.TKO:
        dx, dy = b * math.cos(alpha), b * math.sin(alpha)
        bottom = [(j * a1, 0.0) for j in range(7)]
        top = [(j * a1 + dx, dy) for j in range(7)]
        return bottom, top

    # Annular band.  Build cell 0 from its side lengths and base angle, then
    # find the rotation that maps each cell onto the next; congruent slant
    # edges guarantee such a rotation exists.
    i0 = np.array([0.0, 0.0])
    i1 = np.array([a1, 0.0])
    o0 = np.array([b * math.cos(alpha), b * math.sin(alpha)])
    wvec = i1 - o0
    diag = float(np.linalg.norm(wvec))
    if diag < 1e-9:
        raise DegenerateCell("tendon diagonal collapses to zero length")
    cos_t = (diag * diag + a2 * a2 - b * b) / (2.0 * a2 * diag)
    if abs(cos_t) > 1.0:
        raise DegenerateCell(
            "no planar cell with these side lengths (diagonal/top-side/slant "
            "triangle impossible)")
    sin_t = math.sqrt(1.0 - cos_t * cos_t)
    w_hat = wvec / diag
    w_perp = np.array([-w_hat[1], w_hat[0]])
    o1 = o0 + a2 * (cos_t * w_hat + sin_t * w_perp)

    # Rotation center: on x = a1/2 (bisector of I0 I1) and on the bisector of
    # O0 O1.
    mid_o = 0.5 * (o0 + o1)
    d_o = o1 - o0
    if abs(d_o[1]) < 1e-12:
        raise DegenerateCell("annular layout degenerates to a straight band")
    cy = mid_o[1] - (0.5 * a1 - mid_o[0]) * d_o[0] / d_o[1]
    center = np.array([0.5 * a1, cy])

    v_i0 = i0 - center
    v_i1 = i1 - center
    delta = math.atan2(v_i1[1], v_i1[0]) - math.atan2(v_i0[1], v_i0[0])
    delta = math.remainder(delta, 2.0 * math.pi)

    def rot(p, j):
        c, s = math.cos(j * delta), math.sin(j * delta)
        q = p - center
        return center + np.array([c * q[0] - s * q[1], s * q[0] + c * q[1]])

    bottom = [tuple(rot(i0, j)) for j in range(7)]
    top = [tuple(rot(o0, j)) for j in range(7)]
    return [tuple(map(float, p)) for p in bottom], [tuple(map(float, p)) for p in top]


def unroll_strip(spec: UnitSpec) -> CreasePattern:
    """Flat pattern of one unit: six cells plus tagged creases.

    The CW layout is the mirror image (x -> -x) of the CCW layout, matching
    the mirrored twist of the folded unit.
    """
    bottom, top = _strip_rows(spec)
    if spec.chirality is Chirality.CW:
        bottom = [(-x, y) for x, y in bottom]
        top = [(-x, y) for x, y in top]

    cells = []
    creases = []
    for j in range(6):
        quad = np.array([bottom[j], bottom[j + 1], top[j + 1], top[j]])
        area1 = abs(_cross2(quad[1] - quad[0], quad[3] - quad[0]))
        area2 = abs(_cross2(quad[1] - quad[2], quad[3] - quad[2]))
        if min(area1, area2) < 1e-9:
            raise DegenerateCell(f"cell {j} has collinear vertices")
        cells.append(quad)
        creases.append(Crease(bottom[j], bottom[j + 1], MOUNTAIN))   # hexagon side a1
        creases.append(Crease(top[j], top[j + 1], MOUNTAIN))         # hexagon side a2
        creases.append(Crease(bottom[j + 1], top[j], VALLEY))        # tendon diagonal
    for j in range(7):
        kind = BOUNDARY if j in (0, 6) else MOUNTAIN
        creases.append(Crease(bottom[j], top[j], kind))              # slant crease b

    anchors = np.array([top[j] for j in range(6)], dtype=float)
    tabs = [(bottom[6], top[6])] + [(bottom[j], bottom[j + 1]) for j in range(6)]
    return CreasePattern(tuple(cells), tuple(creases), anchors, tuple(tabs))


def _cross2(u, v) -> float:
    return float(u[0] * v[1] - u[1] * v[0])
