"""Folded-state kinematics of single units and the five-unit stack.

A folded unit is described by the pose of its top hexagon frame relative to
its bottom frame: axial height, twist about the axis, and a tilt (bend angle
beta toward an in-plane azimuth phi).  Pose composition order is fixed:
twist, then tilt, then translate along the tilted axis, which makes vertex
positions reproducible bit for bit.

Closed-form maximum bend angles exist for the extreme states in which the
hexagons touch on the pulled side; lateral (radial/ulnar) and sagittal
(dorsal/palmar) extremes differ only in which hexagon side leads the fold.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import InvalidGeometry, NoSolution, NonPositiveValue, NotFoldable
from .geometry import SpatialFrame, UnitSpec, frame_vertices
from .sizing import OrthosisDesign

#: Sections free to move; 1 and 5 are body-attachment collars.
MOVABLE_SECTIONS = (2, 3, 4)

#: Azimuth datum: vertex 0 of every hexagon sits at this offset (deg) from
#: the frame reference so that pulling tendon k alone bends the stack toward
#: its sector center 60*(k-1) - 90 deg (tendon 1 = radial at -90, tendons
#: 2/3 straddle dorsal at 0, tendon 4 = ulnar at +90).  Calibrated on a
#: uniform alternating-chirality stack at full single-tendon pull.
TENDON_COLUMN_OFFSET_DEG = -121.4


def tendon_sector_center(index: int) -> float:
    """Nominal bending azimuth (deg, in (-180, 180]) for tendon 1..6."""
    _check_tendon(index)
    return normalize_angle(60.0 * (index - 1) - 90.0)


def normalize_angle(deg: float) -> float:
    """Wrap an angle in degrees into (-180, 180]."""
    wrapped = math.remainder(deg, 360.0)
    return 180.0 if wrapped == -180.0 else wrapped


def _check_tendon(index: int) -> None:
    if index not in (1, 2, 3, 4, 5, 6):
        raise NonPositiveValue(f"tendon index must be 1..6, got {index}")


# --- configurations --------------------------------------------------------------


@dataclass(frozen=True)
class UnitConfiguration:
    """Pose of a unit's top frame over its bottom frame.

    height: axial frame-to-frame distance (mm); twist: rotation about the
    unit axis (deg, positive counterclockwise seen from +normal);
    bend_azimuth: in-plane direction the top frame tips toward (deg);
    bend_angle: angle between the frame planes (deg).
    """

    height: float
    twist: float
    bend_azimuth: float = 0.0
    bend_angle: float = 0.0

    def __post_init__(self):
        if self.height < 0.0:
            raise NonPositiveValue(f"height must be >= 0, got {self.height}")
        if not 0.0 <= self.bend_angle < 180.0:
            raise NonPositiveValue(
                f"bend angle must lie in [0, 180), got {self.bend_angle}")


@dataclass(frozen=True)
class StackConfiguration:
    """Fold state of all five units (palm to forearm order) plus the
    forearm-fixed base frame of section 5."""

    unit_configs: tuple
    base_pose: SpatialFrame

    def __post_init__(self):
        object.__setattr__(self, "unit_configs", tuple(self.unit_configs))
        if len(self.unit_configs) != 5:
            raise NonPositiveValue("a stack configuration holds exactly 5 units")


@dataclass(frozen=True)
class BendReport:
    """Closed-form per-section maxima (deg) for the movable sections and
    their sums; entries are (section index, lateral max, sagittal max)."""

    per_section: tuple
    summed_lateral: float
    summed_sagittal: float


# --- closed-form bend limits ------------------------------------------------------


def _max_bend_angle(spec: UnitSpec, c1: float, c2: float) -> float:
    a1, a2, b = spec.a1, spec.a2, spec.b
    sin_a = math.sin(math.radians(spec.alpha))
    num = c1 * a1 * a1 + c2 * a2 * a2 - b * b * sin_a * sin_a
    den = 4.0 * math.sqrt(3.0) * a1 * a2
    x = num / den
    if x > 1.0:
        raise NotFoldable(
            f"extreme bent state unreachable (cos beta = {x:.6f} > 1)")
    if x < -1.0:
        raise InvalidGeometry(
            f"side lengths give an impossible bent state (cos beta = {x:.6f} < -1)")
    return math.degrees(math.acos(x))


def max_bend_angle_lateral(spec: UnitSpec) -> float:
    """Maximum bend angle (deg) toward the radial/ulnar extreme states."""
    return _max_bend_angle(spec, 3.0, 4.0)


def max_bend_angle_sagittal(spec: UnitSpec) -> float:
    """Maximum bend angle (deg) toward the dorsal/palmar extreme states."""
    return _max_bend_angle(spec, 4.0, 3.0)


def theoretical_bend_report(design: OrthosisDesign) -> BendReport:
    """Closed-form maxima for the movable sections 2..4 and their sums."""
    rows = []
    for section in MOVABLE_SECTIONS:
        spec = design.units[section - 1]
        rows.append((section, max_bend_angle_lateral(spec),
                     max_bend_angle_sagittal(spec)))
    return BendReport(tuple(rows),
                      sum(r[1] for r in rows),
                      sum(r[2] for r in rows))


# --- neutral fold -----------------------------------------------------------------


def neutral_twist(spec: UnitSpec, height: float) -> float:
    """Signed twist (deg) at which the slant edges have exactly length b.

    The magnitude is arccos((a1^2 + a2^2 + h^2 - b^2) / (2 a1 a2)); the sign
    follows chirality (CW units twist clockwise, i.e. negative).
    """
    a1, a2, b = spec.a1, spec.a2, spec.b
    arg = (a1 * a1 + a2 * a2 + height * height - b * b) / (2.0 * a1 * a2)
    if not -1.0 <= arg <= 1.0:
        raise NoSolution(
            f"no twist realises slant length {b} at height {height} "
            f"(cos twist = {arg:.6f})")
    magnitude = math.degrees(math.acos(arg))
    return -spec.column_shift * magnitude


def neutral_configuration(spec: UnitSpec, height: float) -> UnitConfiguration:
    """Untilted semi-folded pose at the given height."""
    return UnitConfiguration(height, neutral_twist(spec, height), 0.0, 0.0)


def neutral_valley_length(spec: UnitSpec, height: float) -> float:
    """Tendon-diagonal length (mm) at the neutral fold; equal for all six
    columns by symmetry."""
    gap = math.radians(60.0 * spec.column_shift + neutral_twist(spec, height))
    a1, a2 = spec.a1, spec.a2
    return math.sqrt(a1 * a1 + a2 * a2 + height * height
                     - 2.0 * a1 * a2 * math.cos(gap))


def neutral_stack_configuration(design: OrthosisDesign,
                                base_pose: SpatialFrame | None = None
                                ) -> StackConfiguration:
    """All five units at their neutral semi-fold."""
    if base_pose is None:
        base_pose = SpatialFrame.axis_aligned(design.units[4].a1)
    configs = tuple(neutral_configuration(spec, h)
                    for spec, h in zip(design.units, design.section_heights))
    return StackConfiguration(configs, base_pose)


# --- 3D realisation ---------------------------------------------------------------


def _rotate(v: np.ndarray, axis: np.ndarray, angle_rad: float) -> np.ndarray:
    c, s = math.cos(angle_rad), math.sin(angle_rad)
    return v * c + np.cross(axis, v) * s + axis * (float(np.dot(axis, v)) * (1.0 - c))


def advance_frame(bottom: SpatialFrame, config: UnitConfiguration,
                  top_radius: float) -> SpatialFrame:
    """Top frame from a bottom frame: twist, then tilt, then translate.

    The tilt axis lies in the bottom-frame plane, perpendicular to the
    azimuth direction, so the normal tips toward ``bend_azimuth``.
    """
    n = bottom.normal
    r = bottom.reference_direction
    w = bottom.binormal
    theta = math.radians(config.twist)
    r_twisted = r * math.cos(theta) + w * math.sin(theta)
    beta = math.radians(config.bend_angle)
    if beta != 0.0:
        phi = math.radians(config.bend_azimuth)
        axis = -math.sin(phi) * r + math.cos(phi) * w
        n_top = _rotate(n, axis, beta)
        r_top = _rotate(r_twisted, axis, beta)
    else:
        n_top = n
        r_top = r_twisted
    center_top = bottom.center + config.height * n_top
    return SpatialFrame(center_top, n_top, r_top, float(top_radius))


def unit_vertex_positions(spec: UnitSpec, config: UnitConfiguration,
                          bottom_frame: SpatialFrame) -> tuple:
    """Bottom and top hexagon vertices, two (6, 3) arrays in world mm."""
    bottom = frame_vertices(bottom_frame.with_radius(spec.a1))
    top_frame = advance_frame(bottom_frame, config, spec.a2)
    top = frame_vertices(top_frame)
    return bottom, top


@dataclass(frozen=True)
class EdgeLengths:
    """Edge lengths (mm) of one folded unit: slant (mountain) edges
    bottom_k -> top_k, tendon (valley) diagonals bottom_k -> top_{k+shift},
    and the rigid hexagon sides."""

    mountain: np.ndarray
    valley: np.ndarray
    bottom_side: float
    top_side: float


def edge_lengths(spec: UnitSpec, config: UnitConfiguration) -> EdgeLengths:
    """Edge-length table of one unit in its own bottom frame."""
    frame = SpatialFrame.axis_aligned(spec.a1)
    bottom, top = unit_vertex_positions(spec, config, frame)
    s = spec.column_shift
    mountain = np.linalg.norm(top - bottom, axis=1)
    valley = np.array([float(np.linalg.norm(top[(k + s) % 6] - bottom[k]))
                       for k in range(6)])
    return EdgeLengths(mountain, valley, spec.a1, spec.a2)


# --- stack assembly ---------------------------------------------------------------


def chain_frames(units, configs, base_pose: SpatialFrame) -> list:
    """Hexagon frames of a stack of any length, forearm end first.

    ``units``/``configs`` are palm-to-forearm ordered; the chain is built
    upward from the base pose, so frame 0 is the base and the last frame is
    the palm-side end.
    """
    frames = [base_pose.with_radius(units[-1].a1)]
    for i in range(len(units) - 1, -1, -1):
        frames.append(advance_frame(frames[-1], configs[i], units[i].a2))
    return frames


def build_interface_frames(design: OrthosisDesign, stack: StackConfiguration) -> list:
    """The six hexagon frames of the five-unit stack, forearm end first.

    Frame 0 is the base pose (bottom of section 5); frame 5 is the palm
    frame (top of section 1).  Radii come from the design.
    """
    return chain_frames(design.units, stack.unit_configs, stack.base_pose)


def palm_frame(design: OrthosisDesign, stack: StackConfiguration) -> SpatialFrame:
    return build_interface_frames(design, stack)[-1]


def columns_for_units(units) -> np.ndarray:
    """Valley-column index used by each tendon in each unit, shape (6, n).

    Tendon k (row k-1) enters the stack at base-hexagon vertex k-1; the
    column advances by each unit's chirality shift on the way to the palm.
    """
    n = len(units)
    cols = np.zeros((6, n), dtype=np.int64)
    for t in range(6):
        cols[t, n - 1] = t
        for i in range(n - 1, 0, -1):
            cols[t, i - 1] = (cols[t, i] + units[i].column_shift) % 6
    return cols


def tendon_columns(design: OrthosisDesign) -> np.ndarray:
    """Tendon column table of the five-unit design; see columns_for_units."""
    return columns_for_units(design.units)


def tendon_length(design: OrthosisDesign, stack: StackConfiguration,
                  tendon: int) -> float:
    """Routed length (mm) of one tendon: the sum of its five valley-diagonal
    segments, evaluated from the 3D vertex positions."""
    _check_tendon(tendon)
    frames = build_interface_frames(design, stack)
    cols = tendon_columns(design)
    total = 0.0
    for i, spec in enumerate(design.units):
        bottom = frame_vertices(frames[4 - i].with_radius(spec.a1),
                                TENDON_COLUMN_OFFSET_DEG)
        top = frame_vertices(frames[5 - i].with_radius(spec.a2),
                             TENDON_COLUMN_OFFSET_DEG)
        c = cols[tendon - 1, i]
        total += float(np.linalg.norm(top[(c + spec.column_shift) % 6] - bottom[c]))
    return total


def compose_bend_angle(configs, base_pose: SpatialFrame) -> tuple:
    """(beta, phi) in degrees for a chain of unit configurations.

    beta is the angle between the palm-side end frame's normal and the base
    normal; phi is the azimuth of that normal's in-plane component, measured
    from the base reference direction.  phi is 0 when beta vanishes.
    """
    frame = base_pose
    for config in reversed(tuple(configs)):
        frame = advance_frame(frame, config, frame.radius)
    n_base = base_pose.normal
    n_palm = frame.normal
    dot = float(np.clip(np.dot(n_palm, n_base), -1.0, 1.0))
    beta = math.degrees(math.acos(dot))
    in_plane = n_palm - dot * n_base
    norm = float(np.linalg.norm(in_plane))
    if norm < 1e-12:
        return beta, 0.0
    phi = math.degrees(math.atan2(
        float(np.dot(in_plane, base_pose.binormal)),
        float(np.dot(in_plane, base_pose.reference_direction))))
    return beta, phi


def stack_bend_angle(stack: StackConfiguration) -> tuple:
    """(beta, phi) of the whole five-unit stack in degrees; see
    compose_bend_angle."""
    return compose_bend_angle(stack.unit_configs, stack.base_pose)
