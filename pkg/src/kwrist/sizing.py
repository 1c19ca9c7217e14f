"""Measurement-driven sizing of the five-unit orthosis.

The covered limb is split into five sections, palm (1) to forearm (5).
Hexagon sides come from the body circumference plus a wearing tolerance
(divided by six); slant crease lengths start at the bottom hexagon side and
grow by 20% steps until the unit can sit semi-folded at the section height.
Sections 1 and 5 are attachment collars and never move; adjacent units
alternate chirality so their twists cancel.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import (InfeasibleSection, NonConvergence, NonPositiveCircumference,
                     NonPositiveValue, SchemaViolation)
from .geometry import (Chirality, EQUAL_SIDE_TOL, UnitKind,
                       check_compatibility, make_unit_spec)

#: Default circumference tolerance added before dividing by six (mm).
DEFAULT_TOLERANCE = 15.0
#: Default flat-cell base angle (deg).
DEFAULT_ALPHA = 60.0
#: Collar sections that are affixed to the body and never move.
LOCKED_SECTIONS = frozenset({1, 5})
#: Crease length for the palm collar: fraction of its hexagon side.
COLLAR_CREASE_FRACTION = 0.6
#: Growth factor and step cap for the semi-fold feasibility loop.
CREASE_GROWTH_FACTOR = 1.2
MAX_GROWTH_STEPS = 64


@dataclass(frozen=True)
class SectionMeasurement:
    """One section: top/bottom circumferences and height, all mm."""

    c_top: float
    c_bottom: float
    height: float

    def __post_init__(self):
        if not self.c_top > 0.0 or not self.c_bottom > 0.0:
            raise NonPositiveCircumference(
                f"circumferences must be positive, got {self.c_top}, {self.c_bottom}")
        if not self.height > 0.0:
            raise NonPositiveValue(f"section height must be positive, got {self.height}")


@dataclass(frozen=True)
class MeasurementSet:
    """Five section measurements ordered palm to forearm, plus the shared
    tolerance (mm) and cell base angle (deg)."""

    sections: tuple
    tolerance: float = DEFAULT_TOLERANCE
    alpha: float = DEFAULT_ALPHA

    def __post_init__(self):
        object.__setattr__(self, "sections", tuple(self.sections))
        if len(self.sections) != 5:
            raise SchemaViolation(f"expected 5 sections, got {len(self.sections)}")
        for i in range(4):
            lo, hi = self.sections[i], self.sections[i + 1]
            if abs(lo.c_bottom - hi.c_top) > 1e-6:
                raise SchemaViolation(
                    f"sections {i + 1} and {i + 2} must share a circumference: "
                    f"{lo.c_bottom} vs {hi.c_top}")
        if self.tolerance < 0.0:
            raise NonPositiveValue(f"tolerance must be >= 0, got {self.tolerance}")
        if not 0.0 < self.alpha < 180.0:
            raise NonPositiveValue(f"alpha must lie in (0, 180), got {self.alpha}")


@dataclass(frozen=True)
class OrthosisDesign:
    """Ordered stack of five units (palm to forearm) plus section heights.

    ``locked_sections`` is always {1, 5}; it is kept as a field so downstream
    consumers need no extra convention.
    """

    units: tuple
    section_heights: tuple
    locked_sections: frozenset = LOCKED_SECTIONS

    def __post_init__(self):
        object.__setattr__(self, "units", tuple(self.units))
        object.__setattr__(self, "section_heights",
                           tuple(float(h) for h in self.section_heights))
        if len(self.units) != 5 or len(self.section_heights) != 5:
            raise SchemaViolation("a design holds exactly 5 units and 5 heights")
        if self.locked_sections != LOCKED_SECTIONS:
            raise SchemaViolation("sections 1 and 5 are always the locked collars")
        for i in range(4):
            if not check_compatibility(lower=self.units[i + 1], upper=self.units[i]):
                raise SchemaViolation(
                    f"units {i + 1} and {i + 2} do not share an interface hexagon")
            if self.units[i].chirality == self.units[i + 1].chirality:
                raise SchemaViolation(
                    f"units {i + 1} and {i + 2} must alternate chirality")


def size_section(c_top: float, c_bottom: float, tolerance: float) -> tuple:
    """Hexagon sides (a1 bottom, a2 top) for one section.

    Equal circumferences give one hexagon size, (c + tolerance)/6; unequal
    ones give a size per end.  No rounding is applied.
    """
    if not c_top > 0.0 or not c_bottom > 0.0:
        raise NonPositiveCircumference(
            f"circumferences must be positive, got {c_top}, {c_bottom}")
    if tolerance < 0.0:
        raise NonPositiveValue(f"tolerance must be >= 0, got {tolerance}")
    if abs(c_top - c_bottom) <= 1e-9:
        a = (c_top + tolerance) / 6.0
        return a, a
    return (c_bottom + tolerance) / 6.0, (c_top + tolerance) / 6.0


def check_semifold(b: float, alpha: float, height: float) -> bool:
    """True when a unit with crease length b can sit semi-folded at this
    height: b*sin(alpha) must strictly exceed the height."""
    return b * math.sin(math.radians(alpha)) > height


def assign_crease_length(section_index: int, a1: float, alpha: float,
                         height: float) -> float:
    """Slant crease length for a section (index 1..5, palm to forearm).

    The palm collar uses a fixed fraction of its hexagon side and skips the
    feasibility loop (it never moves).  Other sections start at a1 and grow
    by 20% steps until semi-folding becomes possible.
    """
    if section_index not in (1, 2, 3, 4, 5):
        raise NonPositiveValue(f"section index must be 1..5, got {section_index}")
    if not a1 > 0.0 or not height > 0.0:
        raise NonPositiveValue("hexagon side and height must be positive")
    if section_index == 1:
        return COLLAR_CREASE_FRACTION * a1
    b = a1
    for _ in range(MAX_GROWTH_STEPS + 1):
        if check_semifold(b, alpha, height):
            return b
        b *= CREASE_GROWTH_FACTOR
    raise NonConvergence(
        f"section {section_index}: no semi-foldable crease length within "
        f"{MAX_GROWTH_STEPS} growth steps (a1={a1}, height={height})")


def design_orthosis(measurements: MeasurementSet) -> OrthosisDesign:
    """Full sizing pipeline: five units with alternating chirality.

    Sections whose circumferences match become straight-strip units, the
    others annular-strip units.  Interface compatibility holds by
    construction because adjacent sections share a circumference.
    """
    units = []
    for idx, section in enumerate(measurements.sections, start=1):
        a1, a2 = size_section(section.c_top, section.c_bottom, measurements.tolerance)
        try:
            b = assign_crease_length(idx, a1, measurements.alpha, section.height)
        except NonConvergence as exc:
            raise InfeasibleSection(str(exc)) from exc
        kind = UnitKind.TKO if abs(a1 - a2) <= EQUAL_SIDE_TOL else UnitKind.CKO
        chirality = Chirality.CW if idx % 2 == 1 else Chirality.CCW
        units.append(make_unit_spec(kind, a1, a2, b, measurements.alpha, chirality))
    heights = tuple(s.height for s in measurements.sections)
    return OrthosisDesign(tuple(units), heights)


def fit_report(design: OrthosisDesign, measurements: MeasurementSet) -> list:
    """Per-section clearance between the hexagon rings and the body (mm).

    Returns a list of (bottom, top) pairs: 6*a1 - c_bottom and 6*a2 - c_top.
    For a design produced from the same measurements both equal the sizing
    tolerance.
    """
    report = []
    for unit, section in zip(design.units, measurements.sections):
        report.append((6.0 * unit.a1 - section.c_bottom,
                       6.0 * unit.a2 - section.c_top))
    return report
