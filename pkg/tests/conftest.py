import pytest

from kwrist import (MeasurementSet, OrthosisDesign, SectionMeasurement,
                    make_unit_spec)

# Hand-wrist model measurements (mm): circumferences per section top/bottom,
# adjacent sections sharing a value, plus section heights.
MODEL1_CIRCUMFERENCES = (225.3, 225.3, 185.1, 153.9, 153.9)
MODEL1_HEIGHTS = (18.0, 27.0, 21.0, 20.0, 22.0)
MODEL2_CIRCUMFERENCES = (258.2, 258.2, 213.5, 175.6, 175.6)
MODEL2_HEIGHTS = (20.0, 29.0, 24.0, 26.0, 26.0)

# Published hexagon sides of the two fitted orthoses, palm end first, as
# (top of section 1, then the four shared interface values).
ORTHOSIS1_SIDES = (40.0, 40.0, 33.0, 28.0, 28.0)
ORTHOSIS2_SIDES = (45.7, 45.7, 37.7, 32.0, 32.0)


def measurement_set(circumferences, heights):
    c1, c2, c3, c4, c5 = circumferences
    tops = (c1, c2, c3, c4, c5)
    bottoms = (c2, c3, c4, c5, c5)
    sections = tuple(SectionMeasurement(t, b, h)
                     for t, b, h in zip(tops, bottoms, heights))
    return MeasurementSet(sections)


@pytest.fixture
def model1_measurements():
    return measurement_set(MODEL1_CIRCUMFERENCES, MODEL1_HEIGHTS)


@pytest.fixture
def model2_measurements():
    return measurement_set(MODEL2_CIRCUMFERENCES, MODEL2_HEIGHTS)


def design_from_sides(sides, heights, alpha=60.0):
    """Build the five-unit design straight from published hexagon sides.

    sides[i] is the shared value at interface i (sides[0] = palm-end top).
    b follows the sizing rules: 0.6*a1 for the palm collar, a1 elsewhere
    (all published units satisfy the semi-fold condition without growth).
    """
    units = []
    for i in range(5):
        a2 = sides[i]
        a1 = sides[i + 1] if i < 4 else sides[4]
        b = 0.6 * a1 if i == 0 else a1
        kind = "TKO" if abs(a1 - a2) <= 1e-9 else "CKO"
        chirality = "CW" if i % 2 == 0 else "CCW"
        units.append(make_unit_spec(kind, a1, a2, b, alpha, chirality))
    return OrthosisDesign(tuple(units), tuple(heights))


@pytest.fixture
def orthosis2_design():
    return design_from_sides(ORTHOSIS2_SIDES, MODEL2_HEIGHTS)


@pytest.fixture
def orthosis1_design():
    return design_from_sides(ORTHOSIS1_SIDES, MODEL1_HEIGHTS)


def uniform_tko_design(a=32.0, height=26.0):
    """Synthetic stack of five identical straight-strip units with
    alternating chirality; the workhorse for symmetry properties."""
    units = tuple(
        make_unit_spec("TKO", a, a, a, 60.0, "CW" if i % 2 == 0 else "CCW")
        for i in range(5))
    return OrthosisDesign(units, (height,) * 5)


@pytest.fixture
def uniform_design():
    return uniform_tko_design()
