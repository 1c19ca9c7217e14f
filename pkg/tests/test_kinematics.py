import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from kwrist import (SpatialFrame, StackConfiguration, UnitConfiguration,
                    edge_lengths, make_unit_spec, max_bend_angle_lateral,
                    max_bend_angle_sagittal, neutral_twist, stack_bend_angle,
                    tendon_length, theoretical_bend_report,
                    unit_vertex_positions)
from kwrist.errors import NoSolution, NotFoldable
from kwrist.kinematics import (neutral_configuration,
                               neutral_stack_configuration, build_interface_frames,
                               neutral_valley_length, tendon_columns)

from conftest import design_from_sides, ORTHOSIS2_SIDES, MODEL2_HEIGHTS


def section3_spec():
    return make_unit_spec("CKO", 32.0, 37.7, 32.0, 60.0, "CW")


class TestMaxBendAngles:
    def test_lateral_section3(self):
        assert max_bend_angle_lateral(section3_spec()) == pytest.approx(
            17.0891383416127827, abs=1e-9)
        # published value quoted to two decimals
        assert max_bend_angle_lateral(section3_spec()) == pytest.approx(
            17.06, abs=0.05)

    def test_sagittal_section3(self):
        assert max_bend_angle_sagittal(section3_spec()) == pytest.approx(
            24.7263798518258673, abs=1e-9)
        assert max_bend_angle_sagittal(section3_spec()) == pytest.approx(
            24.72, abs=0.05)

    def test_equilateral_tko(self):
        spec = make_unit_spec("TKO", 32.0, 32.0, 32.0, 60.0, "CW")
        assert max_bend_angle_lateral(spec) == pytest.approx(
            25.5632086707166691, abs=1e-9)
        assert max_bend_angle_lateral(spec) == pytest.approx(25.56, abs=0.05)
        assert max_bend_angle_sagittal(spec) == pytest.approx(
            max_bend_angle_lateral(spec), abs=1e-12)

    def test_scale_invariance(self):
        small = make_unit_spec("TKO", 32.0, 32.0, 32.0, 60.0, "CW")
        large = make_unit_spec("TKO", 64.0, 64.0, 64.0, 60.0, "CW")
        assert max_bend_angle_lateral(large) == pytest.approx(
            max_bend_angle_lateral(small), abs=1e-10)

    def test_section2_sagittal(self):
        spec = make_unit_spec("CKO", 37.7, 45.7, 37.7, 60.0, "CW")
        # frozen from a 40-digit evaluation of the arccos expression
        assert max_bend_angle_sagittal(spec) == pytest.approx(
            24.2338011477272491, abs=1e-9)

    def test_sagittal_exceeds_lateral_when_top_larger(self):
        spec = make_unit_spec("CKO", 32.0, 37.7, 32.0, 60.0, "CW")
        assert max_bend_angle_sagittal(spec) > max_bend_angle_lateral(spec)

    @given(a=st.floats(20.0, 60.0), k=st.floats(0.25, 4.0),
           ratio=st.floats(1.0, 1.25))
    @settings(max_examples=50, deadline=None)
    def test_scale_invariance_property(self, a, k, ratio):
        from hypothesis import assume
        a2 = a * ratio
        if abs(a2 - a) <= 1e-6 * a:
            kind, a2 = "TKO", a
        else:
            kind = "CKO"
        s1 = make_unit_spec(kind, a, a2, a, 60.0, "CW")
        s2 = make_unit_spec(kind, k * a, k * a2, k * a, 60.0, "CW")
        # restrict to geometries whose extreme state exists
        arg = (3 * a * a + 4 * a2 * a2 - (a * math.sin(math.radians(60))) ** 2)
        assume(arg / (4 * math.sqrt(3) * a * a2) <= 0.9999)
        assert max_bend_angle_lateral(s2) == pytest.approx(
            max_bend_angle_lateral(s1), abs=1e-10)
        assert max_bend_angle_sagittal(s2) == pytest.approx(
            max_bend_angle_sagittal(s1), abs=1e-10)

    def test_not_foldable_when_crease_too_short(self):
        spec = make_unit_spec("TKO", 32.0, 32.0, 5.0, 60.0, "CW")
        with pytest.raises(NotFoldable):
            max_bend_angle_lateral(spec)


class TestNeutralTwist:
    def test_closed_form_value(self):
        spec = make_unit_spec("TKO", 32.0, 32.0, 32.0, 60.0, "CCW")
        assert neutral_twist(spec, 26.0) == pytest.approx(
            33.8932358347693846, abs=1e-9)

    def test_sign_follows_chirality(self):
        ccw = make_unit_spec("TKO", 32.0, 32.0, 32.0, 60.0, "CCW")
        cw = make_unit_spec("TKO", 32.0, 32.0, 32.0, 60.0, "CW")
        assert neutral_twist(ccw, 26.0) > 0
        assert neutral_twist(cw, 26.0) == pytest.approx(
            -neutral_twist(ccw, 26.0), abs=1e-12)

    def test_flat_fold_is_sixty_degrees(self):
        spec = make_unit_spec("TKO", 20.0, 20.0, 20.0, 60.0, "CCW")
        assert neutral_twist(spec, 0.0) == pytest.approx(60.0, abs=1e-12)

    def test_height_beyond_crease_has_no_solution(self):
        spec = make_unit_spec("TKO", 32.0, 32.0, 32.0, 60.0, "CCW")
        with pytest.raises(NoSolution):
            neutral_twist(spec, 33.0)

    def test_rebuilt_vertices_reproduce_crease_length(self):
        # consistency: slant edges measure exactly b at the neutral twist
        for chirality in ("CW", "CCW"):
            spec = make_unit_spec("CKO", 32.0, 37.7, 32.0, 60.0, chirality)
            config = neutral_configuration(spec, 24.0)
            table = edge_lengths(spec, config)
            np.testing.assert_allclose(table.mountain, spec.b, atol=1e-9)


class TestVertexPositions:
    def test_untilted_untwisted_stacking(self):
        spec = make_unit_spec("CKO", 30.0, 40.0, 30.0, 60.0, "CW")
        frame = SpatialFrame.axis_aligned(spec.a1)
        config = UnitConfiguration(height=12.0, twist=0.0)
        bottom, top = unit_vertex_positions(spec, config, frame)
        np.testing.assert_allclose(top[:, 2], 12.0, atol=1e-12)
        np.testing.assert_allclose(top[:, :2] * (30.0 / 40.0), bottom[:, :2],
                                   atol=1e-9)

    def test_azimuth_periodicity(self):
        spec = make_unit_spec("TKO", 32.0, 32.0, 32.0, 60.0, "CW")
        frame = SpatialFrame.axis_aligned(spec.a1)
        c1 = UnitConfiguration(20.0, -30.0, 40.0, 10.0)
        c2 = UnitConfiguration(20.0, -30.0, 400.0, 10.0)
        b1, t1 = unit_vertex_positions(spec, c1, frame)
        b2, t2 = unit_vertex_positions(spec, c2, frame)
        np.testing.assert_allclose(t1, t2, atol=1e-9)
        np.testing.assert_allclose(b1, b2, atol=1e-12)


class TestEdgeLengths:
    def test_neutral_mountains_equal_crease(self):
        spec = make_unit_spec("TKO", 32.0, 32.0, 32.0, 60.0, "CW")
        table = edge_lengths(spec, neutral_configuration(spec, 26.0))
        np.testing.assert_allclose(table.mountain, 32.0, atol=1e-9)
        np.testing.assert_allclose(table.valley,
                                   neutral_valley_length(spec, 26.0), atol=1e-9)

    def test_untilted_valleys_equal(self):
        spec = make_unit_spec("CKO", 32.0, 37.7, 32.0, 60.0, "CCW")
        table = edge_lengths(spec, UnitConfiguration(20.0, 25.0, 0.0, 0.0))
        assert np.ptp(table.valley) == pytest.approx(0.0, abs=1e-9)

    def test_tilted_valleys_mirror_to_opposite_chirality(self):
        # the fold is chiral: reflecting a tilted unit across the plane that
        # contains its tilt axis yields the opposite-chirality unit, so the
        # valley tables pair up across the two chiralities
        cw = make_unit_spec("TKO", 32.0, 32.0, 32.0, 60.0, "CW")
        ccw = make_unit_spec("TKO", 32.0, 32.0, 32.0, 60.0, "CCW")
        config = UnitConfiguration(18.0, 0.0, 30.0, 12.0)
        val_cw = edge_lengths(cw, config).valley
        val_ccw = edge_lengths(ccw, config).valley
        for k in range(6):
            assert val_cw[k] == pytest.approx(val_ccw[(1 - k) % 6], abs=1e-9)

    def test_tilted_mountains_mirror_symmetric_about_azimuth(self):
        # mountains are achiral at zero twist: tilting along the gap midline
        # between vertices 0 and 1 pairs them symmetrically
        spec = make_unit_spec("TKO", 32.0, 32.0, 32.0, 60.0, "CW")
        mountain = edge_lengths(spec, UnitConfiguration(18.0, 0.0, 30.0, 12.0)
                                ).mountain
        assert mountain[0] == pytest.approx(mountain[1], abs=1e-9)
        assert mountain[2] == pytest.approx(mountain[5], abs=1e-9)
        assert mountain[3] == pytest.approx(mountain[4], abs=1e-9)

    def test_hexagon_sides_constant(self):
        spec = make_unit_spec("CKO", 30.0, 40.0, 32.0, 60.0, "CW")
        table = edge_lengths(spec, UnitConfiguration(15.0, -20.0, 77.0, 14.0))
        assert table.bottom_side == 30.0
        assert table.top_side == 40.0


class TestStackBendAngle:
    def test_neutral_stack_is_straight(self, orthosis2_design):
        stack = neutral_stack_configuration(orthosis2_design)
        beta, phi = stack_bend_angle(stack)
        assert beta == pytest.approx(0.0, abs=1e-12)
        assert phi == 0.0

    def test_single_bent_unit_sets_stack_angle(self, orthosis2_design):
        stack = neutral_stack_configuration(orthosis2_design)
        configs = list(stack.unit_configs)
        c = configs[2]
        configs[2] = UnitConfiguration(c.height, c.twist, 25.0, 14.0)
        beta, _ = stack_bend_angle(StackConfiguration(tuple(configs),
                                                      stack.base_pose))
        assert beta == pytest.approx(14.0, abs=1e-9)

    def test_same_azimuth_zero_twist_bends_add(self):
        design = design_from_sides((32.0,) * 5, (26.0,) * 5)
        base = SpatialFrame.axis_aligned(32.0)
        configs = [UnitConfiguration(26.0, 0.0, 40.0, 10.0) if i in (1, 2)
                   else UnitConfiguration(26.0, 0.0, 0.0, 0.0)
                   for i in range(5)]
        beta, phi = stack_bend_angle(StackConfiguration(tuple(configs), base))
        assert beta == pytest.approx(20.0, abs=1e-9)

    def test_invariant_under_rigid_base_motion(self, orthosis2_design):
        stack = neutral_stack_configuration(orthosis2_design)
        configs = list(stack.unit_configs)
        c = configs[1]
        configs[1] = UnitConfiguration(c.height, c.twist, 70.0, 9.0)
        beta1, _ = stack_bend_angle(StackConfiguration(tuple(configs),
                                                       stack.base_pose))
        moved = SpatialFrame(
            np.array([25.0, -3.0, 11.0]),
            np.array([0.0, 1.0, 0.0]),
            np.array([0.0, 0.0, 1.0]),
            orthosis2_design.units[4].a1)
        beta2, _ = stack_bend_angle(StackConfiguration(tuple(configs), moved))
        assert beta2 == pytest.approx(beta1, abs=1e-9)


class TestTendonLength:
    def test_neutral_equals_brute_force_sum(self, orthosis2_design):
        stack = neutral_stack_configuration(orthosis2_design)
        # oracle: walk the frames and sum explicit 3D segment lengths
        from kwrist.geometry import frame_vertices
        from kwrist.kinematics import TENDON_COLUMN_OFFSET_DEG
        frames = build_interface_frames(orthosis2_design, stack)
        cols = tendon_columns(orthosis2_design)
        for tendon in range(1, 7):
            total = 0.0
            ends = []
            for i, spec in enumerate(orthosis2_design.units):
                bottom = frame_vertices(frames[4 - i].with_radius(spec.a1),
                                        TENDON_COLUMN_OFFSET_DEG)
                top = frame_vertices(frames[5 - i].with_radius(spec.a2),
                                     TENDON_COLUMN_OFFSET_DEG)
                c = cols[tendon - 1, i]
                p0 = bottom[c]
                p1 = top[(c + spec.column_shift) % 6]
                total += float(np.linalg.norm(p1 - p0))
                ends.append((p0, p1))
            # chained segments must connect end to end across units
            for i in range(4):
                np.testing.assert_allclose(ends[i][0], ends[i + 1][1],
                                           atol=1e-9)
            assert tendon_length(orthosis2_design, stack, tendon) == \
                pytest.approx(total, abs=1e-9)

    def test_all_tendons_equal_at_neutral(self, orthosis2_design):
        stack = neutral_stack_configuration(orthosis2_design)
        lengths = [tendon_length(orthosis2_design, stack, t)
                   for t in range(1, 7)]
        assert max(lengths) - min(lengths) < 1e-9

    def test_bending_toward_sector_shortens_that_tendon(self, uniform_design):
        from kwrist.kinematics import tendon_sector_center
        stack = neutral_stack_configuration(uniform_design)
        neutral = tendon_length(uniform_design, stack, 1)
        # tilt every movable unit toward tendon 1's sector
        for beta in (4.0, 8.0, 12.0):
            configs = list(stack.unit_configs)
            for i in (1, 2, 3):
                c = configs[i]
                configs[i] = UnitConfiguration(
                    c.height, c.twist, tendon_sector_center(1), beta)
            bent = StackConfiguration(tuple(configs), stack.base_pose)
            assert tendon_length(uniform_design, bent, 1) < neutral


class TestTheoreticalBendReport:
    def test_orthosis2_published_values(self, orthosis2_design):
        report = theoretical_bend_report(orthosis2_design)
        sections = [row[0] for row in report.per_section]
        assert sections == [2, 3, 4]
        lateral = {row[0]: row[1] for row in report.per_section}
        sagittal = {row[0]: row[2] for row in report.per_section}
        assert lateral[3] == pytest.approx(17.06, abs=0.05)
        assert sagittal[3] == pytest.approx(24.72, abs=0.05)
        assert lateral[4] == pytest.approx(25.56, abs=0.05)
        assert report.summed_lateral == pytest.approx(57.21, abs=0.1)
        # frozen sagittal values for the annular sections
        assert sagittal[2] == pytest.approx(24.2338011477272491, abs=1e-9)
        assert report.summed_sagittal == pytest.approx(74.52, abs=0.05)

    def test_uniform_design_maxima_coincide(self, uniform_design):
        report = theoretical_bend_report(uniform_design)
        for _, lateral, sagittal in report.per_section:
            assert lateral == pytest.approx(sagittal, abs=1e-12)
