import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from kwrist import (Chirality, SpatialFrame, UnitKind, cell_tendon_diagonal,
                    check_compatibility, frame_vertices, make_unit_spec,
                    unroll_strip)
from kwrist.errors import DegenerateCell, KindShapeMismatch, NonPositiveLength
from kwrist.geometry import BOUNDARY, MOUNTAIN, VALLEY


class TestUnitSpec:
    def test_tko_from_published_sides(self):
        spec = make_unit_spec("TKO", 32.0, 32.0, 32.0, 60.0, "CW")
        assert spec.kind is UnitKind.TKO
        assert spec.a1 == spec.a2 == 32.0

    def test_tko_with_unequal_sides_rejected(self):
        with pytest.raises(KindShapeMismatch):
            make_unit_spec("TKO", 32.0, 37.7, 32.0, 60.0, "CW")

    def test_cko_from_published_sides(self):
        spec = make_unit_spec("CKO", 32.0, 37.7, 32.0, 60.0, "CCW")
        assert spec.kind is UnitKind.CKO
        assert spec.chirality is Chirality.CCW

    def test_cko_with_equal_sides_rejected(self):
        with pytest.raises(KindShapeMismatch):
            make_unit_spec("CKO", 32.0, 32.0, 32.0, 60.0, "CW")

    @pytest.mark.parametrize("field,value", [
        ("a1", 0.0), ("a2", -1.0), ("b", 0.0), ("alpha", 0.0), ("alpha", 180.0),
    ])
    def test_non_positive_dimensions_rejected(self, field, value):
        kwargs = dict(kind="TKO", a1=32.0, a2=32.0, b=32.0, alpha=60.0,
                      chirality="CW")
        kwargs[field] = value
        if field == "a1":
            kwargs["a2"] = value  # keep the TKO shape consistent
        with pytest.raises(NonPositiveLength):
            make_unit_spec(**kwargs)

    def test_column_shift_follows_chirality(self):
        cw = make_unit_spec("TKO", 32, 32, 32, 60, "CW")
        ccw = make_unit_spec("TKO", 32, 32, 32, 60, "CCW")
        assert cw.column_shift == 1
        assert ccw.column_shift == -1


class TestCompatibility:
    def test_published_interface_40(self):
        lower = make_unit_spec("CKO", 33.0, 40.0, 33.0, 60.0, "CCW")
        upper = make_unit_spec("TKO", 40.0, 40.0, 24.0, 60.0, "CW")
        assert check_compatibility(lower=lower, upper=upper)

    def test_unequal_interface(self):
        lower = make_unit_spec("CKO", 33.0, 39.0, 33.0, 60.0, "CCW")
        upper = make_unit_spec("TKO", 40.0, 40.0, 24.0, 60.0, "CW")
        assert not check_compatibility(lower=lower, upper=upper)

    def test_published_interface_28(self):
        lower = make_unit_spec("TKO", 28.0, 28.0, 28.0, 60.0, "CW")
        upper = make_unit_spec("CKO", 28.0, 33.0, 28.0, 60.0, "CCW")
        assert check_compatibility(lower=lower, upper=upper)

    def test_depends_only_on_interface_sides(self):
        lower = make_unit_spec("CKO", 10.0, 40.0, 15.0, 45.0, "CCW")
        upper = make_unit_spec("CKO", 40.0, 99.0, 50.0, 110.0, "CW")
        assert check_compatibility(lower=lower, upper=upper)


class TestTendonDiagonal:
    def test_matches_planar_vertex_coordinates(self):
        # frozen: distance between cell corners (40, 0) and 24*(cos60, sin60)
        spec = make_unit_spec("TKO", 40.0, 40.0, 24.0, 60.0, "CW")
        assert cell_tendon_diagonal(spec) == pytest.approx(
            34.8711915483253884, abs=1e-12)

    def test_equilateral_closure(self):
        spec = make_unit_spec("TKO", 1.0, 1.0, 1.0, 60.0, "CW")
        assert cell_tendon_diagonal(spec) == pytest.approx(1.0, abs=1e-12)
        spec = make_unit_spec("TKO", 32.0, 32.0, 32.0, 60.0, "CW")
        assert cell_tendon_diagonal(spec) == pytest.approx(32.0, abs=1e-12)

    @given(a=st.floats(1.0, 80.0), b=st.floats(1.0, 80.0),
           alpha=st.floats(10.0, 170.0), k=st.floats(0.5, 4.0))
    @settings(max_examples=60, deadline=None)
    def test_scale_homogeneous(self, a, b, alpha, k):
        s1 = make_unit_spec("TKO", a, a, b, alpha, "CW")
        s2 = make_unit_spec("TKO", k * a, k * a, k * b, alpha, "CW")
        d1, d2 = cell_tendon_diagonal(s1), cell_tendon_diagonal(s2)
        assert d2 == pytest.approx(k * d1, rel=1e-12)


class TestFrameVertices:
    def test_identity_frame_vertex0(self):
        frame = SpatialFrame.axis_aligned(32.0)
        v = frame_vertices(frame)
        np.testing.assert_allclose(v[0], [32.0, 0.0, 0.0], atol=1e-12)

    def test_side_equals_circumradius(self):
        frame = SpatialFrame.axis_aligned(32.0)
        v = frame_vertices(frame)
        for k in range(6):
            assert np.linalg.norm(v[(k + 1) % 6] - v[k]) == pytest.approx(
                32.0, abs=1e-9)

    def test_sixty_degree_offset_permutes(self):
        frame = SpatialFrame.axis_aligned(17.0, center=(1.0, 2.0, 3.0))
        v0 = frame_vertices(frame, 0.0)
        v60 = frame_vertices(frame, 60.0)
        np.testing.assert_allclose(v60, np.roll(v0, -1, axis=0), atol=1e-9)

    def test_rejects_non_unit_frame(self):
        with pytest.raises(NonPositiveLength):
            SpatialFrame((0, 0, 0), (0, 0, 2.0), (1, 0, 0), 10.0)
        with pytest.raises(NonPositiveLength):
            SpatialFrame((0, 0, 0), (0, 0, 1.0), (0, 0, 1.0), 10.0)


def edge_set(cells):
    """Cell side edges as unordered endpoint pairs, rounded for matching."""
    edges = []
    for c in cells:
        for i in range(4):
            p = tuple(np.round(c[i], 9))
            q = tuple(np.round(c[(i + 1) % 4], 9))
            edges.append(frozenset((p, q)))
    return edges


class TestUnrollStrip:
    def test_tko_straight_strip(self):
        spec = make_unit_spec("TKO", 40.0, 40.0, 24.0, 60.0, "CCW")
        pattern = unroll_strip(spec)
        assert len(pattern.cells) == 6
        # all bottom edges lie on y = 0
        for cell in pattern.cells:
            assert cell[0][1] == pytest.approx(0.0, abs=1e-12)
            assert cell[1][1] == pytest.approx(0.0, abs=1e-12)
        # congruent parallelograms
        for cell in pattern.cells:
            np.testing.assert_allclose(cell[2] - cell[3], cell[1] - cell[0],
                                       atol=1e-9)

    @pytest.mark.parametrize("a1,a2,b,alpha", [
        (33.0, 40.0, 33.0, 60.0),
        (31.767, 38.083, 31.767, 60.0),
        (20.0, 29.0, 25.0, 75.0),
    ])
    def test_cko_annular_strip(self, a1, a2, b, alpha):
        spec = make_unit_spec("CKO", a1, a2, b, alpha, "CCW")
        pattern = unroll_strip(spec)
        assert len(pattern.cells) == 6
        bottom, top = pattern.boundary_lengths()
        assert bottom == pytest.approx(6 * a1, abs=1e-9)
        assert top == pytest.approx(6 * a2, abs=1e-9)
        for cell in pattern.cells:
            assert math.dist(cell[0], cell[1]) == pytest.approx(a1, abs=1e-9)
            assert math.dist(cell[3], cell[2]) == pytest.approx(a2, abs=1e-9)
            assert math.dist(cell[0], cell[3]) == pytest.approx(b, abs=1e-9)
            assert math.dist(cell[1], cell[2]) == pytest.approx(b, abs=1e-9)

    def test_cko_cells_congruent(self):
        spec = make_unit_spec("CKO", 33.0, 40.0, 33.0, 60.0, "CCW")
        pattern = unroll_strip(spec)
        diag = cell_tendon_diagonal(spec)
        for cell in pattern.cells:
            assert math.dist(cell[1], cell[3]) == pytest.approx(diag, abs=1e-9)

    def test_mirrored_chirality_is_reflection(self):
        for kind, a1, a2 in (("TKO", 40.0, 40.0), ("CKO", 33.0, 40.0)):
            ccw = unroll_strip(make_unit_spec(kind, a1, a2, 30.0, 60.0, "CCW"))
            cw = unroll_strip(make_unit_spec(kind, a1, a2, 30.0, 60.0, "CW"))
            for c1, c2 in zip(ccw.cells, cw.cells):
                np.testing.assert_allclose(c1 * np.array([-1.0, 1.0]), c2,
                                           atol=1e-9)

    def test_crease_tags(self):
        spec = make_unit_spec("CKO", 33.0, 40.0, 33.0, 60.0, "CCW")
        pattern = unroll_strip(spec)
        counts = {}
        for crease in pattern.creases:
            counts[crease.kind] = counts.get(crease.kind, 0) + 1
        # 12 hexagon sides + 5 interior slants are folds; 6 tendon diagonals;
        # the two open strip ends are boundary.
        assert counts == {MOUNTAIN: 17, VALLEY: 6, BOUNDARY: 2}
        diag = cell_tendon_diagonal(spec)
        for crease in pattern.creases:
            if crease.kind == VALLEY:
                assert crease.length == pytest.approx(diag, abs=1e-9)

    def test_interior_slants_shared_by_two_cells(self):
        spec = make_unit_spec("CKO", 33.0, 40.0, 33.0, 60.0, "CCW")
        pattern = unroll_strip(spec)
        edges = edge_set(pattern.cells)
        shared = [e for e in set(edges) if edges.count(e) == 2]
        assert len(shared) == 5  # the interior slant creases

    def test_six_eyelet_anchors_on_top_row(self):
        spec = make_unit_spec("TKO", 40.0, 40.0, 24.0, 60.0, "CCW")
        pattern = unroll_strip(spec)
        assert pattern.eyelet_anchors.shape == (6, 2)
        for anchor, cell in zip(pattern.eyelet_anchors, pattern.cells):
            np.testing.assert_allclose(anchor, cell[3], atol=1e-12)

    def test_degenerate_cell_rejected(self):
        # slant shorter than the gap it must span across the annulus
        with pytest.raises(DegenerateCell):
            unroll_strip(make_unit_spec("CKO", 10.0, 40.0, 3.0, 60.0, "CCW"))

    @given(a1=st.floats(15.0, 45.0), ratio=st.floats(1.05, 1.6),
           alpha=st.floats(30.0, 120.0))
    @settings(max_examples=40, deadline=None)
    def test_cko_boundary_sums_property(self, a1, ratio, alpha):
        from hypothesis import assume
        a2 = a1 * ratio
        b = a1
        # cell constructible: its diagonal, top side, and far slant must
        # satisfy the triangle inequality
        diag = math.sqrt(a1 ** 2 + b ** 2
                         - 2 * a1 * b * math.cos(math.radians(alpha)))
        assume(diag + b > a2 * 1.001 and a2 + b > diag * 1.001)
        spec = make_unit_spec("CKO", a1, a2, b, alpha, "CCW")
        pattern = unroll_strip(spec)
        bottom, top = pattern.boundary_lengths()
        assert bottom == pytest.approx(6 * a1, rel=1e-9)
        assert top == pytest.approx(6 * a2, rel=1e-9)
