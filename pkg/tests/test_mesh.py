import math

import numpy as np
import pytest
from hypothesis import assume, given, settings, strategies as st

from meshgame import build_mesh, element_qualities, element_quality, mean_ratio_quality, mesh_quality
from meshgame.mesh import MeshBuildError, as_coords3, edge_ratio, mean_ratio

SQRT3 = math.sqrt(3)

EQUILATERAL = np.array([[0.0, 0.0], [1.0, 0.0], [0.5, SQRT3 / 2]])


def tri_mesh(points):
    return build_mesh(np.asarray(points, dtype=float), np.array([[0, 1, 2]]))


class TestBuildMesh:
    def test_pads_2d_to_z0(self):
        mesh = tri_mesh(EQUILATERAL)
        assert mesh.coords.shape == (3, 3)
        assert np.all(mesh.coords[:, 2] == 0.0)

    def test_rejects_empty(self):
        with pytest.raises(MeshBuildError):
            build_mesh(np.zeros((0, 3)), np.zeros((0, 3), dtype=int))

    def test_rejects_bad_element_shape(self):
        with pytest.raises(MeshBuildError):
            build_mesh(EQUILATERAL, np.array([[0, 1, 2, 0]]))

    def test_rejects_out_of_range_index(self):
        with pytest.raises(MeshBuildError):
            build_mesh(EQUILATERAL, np.array([[0, 1, 3]]))

    def test_rejects_repeated_vertex_in_element(self):
        with pytest.raises(MeshBuildError):
            build_mesh(EQUILATERAL, np.array([[0, 1, 1]]))

    def test_rejects_unreferenced_vertex(self):
        pts = np.vstack([EQUILATERAL, [9.0, 9.0]])
        with pytest.raises(MeshBuildError):
            build_mesh(pts, np.array([[0, 1, 2]]))

    def test_reorients_negative_planar_element(self):
        mesh = tri_mesh([[0.0, 0.0], [0.0, 1.0], [1.0, 0.0]])
        assert list(mesh.elements[0]) == [0, 2, 1]

    def test_positive_element_kept_verbatim(self):
        mesh = tri_mesh(EQUILATERAL)
        assert list(mesh.elements[0]) == [0, 1, 2]

    def test_arrays_immutable(self, fan5):
        with pytest.raises(ValueError):
            fan5.coords[0, 0] = 99.0
        with pytest.raises(ValueError):
            fan5.elements[0, 0] = 5


class TestBoundary:
    def test_fan_hub_is_interior(self, fan5):
        assert not fan5.boundary[0]
        assert fan5.boundary[1:].all()

    def test_explicit_boundary_respected(self):
        flags = np.array([True, False, False])
        mesh = build_mesh(EQUILATERAL, np.array([[0, 1, 2]]), boundary=flags)
        assert list(mesh.boundary) == [True, False, False]

    def test_adjacency_round_trip(self, fan5):
        for e, elem in enumerate(fan5.elements):
            for v in elem:
                assert e in fan5.vertex_to_elements[int(v)]
        for v, elems in enumerate(fan5.vertex_to_elements):
            for e in elems:
                assert v in fan5.elements[e]


class TestEdgeRatio:
    def test_equilateral_is_one(self):
        assert edge_ratio(as_coords3(EQUILATERAL)) == pytest.approx(1.0, abs=1e-12)

    def test_right_isoceles(self):
        tri = as_coords3(np.array([[0.0, 0.0], [1.0, 0.0], [0.0, 1.0]]))
        assert edge_ratio(tri) == pytest.approx(1 / math.sqrt(2), abs=1e-15)

    def test_collinear_is_blind_to_degeneracy(self):
        tri = as_coords3(np.array([[0.0, 0.0], [1.0, 0.0], [2.0, 0.0]]))
        assert edge_ratio(tri) == pytest.approx(0.5, abs=1e-15)

    def test_coincident_is_zero(self):
        tri = np.zeros((3, 3))
        assert edge_ratio(tri) == 0.0

    def test_batch_matches_scalar_bitwise(self, fan5):
        tris = fan5.triangles()
        batch = edge_ratio(tris)
        for i in range(fan5.n_elements):
            assert batch[i] == edge_ratio(tris[i])


class TestMeanRatio:
    def test_equilateral_is_one(self):
        assert mean_ratio(as_coords3(EQUILATERAL)) == pytest.approx(1.0, abs=1e-12)

    def test_right_isoceles(self):
        tri = as_coords3(np.array([[0.0, 0.0], [1.0, 0.0], [0.0, 1.0]]))
        assert mean_ratio(tri) == pytest.approx(SQRT3 / 2, abs=1e-15)

    def test_collinear_is_zero(self):
        tri = as_coords3(np.array([[0.0, 0.0], [1.0, 0.0], [2.0, 0.0]]))
        assert mean_ratio(tri) == 0.0

    def test_inverted_planar_clamps_to_zero(self):
        tri = as_coords3(np.array([[0.0, 0.0], [0.0, 1.0], [1.0, 0.0]]))
        assert mean_ratio(tri) == 0.0

    def test_nonplanar_uses_unsigned_area(self):
        tri = np.array([[0.0, 0.0, 0.0], [1.0, 0.0, 0.1], [0.0, 1.0, 0.3]])
        assert mean_ratio(tri) > 0.0
        assert mean_ratio(tri[[0, 2, 1]]) == mean_ratio(tri)


coordinate = st.floats(-10.0, 10.0, allow_nan=False, allow_infinity=False)


@st.composite
def nondegenerate_triangle(draw):
    pts = np.array([[draw(coordinate), draw(coordinate)] for _ in range(3)])
    u, v = pts[1] - pts[0], pts[2] - pts[0]
    area = 0.5 * abs(u[0] * v[1] - u[1] * v[0])
    assume(area > 1e-3)
    return as_coords3(pts)


@settings(deadline=None, max_examples=150)
@given(tri=nondegenerate_triangle(), angle=st.floats(0, 2 * math.pi), scale=st.floats(0.1, 10.0), shift=st.tuples(coordinate, coordinate))
@pytest.mark.parametrize("metric", [edge_ratio, mean_ratio])
def test_similarity_invariance(metric, tri, angle, scale, shift):
    c, s = math.cos(angle), math.sin(angle)
    rot = np.array([[c, -s, 0.0], [s, c, 0.0], [0.0, 0.0, 1.0]])
    moved = scale * (tri @ rot.T) + np.array([shift[0], shift[1], 0.0])
    assert metric(moved) == pytest.approx(metric(tri), abs=1e-12, rel=1e-12)


@settings(deadline=None, max_examples=150)
@given(tri=nondegenerate_triangle())
def test_quality_range(tri):
    assert 0.0 <= edge_ratio(tri) <= 1.0
    assert 0.0 <= mean_ratio(tri) <= 1.0


def test_unit_quality_iff_equidistant():
    rot = np.array(
        [
            [math.cos(0.7), -math.sin(0.7), 0.0],
            [math.sin(0.7), math.cos(0.7), 0.0],
            [0.0, 0.0, 1.0],
        ]
    )
    tri = 2.3 * (as_coords3(EQUILATERAL) @ rot.T)
    assert edge_ratio(tri) == pytest.approx(1.0, abs=1e-12)
    squashed = tri.copy()
    squashed[2, 1] *= 0.8
    assert edge_ratio(squashed) < 1.0 - 1e-6


class TestMeshQuality:
    def test_known_mix(self):
        # one equilateral (quality 1) plus one collinear (quality 0.5)
        pts = np.array([[0.0, 0.0], [1.0, 0.0], [0.5, SQRT3 / 2], [-1.0, 0.0]])
        mesh = build_mesh(pts, np.array([[0, 1, 2], [3, 0, 1]]))
        mean, minimum = mesh_quality(mesh)
        assert mean == pytest.approx(0.75, abs=1e-12)
        assert minimum == pytest.approx(0.5, abs=1e-12)

    def test_matches_per_element_loop(self, fan5):
        qualities = element_qualities(fan5)
        for i in range(fan5.n_elements):
            assert qualities[i] == element_quality(fan5, i)
        mean, minimum = mesh_quality(fan5)
        assert mean == pytest.approx(qualities.mean())
        assert minimum == pytest.approx(qualities.min())

    def test_mean_ratio_metric_selector(self, fan5):
        for i in range(fan5.n_elements):
            assert mean_ratio_quality(fan5, i) == mean_ratio(fan5.triangle(i))
        mean, _ = mesh_quality(fan5, metric="mean_ratio")
        assert 0.0 < mean < 1.0

    def test_unknown_metric_rejected(self, fan5):
        with pytest.raises(ValueError):
            mesh_quality(fan5, metric="angle")

    def test_coords_override(self, fan5):
        doubled = fan5.coords * 2.0
        assert element_quality(fan5, 0, coords=doubled) == pytest.approx(
            element_quality(fan5, 0), abs=1e-12
        )


class TestAsCoords3:
    def test_rejects_nan(self):
        with pytest.raises(ValueError):
            as_coords3(np.array([[0.0, np.nan], [1.0, 0.0], [0.0, 1.0]]))

    def test_rejects_bad_shape(self):
        with pytest.raises(ValueError):
            as_coords3(np.zeros((3, 4)))

    def test_passes_through_3d(self):
        pts = np.array([[0.0, 0.0, 1.0], [1.0, 0.0, 2.0], [0.0, 1.0, 3.0]])
        out = as_coords3(pts)
        assert np.array_equal(out, pts)
