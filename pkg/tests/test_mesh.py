import math

import numpy as np
import pytest

from thinfem import geometry, mesh
from thinfem.errors import EmptyMesh, InvalidParam, ParseError


class TestSquareSix:
    def test_counts(self):
        m = mesh.generate_square_six(10, 0.1)
        assert m.n_vertices == 11 * 11 + 2 * 100 == 321
        assert m.n_elements == 600
        for K in (1, 3, 5):
            m = mesh.generate_square_six(K, 0.01)
            assert m.n_vertices == (K + 1) ** 2 + 2 * K * K
            assert m.n_elements == 6 * K * K

    def test_k1_flat_element_angle(self):
        m = mesh.generate_square_six(1, 0.25)
        assert m.n_elements == 6
        ang = geometry.triangle_corner_angles(m.element_points())
        # the bottom triangle has apex height alpha*k over a base of length k
        assert ang.max() == pytest.approx(math.pi - 2 * math.atan(0.5), abs=1e-13)

    def test_mesh_h_formula(self):
        # h = sqrt(0.25 + (1-alpha)^2) * k for alpha below (2-sqrt(3))/2
        m = mesh.generate_square_six(10, 0.1)
        assert mesh.mesh_h(m) == pytest.approx(math.sqrt(1.06) / 10, rel=1e-13)
        m = mesh.generate_square_six(4, 0.01)
        assert mesh.mesh_h(m) == pytest.approx(math.sqrt(0.25 + 0.99**2) / 4, rel=1e-13)

    def test_total_area(self):
        for K, alpha in [(1, 0.3), (4, 0.01), (7, 0.0001)]:
            m = mesh.generate_square_six(K, alpha)
            areas = geometry.triangle_signed_areas(m.element_points())
            assert np.all(areas > 0)
            assert float(np.abs(areas).sum()) == pytest.approx(1.0, abs=1e-12)

    def test_boundary_is_exactly_the_unit_square_edge(self):
        for K, alpha in [(3, 0.2), (5, 0.001)]:
            m = mesh.generate_square_six(K, alpha)
            on_edge = (
                (m.points[:, 0] == 0.0)
                | (m.points[:, 0] == 1.0)
                | (m.points[:, 1] == 0.0)
                | (m.points[:, 1] == 1.0)
            )
            assert set(m.boundary_vertices.tolist()) == set(
                np.flatnonzero(on_edge).tolist()
            )

    def test_param_validation(self):
        with pytest.raises(InvalidParam):
            mesh.generate_square_six(10, 0.5)
        with pytest.raises(InvalidParam):
            mesh.generate_square_six(10, 0.0)
        with pytest.raises(InvalidParam):
            mesh.generate_square_six(0, 0.1)


class TestUniformRight:
    def test_counts_and_angles(self):
        m = mesh.generate_uniform_right(4)
        assert m.n_vertices == 25
        assert m.n_elements == 32
        ang = geometry.triangle_corner_angles(m.element_points())
        assert np.allclose(ang.min(axis=1), math.pi / 4, atol=1e-13)
        assert np.allclose(ang.max(axis=1), math.pi / 2, atol=1e-13)

    def test_total_area_and_h(self):
        m = mesh.generate_uniform_right(10)
        areas = geometry.triangle_signed_areas(m.element_points())
        assert float(areas.sum()) == pytest.approx(1.0, abs=1e-12)
        assert mesh.mesh_h(m) == pytest.approx(math.sqrt(2) / 10, rel=1e-14)


class TestRefinedDiag:
    def test_counts(self):
        m = mesh.generate_refined_diag(1, 0.05)
        assert m.n_vertices == 6
        assert m.n_elements == 6
        m = mesh.generate_refined_diag(3, 0.05)
        assert m.n_vertices == 16 + 18
        assert m.n_elements == 54

    def test_thin_pair_per_square(self):
        m = mesh.generate_refined_diag(2, 0.05)
        ang = geometry.triangle_corner_angles(m.element_points()).max(axis=1)
        per_square = ang.reshape(4, 6)
        assert np.all((per_square > math.pi - 0.3).sum(axis=1) == 2)

    def test_children_inside_parents(self):
        for K in (1, 2, 4):
            child = mesh.generate_refined_diag(K, 0.05)
            parent = mesh.generate_uniform_right(K)
            ptris = parent.element_points()
            for tri in child.element_points():
                inside_one = False
                for ptri in ptris:
                    lam = geometry.barycentric_coordinates(ptri, tri)
                    if np.all(lam >= -1e-12):
                        inside_one = True
                        break
                assert inside_one

    def test_param_validation(self):
        with pytest.raises(InvalidParam):
            mesh.generate_refined_diag(2, 0.5)
        with pytest.raises(InvalidParam):
            mesh.generate_refined_diag(2, 0.0)


class TestQualityParams:
    def test_ranges(self):
        mesh.MeshQualityParams(theta=0.3, psi=math.pi / 3)
        with pytest.raises(InvalidParam):
            mesh.MeshQualityParams(theta=0.0, psi=0.3)
        with pytest.raises(InvalidParam):
            mesh.MeshQualityParams(theta=0.3, psi=math.pi / 3 + 1e-9)


class TestMeshH:
    def test_single_triangle(self):
        m = mesh.ConformalMesh([(0, 0), (1, 0), (0, 1)], [(0, 1, 2)], [0, 1, 2])
        assert mesh.mesh_h(m) == pytest.approx(math.sqrt(2), rel=1e-15)

    def test_empty_raises(self):
        m = mesh.ConformalMesh(
            [(0, 0), (1, 0), (0, 1)], np.empty((0, 3), dtype=np.int64), []
        )
        with pytest.raises(EmptyMesh):
            mesh.mesh_h(m)


class TestConformity:
    def test_generators_conformal(self):
        for K in range(1, 9):
            for build in (
                lambda k: mesh.generate_square_six(k, 0.1),
                lambda k: mesh.generate_square_six(k, 0.0001),
                lambda k: mesh.generate_uniform_right(k),
                lambda k: mesh.generate_refined_diag(k, 0.05),
            ):
                m = build(K)
                rep = mesh.check_conformity(m, declared_measure=1.0)
                assert rep.conformal, (K, rep.hanging[:3])
                assert rep.measure_ok
                assert rep.total_measure == pytest.approx(1.0, abs=1e-12)

    def test_single_triangle_clean(self):
        m = mesh.ConformalMesh([(0, 0), (1, 0), (0, 1)], [(0, 1, 2)], [0, 1, 2])
        rep = mesh.check_conformity(m)
        assert rep.conformal

    def test_half_shared_edge_is_hanging(self):
        pts = [(0, 0), (1, 0), (0, 1), (0.5, 0), (1.5, 0), (1, -1)]
        m = mesh.ConformalMesh(pts, [(0, 1, 2), (3, 5, 4)], [])
        rep = mesh.check_conformity(m)
        assert len(rep.hanging) == 1
        assert rep.hanging[0][2] == "partial-edge"

    def test_vertex_on_edge_interior_is_hanging(self):
        # apex of the lower triangle touches the upper one's edge midpoint
        pts = [(0, 0), (1, 0), (0, 1), (0.5, 0), (0, -1), (1, -1)]
        m = mesh.ConformalMesh(pts, [(0, 1, 2), (3, 4, 5)], [])
        rep = mesh.check_conformity(m)
        assert len(rep.hanging) == 1
        assert rep.hanging[0][2] == "point-contact"

    def test_overlap_detected(self):
        pts = [(0, 0), (1, 0), (0, 1), (0.2, 0.2), (1.2, 0.2), (0.2, 1.2)]
        m = mesh.ConformalMesh(pts, [(0, 1, 2), (3, 4, 5)], [])
        rep = mesh.check_conformity(m)
        assert any(kind == "area-overlap" for (_, _, kind, _) in rep.hanging)

    def test_duplicate_and_inverted(self):
        pts = [(0, 0), (1, 0), (0, 1)]
        m = mesh.ConformalMesh(pts, [(0, 1, 2), (0, 2, 1)], [])
        rep = mesh.check_conformity(m)
        assert rep.inverted == [(1, "clockwise")]
        m2 = mesh.ConformalMesh(pts, [(0, 1, 2), (1, 2, 0)], [])
        rep2 = mesh.check_conformity(m2)
        assert rep2.duplicates == [(0, 1)]

    def test_shared_full_edge_clean(self):
        pts = [(0, 0), (1, 0), (0, 1), (1, 1)]
        m = mesh.ConformalMesh(pts, [(0, 1, 2), (1, 3, 2)], [])
        rep = mesh.check_conformity(m)
        assert rep.conformal


class TestMeshValidation:
    def test_out_of_range_index(self):
        with pytest.raises(ValueError):
            mesh.ConformalMesh([(0, 0), (1, 0), (0, 1)], [(0, 1, 7)], [])

    def test_repeated_vertex_in_element(self):
        with pytest.raises(ValueError):
            mesh.ConformalMesh([(0, 0), (1, 0), (0, 1)], [(0, 1, 1)], [])

    def test_adjacency(self):
        m = mesh.generate_uniform_right(2)
        center = 4  # vertex (0.5, 0.5) in the 3x3 grid
        assert np.array_equal(m.points[center], [0.5, 0.5])
        assert len(m.elements_at_vertex(center)) == 6


class TestMeshIO:
    def test_roundtrip_bitwise(self, tmp_path):
        m = mesh.generate_square_six(3, 0.01)
        path = tmp_path / "m.msh"
        mesh.write_mesh(m, path)
        m2 = mesh.read_mesh(path)
        assert np.array_equal(m.points, m2.points)  # bitwise, no tolerance
        assert np.array_equal(m.elements, m2.elements)
        assert np.array_equal(m.boundary_vertices, m2.boundary_vertices)

    def test_out_of_range_index_names_line(self, tmp_path):
        path = tmp_path / "bad.msh"
        path.write_text(
            "simplex-mesh 2\nvertices 3\n0.0 0.0\n1.0 0.0\n0.0 1.0\n"
            "elements 1\n0 1 9\nboundary 0\n"
        )
        with pytest.raises(ParseError) as exc:
            mesh.read_mesh(path)
        assert exc.value.line == 7
        assert "out of range" in str(exc.value)

    def test_empty_elements_raises_empty_mesh(self, tmp_path):
        path = tmp_path / "empty.msh"
        path.write_text(
            "simplex-mesh 2\nvertices 3\n0.0 0.0\n1.0 0.0\n0.0 1.0\n"
            "elements 0\nboundary 0\n"
        )
        with pytest.raises(EmptyMesh):
            mesh.read_mesh(path)

    def test_bad_header(self, tmp_path):
        path = tmp_path / "h.msh"
        path.write_text("triangle-soup 2\n")
        with pytest.raises(ParseError):
            mesh.read_mesh(path)

    def test_bad_coordinate(self, tmp_path):
        path = tmp_path / "c.msh"
        path.write_text("simplex-mesh 2\nvertices 1\n0.0 zzz\nelements 1\n0 0 0\nboundary 0\n")
        with pytest.raises(ParseError) as exc:
            mesh.read_mesh(path)
        assert exc.value.line == 3

    def test_3d_roundtrip(self, tmp_path):
        pts = [(0, 0, 0), (1, 0, 0), (0, 1, 0), (0, 0, 1)]
        m = mesh.ConformalMesh(pts, [(0, 1, 2, 3)], [0, 1, 2, 3])
        path = tmp_path / "tet.msh"
        mesh.write_mesh(m, path)
        m2 = mesh.read_mesh(path)
        assert m2.dim == 3
        assert np.array_equal(m.points, m2.points)
