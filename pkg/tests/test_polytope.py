"""H-representation normalization, vertex enumeration, face lattice."""

from fractions import Fraction

import pytest

from delzant.errors import EmptyPolytope, LowerDimensional, Unbounded
from delzant.polytope import (
    build_face_lattice,
    enumerate_vertices,
    normalize_h_rep,
    relative_interior_point,
)


class TestNormalization:
    def test_interval(self, interval):
        assert interval.facets == (
            ((-1,), Fraction(-1)),
            ((1,), Fraction(0)),
        )

    def test_rational_scaling(self):
        p = normalize_h_rep([((Fraction(2, 3),), Fraction(1, 3)), ((-1,), -1)])
        assert ((1,), Fraction(1, 2)) in p.facets
        assert ((-1,), Fraction(-1)) in p.facets

    def test_redundant_inequality_dropped(self):
        p = normalize_h_rep(
            [((1, 0), 0), ((0, 1), 0), ((-1, 0), -1), ((0, -1), -1), ((1, 1), -1)]
        )
        assert p.num_facets == 4
        assert all(u != (1, 1) for u in p.normals)

    def test_duplicate_keeps_tightest(self):
        p = normalize_h_rep([((1,), 0), ((2,), 1), ((-1,), -1)])
        # (2,) >= 1 scales to (1,) >= 1/2, tighter than (1,) >= 0
        assert ((1,), Fraction(1, 2)) in p.facets

    def test_touching_hyperplane_dropped(self):
        # tight only at the corner (0,0): not a facet
        p = normalize_h_rep(
            [((1, 0), 0), ((0, 1), 0), ((-1, 0), -1), ((0, -1), -1), ((1, 1), 0)]
        )
        assert p.num_facets == 4

    def test_idempotent(self, triangle):
        again = normalize_h_rep([(u, off) for u, off in triangle.facets])
        assert again == triangle

    def test_unbounded_rejected(self):
        with pytest.raises(Unbounded):
            normalize_h_rep([((1,), 0)])
        with pytest.raises(Unbounded):
            normalize_h_rep([((1, 0), 0), ((0, 1), 0)])

    def test_empty_rejected(self):
        with pytest.raises(EmptyPolytope):
            normalize_h_rep([((1,), 1), ((-1,), 0)])

    def test_lower_dimensional_rejected(self):
        with pytest.raises(LowerDimensional):
            normalize_h_rep(
                [((1, 0), 0), ((-1, 0), 0), ((0, 1), 0), ((0, -1), -1)]
            )

    def test_vacuous_inequality_ignored(self):
        p = normalize_h_rep([((1,), 0), ((-1,), -1), ((0,), -5)])
        assert p.num_facets == 2

    def test_zero_normal_with_positive_offset_empty(self):
        with pytest.raises(EmptyPolytope):
            normalize_h_rep([((1,), 0), ((-1,), -1), ((0,), 1)])


class TestVertices:
    def test_interval(self, interval):
        assert enumerate_vertices(interval) == ((Fraction(0),), (Fraction(1),))

    def test_square(self, square):
        assert len(square.vertices) == 4

    def test_octahedron_six_vertices(self, octahedron):
        verts = octahedron.vertices
        assert len(verts) == 6
        assert all(sorted(abs(c) for c in v) == [0, 0, 1] for v in verts)

    def test_sorted_and_dedupe(self, octahedron):
        verts = octahedron.vertices
        assert verts == tuple(sorted(set(verts)))


class TestFaceLattice:
    def test_interval_counts(self, interval):
        fl = build_face_lattice(interval)
        assert fl.f_vector() == (2, 1)
        assert fl.full_face.index_set == ()

    def test_square_counts(self, square):
        fl = build_face_lattice(square)
        assert fl.f_vector() == (4, 4, 1)
        fl.validate()

    def test_octahedron_counts(self, octahedron_lattice):
        fl = octahedron_lattice
        assert fl.f_vector() == (6, 12, 8, 1)
        # non-simple: every vertex sits on four facets
        assert all(len(f.index_set) == 4 for f in fl.vertex_faces)
        # Euler count for the boundary 2-sphere
        v, e, f, _ = fl.f_vector()
        assert v - e + f == 2

    def test_deep_validation(self, octahedron_lattice):
        octahedron_lattice.validate()

    def test_triangle_validation(self, triangle):
        build_face_lattice(triangle).validate()

    def test_dimension_formula(self, simplex):
        fl = build_face_lattice(simplex)
        for face in fl.faces:
            assert face.dim == 2 - len(face.index_set) or face.index_set == ()

    def test_interior_points(self, simplex):
        fl = build_face_lattice(simplex)
        full = fl.full_face
        mean = relative_interior_point(full)
        assert mean == (Fraction(1, 3), Fraction(1, 3))
        for face in fl.vertex_faces:
            assert relative_interior_point(face) == face.vertices[0]

    def test_incidence_monotone(self, triangle):
        fl = build_face_lattice(triangle)
        for e in fl.faces:
            for f in fl.faces:
                nested = set(e.index_set) >= set(f.index_set)
                assert nested == (set(e.vertices) <= set(f.vertices))
