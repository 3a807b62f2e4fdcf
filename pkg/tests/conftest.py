"""Shared corpus polytopes.

Four standing examples cover the interesting cases: a segment (the
simplest complete fan), the standard 2-simplex (all vertices smooth),
a triangle with one index-2 vertex, and the octahedron (non-simple
vertices, non-simplicial maximal cones, normals generating a proper
sublattice).
"""

import pytest

from delzant.construction import build_delzant_data
from delzant.polytope import build_face_lattice, normalize_h_rep
from delzant.toric import build_fan


def interval_raw():
    return [((1,), 0), ((-1,), -1)]


def simplex_raw():
    return [((1, 0), 0), ((0, 1), 0), ((-1, -1), -1)]


def triangle_raw():
    return [((1, 0), 0), ((0, 1), 0), ((-1, -2), -2)]


def octahedron_raw():
    return [((sx, sy, sz), -1) for sx in (1, -1) for sy in (1, -1) for sz in (1, -1)]


def p2_mod3_raw():
    return [((2, -1), 0), ((-1, 2), 0), ((-1, -1), -1)]


@pytest.fixture(scope="session")
def interval():
    return normalize_h_rep(interval_raw())


@pytest.fixture(scope="session")
def simplex():
    return normalize_h_rep(simplex_raw())


@pytest.fixture(scope="session")
def triangle():
    return normalize_h_rep(triangle_raw())


@pytest.fixture(scope="session")
def octahedron():
    return normalize_h_rep(octahedron_raw())


@pytest.fixture(scope="session")
def square():
    return normalize_h_rep(
        [((1, 0), 0), ((0, 1), 0), ((-1, 0), -1), ((0, -1), -1)]
    )


@pytest.fixture(scope="session")
def p2_mod3():
    return normalize_h_rep(p2_mod3_raw())


@pytest.fixture(scope="session")
def corpus(interval, simplex, triangle, octahedron):
    return {
        "interval": interval,
        "simplex": simplex,
        "triangle": triangle,
        "octahedron": octahedron,
    }


@pytest.fixture(scope="session")
def interval_data(interval):
    return build_delzant_data(interval)


@pytest.fixture(scope="session")
def simplex_data(simplex):
    return build_delzant_data(simplex)


@pytest.fixture(scope="session")
def triangle_data(triangle):
    return build_delzant_data(triangle)


@pytest.fixture(scope="session")
def octahedron_data(octahedron):
    return build_delzant_data(octahedron)


@pytest.fixture(scope="session")
def square_data(square):
    return build_delzant_data(square)


@pytest.fixture(scope="session")
def interval_fan(interval_data):
    return build_fan(interval_data)


@pytest.fixture(scope="session")
def simplex_fan(simplex_data):
    return build_fan(simplex_data)


@pytest.fixture(scope="session")
def triangle_fan(triangle_data):
    return build_fan(triangle_data)


@pytest.fixture(scope="session")
def octahedron_fan(octahedron_data):
    return build_fan(octahedron_data)


@pytest.fixture(scope="session")
def square_fan(square_data):
    return build_fan(square_data)


@pytest.fixture(scope="session")
def octahedron_lattice(octahedron):
    return build_face_lattice(octahedron)
