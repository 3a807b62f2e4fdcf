"""From a rational polytope to its torus-reduction data.

The facet normals define a lattice map from Z^p onto a full-rank
sublattice of Z^n; its kernel is the relation lattice among the
normals, and the finite quotient of Z^n by the image measures how far
the normals are from generating the standard lattice.  On top of that
sit the moment maps on C^p, exact squared radii over polytope points,
seeded zero-level sampling, and per-face stabilizer data.

All lattice quantities are exact; complex points and moment values use
doubles, with radii squared kept as exact rationals alongside.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property

import numpy as np

from .errors import (
    InfiniteIndex,
    NotAnOverlattice,
    OutsidePolytope,
    ResidualTooLarge,
)
from .lattice import (
    cokernel_invariants,
    hermite_normal_form,
    kernel_basis,
    lattice_coordinates,
    rat_rank,
    rat_solve,
    saturate_sublattice,
    smith_normal_form,
    transpose,
    IntMat,
    IntVec,
    RatVec,
)
from .polytope import Face, HPolytope


@dataclass(frozen=True)
class DelzantData:
    """Lattice exact sequence and moment data attached to a polytope.

    normal_matrix has the facet normals as columns (n x p); the
    relation basis rows span the kernel of that map on Z^p; the image
    basis rows span the sublattice of Z^n generated by the normals;
    torsion lists the invariant factors > 1 of Z^n modulo that image.
    """

    polytope: HPolytope
    normal_matrix: IntMat
    relation_basis: IntMat
    image_basis: IntMat
    torsion: tuple[int, ...]

    @property
    def num_facets(self) -> int:
        return self.polytope.num_facets

    @property
    def dim(self) -> int:
        return self.polytope.dim

    @property
    def codim(self) -> int:
        return self.num_facets - self.dim

    @property
    def offsets(self) -> tuple[Fraction, ...]:
        return self.polytope.offsets

    @cached_property
    def offsets_float(self) -> np.ndarray:
        return np.array([float(o) for o in self.offsets])

    @cached_property
    def normal_matrix_float(self) -> np.ndarray:
        return np.array(self.normal_matrix, dtype=float)

    @cached_property
    def relation_basis_float(self) -> np.ndarray:
        return np.array(self.relation_basis, dtype=float).reshape(self.codim, self.num_facets)

    def image_coordinates(self, v) -> IntVec:
        """Integer coordinates of a vector of the image lattice."""
        c = lattice_coordinates(self.image_basis, v)
        if c is None:
            raise ValueError(f"{v} is not in the image lattice")
        return c


def build_delzant_data(p: HPolytope) -> DelzantData:
    normal_matrix = transpose(p.normals)  # n x p, columns are the facet normals
    relations = kernel_basis(normal_matrix, ncols=p.num_facets)
    image = hermite_normal_form(p.normals)
    torsion, free = cokernel_invariants(normal_matrix)
    assert free == 0 and len(image) == p.dim  # full-dimensional polytope
    return DelzantData(p, normal_matrix, relations, image, torsion)


# ---------------------------------------------------------------------------
# moment maps on C^p


def moment_ambient(d: DelzantData, z) -> np.ndarray:
    """Per-coordinate moment values |z_i|^2 / 2 + offset_i."""
    z = np.asarray(z, dtype=complex)
    return 0.5 * np.abs(z) ** 2 + d.offsets_float


def moment_reduction(d: DelzantData, z) -> np.ndarray:
    """Pairing of the ambient moment values with the relation basis.

    Vanishes exactly when the ambient values are orthogonal to every
    relation, i.e. when z sits on the zero level of the reduction.
    """
    return d.relation_basis_float @ moment_ambient(d, z)


def moment_torus(d: DelzantData, z, tol: float = 1e-9) -> tuple[np.ndarray, float]:
    """The point x with <x, u_i> = ambient moment value for every facet.

    Solved by normal equations on the transposed normal matrix (full
    column rank since the polytope is full-dimensional).  Returns
    (x, residual) and raises ResidualTooLarge when the residual exceeds
    tol, which happens exactly when z is too far off the zero level.
    """
    g = moment_ambient(d, z)
    pi = d.normal_matrix_float
    x = np.linalg.solve(pi @ pi.T, pi @ g)
    residual = float(np.max(np.abs(pi.T @ x - g)))
    if residual > tol:
        raise ResidualTooLarge(f"moment residual {residual:.3e} exceeds {tol:.3e}")
    return x, residual


# ---------------------------------------------------------------------------
# zero level over polytope points


def fiber_radii(d: DelzantData, x) -> tuple[RatVec, tuple[int, ...]]:
    """Exact squared radii 2(<x, u_i> - offset_i) and the active index set."""
    radii = []
    for i in range(d.num_facets):
        s = d.polytope.slack(x, i)
        if s < 0:
            raise OutsidePolytope(i)
        radii.append(2 * s)
    active = tuple(i for i, r in enumerate(radii) if r == 0)
    return tuple(radii), active


@dataclass(frozen=True)
class ZeroLevelPoint:
    """A sampled point of the zero level, with its exact radii."""

    point: np.ndarray        # complex p-vector
    source: RatVec           # the polytope point it was built over
    squared_radii: RatVec    # exact
    active: tuple[int, ...]  # indices with radius zero


def sample_zero_level(d: DelzantData, x, rng=None, phases=None) -> ZeroLevelPoint:
    """z_i = r_i * exp(2 pi i tau_i) over x, with seeded uniform phases.

    ``rng`` may be an int seed or a numpy Generator.  Explicit phases
    (in turns) override the generator.
    """
    radii, active = fiber_radii(d, x)
    if phases is None:
        if not isinstance(rng, np.random.Generator):
            rng = np.random.default_rng(rng)
        phases = rng.random(d.num_facets)
    tau = np.asarray(phases, dtype=float)
    moduli = np.sqrt([float(r) for r in radii])
    z = moduli * np.exp(2j * np.pi * tau)
    z[list(active)] = 0.0
    return ZeroLevelPoint(z, tuple(Fraction(c) for c in x), radii, active)


def properness_bound(d: DelzantData) -> Fraction:
    """Exact upper bound for every squared radius over the zero level."""
    best = Fraction(0)
    for v in d.polytope.vertices:
        for i in range(d.num_facets):
            best = max(best, 2 * d.polytope.slack(v, i))
    return best


# ---------------------------------------------------------------------------
# stabilizers per face


@dataclass(frozen=True)
class FaceStabilizer:
    """Stabilizer subtorus data of a face, in image-lattice coordinates."""

    index_set: tuple[int, ...]
    active_normals: IntMat   # the facet normals tight on the face
    rank: int                # dimension of the stabilizer subtorus
    orbifold_index: int      # index of the normal span in its saturation
    smooth: bool             # span is saturated (vertex case: a lattice basis)


def stabilizer_data(d: DelzantData, face: Face) -> FaceStabilizer:
    normals = tuple(d.polytope.facets[i][0] for i in face.index_set)
    coords = tuple(d.image_coordinates(u) for u in normals)
    index = _span_saturation_index(coords)
    rank = rat_rank(coords) if coords else 0
    return FaceStabilizer(face.index_set, normals, rank, index, index == 1)


def _span_saturation_index(coord_rows) -> int:
    """Index of the Z-span of the rows inside its saturation."""
    basis = hermite_normal_form(coord_rows)
    if not basis:
        return 1
    _, index = saturate_sublattice(basis)
    return index


# ---------------------------------------------------------------------------
# retargeting to an overlattice


@dataclass(frozen=True)
class LatticeRetarget:
    """The same polytope and fan read against a finite overlattice."""

    polytope: HPolytope
    lattice: tuple[RatVec, ...]          # basis rows of the new lattice
    quotient_torsion: tuple[int, ...]    # invariant factors of new/old
    face_indices: tuple[tuple[tuple[int, ...], int, int, bool], ...]
    # rows: (face index set, orbifold index, stabilizer rank, smooth)


def retarget_lattice(d: DelzantData, new_basis, face_lattice=None) -> LatticeRetarget:
    """Re-read the construction with a finite overlattice of the image.

    The polytope and the fan are untouched; only saturations and
    quotients are recomputed inside the new lattice.
    """
    new_rows = tuple(tuple(Fraction(x) for x in row) for row in new_basis)
    n = d.dim
    if len(new_rows) != n or rat_rank(new_rows) != n:
        raise InfiniteIndex("new lattice basis must have full rank")
    new_t = transpose(new_rows)

    def coords_in_new(vec) -> IntVec:
        c = rat_solve(new_t, vec)
        if c is None or any(f.denominator != 1 for f in c):
            raise NotAnOverlattice(f"{vec} is not in the proposed lattice")
        return tuple(int(f) for f in c)

    rel = tuple(coords_in_new(row) for row in d.image_basis)
    torsion = tuple(f for f in smith_normal_form(rel).invariant_factors if f > 1)

    if face_lattice is None:
        from .polytope import build_face_lattice

        face_lattice = build_face_lattice(d.polytope)
    rows = []
    for face in face_lattice.faces:
        coords = tuple(coords_in_new(d.polytope.facets[i][0]) for i in face.index_set)
        index = _span_saturation_index(coords)
        rank = rat_rank(coords) if coords else 0
        rows.append((face.index_set, index, rank, index == 1))
    return LatticeRetarget(d.polytope, new_rows, torsion, tuple(rows))
