"""Exact H-representation polytopes, vertex enumeration, face lattice.

A polytope is a list of facet inequalities <x, u> >= offset with a
primitive integer inward normal u and a rational offset.  Construction
goes through :func:`normalize_h_rep`, which scales, deduplicates,
removes redundant inequalities, and rejects unbounded, empty, or
lower-dimensional input, so a constructed ``HPolytope`` always
satisfies its invariants.

Faces are keyed by their maximal active index sets, computed as
intersections of vertex active sets.  Vertex enumeration solves all
n-subsets of tight facets exactly; that is fine at the intended scale
(p <= ~20 facets, n <= ~4).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from itertools import combinations

from . import cones
from .errors import DegenerateInput, EmptyPolytope, LowerDimensional, Unbounded
from .lattice import (
    primitive_from_rational,
    rat_rank,
    rat_solve,
    IntVec,
    RatVec,
    vec_dot,
)

Facet = tuple[IntVec, Fraction]


@dataclass(frozen=True)
class HPolytope:
    """Bounded full-dimensional polytope {x : <x, u_i> >= offset_i}."""

    dim: int
    facets: tuple[Facet, ...]

    @property
    def num_facets(self) -> int:
        return len(self.facets)

    @property
    def normals(self) -> tuple[IntVec, ...]:
        return tuple(u for u, _ in self.facets)

    @property
    def offsets(self) -> tuple[Fraction, ...]:
        return tuple(off for _, off in self.facets)

    def slack(self, x, i: int) -> Fraction:
        u, off = self.facets[i]
        return Fraction(vec_dot(x, u)) - off

    def contains(self, x) -> bool:
        return all(self.slack(x, i) >= 0 for i in range(self.num_facets))

    def active_set(self, x) -> tuple[int, ...]:
        return tuple(i for i in range(self.num_facets) if self.slack(x, i) == 0)

    @cached_property
    def vertices(self) -> tuple[RatVec, ...]:
        return enumerate_vertices(self)

    @cached_property
    def bounding_box(self) -> tuple[RatVec, RatVec]:
        cols = list(zip(*self.vertices))
        return tuple(min(c) for c in cols), tuple(max(c) for c in cols)


def _as_fraction_vec(v) -> RatVec:
    return tuple(Fraction(x) for x in v)


def normalize_h_rep(raw) -> HPolytope:
    """Build an HPolytope from raw rational inequalities.

    Each inequality is scaled by a positive rational so its normal is a
    primitive integer vector; duplicates keep the tightest offset;
    redundant inequalities (tight set of affine dimension < n-1) are
    dropped; facets are sorted lexicographically by (normal, offset).
    """
    raw = list(raw)
    if not raw:
        raise DegenerateInput("no inequalities given")
    n = len(raw[0][0])
    if n < 1:
        raise DegenerateInput("ambient dimension must be at least 1")

    tightest: dict[IntVec, Fraction] = {}
    for normal, offset in raw:
        normal = _as_fraction_vec(normal)
        offset = Fraction(offset)
        if len(normal) != n:
            raise DegenerateInput("inconsistent ambient dimensions")
        if not any(normal):
            if offset > 0:
                raise EmptyPolytope("inequality 0 >= positive offset")
            continue  # vacuous
        u = primitive_from_rational(normal)
        j = next(i for i, x in enumerate(u) if x)
        scale = Fraction(u[j]) / normal[j]  # positive by construction
        lam = offset * scale
        if u not in tightest or lam > tightest[u]:
            tightest[u] = lam

    if not tightest:
        raise DegenerateInput("no nontrivial inequalities given")
    facets = sorted(tightest.items())

    desc = cones.rays_from_halfspaces([u for u, _ in facets], n)
    if desc.lineality or desc.rays:
        raise Unbounded("recession cone is nontrivial")

    candidate = HPolytope(n, tuple(facets))
    verts = enumerate_vertices(candidate)
    if not verts:
        raise EmptyPolytope("inequality system is infeasible")
    diffs = tuple(tuple(a - b for a, b in zip(v, verts[0])) for v in verts[1:])
    if rat_rank(diffs) < n:
        raise LowerDimensional("solution set is not full-dimensional")

    kept = []
    for i, (u, lam) in enumerate(facets):
        tight = [v for v in verts if candidate.slack(v, i) == 0]
        if not tight:
            continue
        span = tuple(tuple(a - b for a, b in zip(v, tight[0])) for v in tight[1:])
        if rat_rank(span) == n - 1:
            kept.append((u, lam))
    return HPolytope(n, tuple(sorted(kept)))


def enumerate_vertices(p: HPolytope) -> tuple[RatVec, ...]:
    """Exact rational vertices, deduplicated and sorted lexicographically."""
    n = p.dim
    found = set()
    for sub in combinations(range(p.num_facets), n):
        mat = tuple(p.facets[i][0] for i in sub)
        rhs = tuple(p.facets[i][1] for i in sub)
        x = rat_solve(mat, rhs, require_unique=True)
        if x is not None and p.contains(x):
            found.add(x)
    return tuple(sorted(found))


@dataclass(frozen=True)
class Face:
    """A nonempty face, identified by its maximal active index set."""

    index_set: tuple[int, ...]
    dim: int
    vertices: tuple[RatVec, ...]

    @property
    def interior_point(self) -> RatVec:
        return relative_interior_point(self)

    @property
    def is_vertex(self) -> bool:
        return self.dim == 0


def relative_interior_point(face: Face) -> RatVec:
    """Arithmetic mean of the face's vertices; strictly inside the face."""
    k = len(face.vertices)
    return tuple(sum(col) / k for col in zip(*face.vertices))


@dataclass(frozen=True, eq=False)
class FaceLattice:
    """All nonempty faces of a polytope, keyed by active index sets."""

    polytope: HPolytope
    faces: tuple[Face, ...]

    @cached_property
    def by_index_set(self) -> dict[tuple[int, ...], Face]:
        return {f.index_set: f for f in self.faces}

    def face(self, index_set) -> Face:
        return self.by_index_set[tuple(sorted(index_set))]

    def faces_of_dim(self, d: int) -> tuple[Face, ...]:
        return tuple(f for f in self.faces if f.dim == d)

    @property
    def vertex_faces(self) -> tuple[Face, ...]:
        return self.faces_of_dim(0)

    @property
    def full_face(self) -> Face:
        return self.by_index_set[()]

    def f_vector(self) -> tuple[int, ...]:
        return tuple(len(self.faces_of_dim(d)) for d in range(self.polytope.dim + 1))

    def validate(self) -> None:
        """Exact structural checks; raises AssertionError on violation."""
        p = self.polytope
        n = p.dim
        assert len(self.vertex_faces) >= n + 1
        assert sum(1 for f in self.faces if f.dim == n) == 1
        for f in self.faces:
            assert f.dim == n - rat_rank(tuple(p.facets[i][0] for i in f.index_set))
            x = f.interior_point
            for i in range(p.num_facets):
                s = p.slack(x, i)
                assert (s == 0) == (i in f.index_set)
        for e in self.faces:
            for f in self.faces:
                nested = set(e.index_set) >= set(f.index_set)
                assert nested == (set(e.vertices) <= set(f.vertices))
        euler = sum((-1) ** f.dim for f in self.faces if f.dim < n)
        assert euler == 1 + (-1) ** (n - 1)


def build_face_lattice(p: HPolytope) -> FaceLattice:
    """Faces as intersection-closed active sets of the vertices."""
    verts = p.vertices
    active = {v: frozenset(p.active_set(v)) for v in verts}
    closed = set(active.values())
    frontier = set(closed)
    while frontier:
        fresh = set()
        for a in frontier:
            for b in closed:
                c = a & b
                if c not in closed and c not in fresh:
                    fresh.add(c)
        closed |= fresh
        frontier = fresh

    faces = []
    for idx in closed:
        members = tuple(v for v in verts if active[v] >= idx)
        normals = tuple(p.facets[i][0] for i in sorted(idx))
        faces.append(Face(tuple(sorted(idx)), p.dim - rat_rank(normals), members))
    faces.sort(key=lambda f: (f.dim, f.index_set))
    return FaceLattice(p, tuple(faces))
