"""Exact cone computations: extreme rays and dual descriptions.

A cone is {x in R^n : <x, h> >= 0 for every listed halfspace normal h}.
The generator description keeps the lineality space separate from the
pointed part; pointed ray representatives are chosen inside the
orthogonal complement of the lineality space and made primitive, which
makes the output canonical.  Everything is exact and sized for n <= ~4
with a couple dozen halfspaces.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations

from .lattice import (
    identity,
    kernel_basis,
    mat_vec,
    primitive_vector,
    rat_rank,
    transpose,
    vec_dot,
    vec_neg,
    IntMat,
    IntVec,
)


@dataclass(frozen=True)
class GeneratorDescription:
    """V-description of a cone: lineality basis rows plus pointed rays."""

    ambient_dim: int
    lineality: IntMat
    rays: tuple[IntVec, ...]

    def generators(self) -> tuple[IntVec, ...]:
        """Full generator list: +/- each lineality vector, then the rays."""
        gens = [row for row in self.lineality]
        gens += [vec_neg(row) for row in self.lineality]
        gens += list(self.rays)
        return tuple(sorted(gens))


def dedupe_primitive(vectors) -> list[IntVec]:
    seen = []
    for v in vectors:
        if not any(v):
            continue
        p = primitive_vector(tuple(v))
        if p not in seen:
            seen.append(p)
    return seen


def pointed_extreme_rays(halfspaces: list[IntVec], k: int) -> tuple[IntVec, ...]:
    """Extreme rays of a pointed cone {y in R^k : <y, h> >= 0}.

    Brute force over (k-1)-subsets of the constraints: every extreme ray
    is the kernel line of k-1 independent tight constraints, feasibility
    picks the sign.
    """
    if k == 0:
        return ()
    found = set()
    for sub in combinations(range(len(halfspaces)), k - 1):
        rows = tuple(halfspaces[i] for i in sub)
        if rows and rat_rank(rows) != k - 1:
            continue
        line = kernel_basis(rows, ncols=k)
        if len(line) != 1:
            continue
        w = line[0]
        for cand in (w, vec_neg(w)):
            if all(vec_dot(cand, h) >= 0 for h in halfspaces):
                found.add(primitive_vector(cand))
    return tuple(sorted(found))


def rays_from_halfspaces(halfspaces, n: int) -> GeneratorDescription:
    """Generator description of {x : <x, h> >= 0 for all h}."""
    hs = dedupe_primitive(halfspaces)
    lin = kernel_basis(tuple(hs), ncols=n) if hs else identity(n)
    d = len(lin)
    if d == n:
        return GeneratorDescription(n, lin, ())
    comp = kernel_basis(lin, ncols=n) if lin else identity(n)
    k = n - d
    projected = dedupe_primitive(mat_vec(comp, h) for h in hs)
    rays_q = pointed_extreme_rays(projected, k)
    comp_t = transpose(comp)
    rays = tuple(sorted(primitive_vector(mat_vec(comp_t, y)) for y in rays_q))
    return GeneratorDescription(n, lin, rays)


def halfspaces_from_generators(generators, n: int) -> tuple[IntVec, ...]:
    """H-description of the cone spanned by the generators.

    The halfspace normals are exactly the generators of the dual cone,
    computed by the double description above.
    """
    gens = dedupe_primitive(generators)
    return rays_from_halfspaces(tuple(gens), n).generators()


def cone_contains(halfspaces, x) -> bool:
    """Exact membership of a rational point in an H-described cone."""
    return all(vec_dot(x, h) >= 0 for h in halfspaces)
