"""Normal fan, dual cones, chart semigroups, and chart-level algorithms.

Every face of the polytope spans a cone on its active facet normals;
the fan collects those cones.  The affine chart attached to a face is
described by the semigroup of dual-lattice points nonnegative on the
cone: a saturated "perp" sublattice (the invertible part) plus the
Hilbert basis of the pointed remainder, computed by bounded lattice
enumeration.  Chart evaluation sends a coordinate vector z to the
monomials z^(pairing with each facet normal), with 0**0 = 1.

Dual-lattice vectors are stored as integer coordinate rows w.r.t. the
dual basis of the image lattice, so all pairings with facet normals
are plain integer dot products even when the normals do not generate
the standard lattice.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from itertools import product

import numpy as np

from . import cones
from .construction import DelzantData, moment_reduction
from .errors import (
    DimensionTooLarge,
    NegativePowerOfZero,
    NoIntegerCompletion,
    NotIncident,
    NotInCone,
    NotInFiber,
    WrongStratum,
)
from .lattice import (
    identity,
    invert_unimodular,
    kernel_basis,
    lattice_coordinates,
    mat_vec,
    rat_rank,
    smith_normal_form,
    solve_integer_system,
    transpose,
    vec_dot,
    vec_neg,
    vec_sub,
    IntMat,
    IntVec,
)
from .polytope import FaceLattice, build_face_lattice

FaceKey = tuple[int, ...]


# ---------------------------------------------------------------------------
# cones of the fan


@dataclass(frozen=True)
class Cone:
    """A rational cone with both V- and H-descriptions."""

    ambient_dim: int
    rays: tuple[IntVec, ...]
    halfspaces: tuple[IntVec, ...]

    @property
    def dim(self) -> int:
        return rat_rank(self.rays) if self.rays else 0

    def contains(self, x) -> bool:
        return cones.cone_contains(self.halfspaces, x)

    def validate(self) -> None:
        """Cross-check that the two descriptions agree."""
        for r in self.rays:
            assert self.contains(r)
        dim = self.dim
        lineality = self.ambient_dim - rat_rank(self.halfspaces) if self.halfspaces else self.ambient_dim
        for r in self.rays:
            tight = tuple(h for h in self.halfspaces if vec_dot(r, h) == 0)
            # extreme modulo the lineality space
            assert rat_rank(tight) >= self.ambient_dim - 1 - lineality
        if self.rays:
            for h in self.halfspaces:
                tight = tuple(r for r in self.rays if vec_dot(r, h) == 0)
                # tight on a facet, or on the whole cone when h is one of
                # the equation pairs cutting a lower-dimensional cone
                assert rat_rank(tight) >= dim - 1
        mine = cones.halfspaces_from_generators(self.rays, self.ambient_dim)
        theirs = cones.rays_from_halfspaces(self.halfspaces, self.ambient_dim)
        assert set(mine) == set(
            cones.halfspaces_from_generators(theirs.generators(), self.ambient_dim)
        )


def cone_from_generators(generators, n: int) -> Cone:
    gens = []
    for g in generators:
        p = tuple(g)
        if p not in gens:
            gens.append(p)
    rays = tuple(sorted(gens))
    return Cone(n, rays, cones.halfspaces_from_generators(rays, n))


def dual_cone(c: Cone) -> Cone:
    """{x : <x, r> >= 0 for every ray of c}; rays by double description."""
    desc = cones.rays_from_halfspaces(c.rays, c.ambient_dim)
    return Cone(c.ambient_dim, desc.generators(), c.rays)


# ---------------------------------------------------------------------------
# chart monoids


@dataclass(frozen=True, eq=False)
class ChartMonoid:
    """Generators of the dual-cone semigroup attached to a face.

    all_generators = perp basis, its negatives, then the pointed
    Hilbert basis; every lattice point of the dual cone is a
    nonnegative integer combination of that list.
    """

    index_set: FaceKey
    ambient_dim: int
    active_pairings: IntMat      # pairing rows of the active facet normals
    perp_basis: IntMat           # saturated basis of the annihilator part
    pointed_generators: IntMat   # Hilbert basis, lifted to dual coordinates
    pointed_quotient: IntMat     # the same basis in quotient coordinates
    quotient_matrix: IntMat      # kills the perp sublattice
    section_matrix: IntMat       # integer section of the quotient
    pointed_halfspaces: IntMat   # H-description of the quotient cone

    @cached_property
    def all_generators(self) -> IntMat:
        gens = list(self.perp_basis)
        gens += [vec_neg(b) for b in self.perp_basis]
        gens += list(self.pointed_generators)
        return tuple(gens)

    def contains(self, x) -> bool:
        return all(vec_dot(x, a) >= 0 for a in self.active_pairings)

    def in_perp(self, x) -> bool:
        return all(vec_dot(x, a) == 0 for a in self.active_pairings)

    def quotient(self, x) -> IntVec:
        return mat_vec(self.quotient_matrix, x)

    @cached_property
    def _dp_memo(self) -> dict:
        return {}

    def decompose(self, x) -> tuple[int, ...] | None:
        """Nonnegative coefficients over all_generators summing to x, or None."""
        if not self.contains(x):
            return None
        counts = _dp_decompose(
            self.quotient(tuple(x)),
            self.pointed_quotient,
            self.pointed_halfspaces,
            self._dp_memo,
        )
        if counts is None:
            return None
        lifted = [0] * self.ambient_dim
        for idx, c in enumerate(counts):
            for j in range(self.ambient_dim):
                lifted[j] += c * self.pointed_generators[idx][j]
        rest = vec_sub(x, tuple(lifted))
        nperp = len(self.perp_basis)
        if nperp == 0:
            if any(rest):
                return None
            coords = ()
        else:
            coords = lattice_coordinates(self.perp_basis, rest)
            if coords is None:
                return None
        pos = tuple(max(c, 0) for c in coords)
        neg = tuple(max(-c, 0) for c in coords)
        return pos + neg + counts


def _dp_decompose(target, gens, halfspaces, memo) -> tuple[int, ...] | None:
    """Counts per generator whose sum is target, inside a pointed cone."""
    if not any(target):
        return tuple(0 for _ in gens)
    if target in memo:
        return memo[target]
    memo[target] = None  # guards against cycles (cannot occur: weight drops)
    result = None
    for idx, g in enumerate(gens):
        rem = vec_sub(target, g)
        if cones.cone_contains(halfspaces, rem):
            sub = _dp_decompose(rem, gens, halfspaces, memo)
            if sub is not None:
                result = tuple(c + int(i == idx) for i, c in enumerate(sub))
                break
    memo[target] = result
    return result


def _hilbert_basis(rays: tuple[IntVec, ...], halfspaces, k: int) -> tuple[IntVec, ...]:
    """Minimal generators of cone-and-lattice points of a pointed cone.

    Candidates are the lattice points of the cone inside the bounding
    box of the ray zonotope (coefficients in [0,1]); irreducible ones
    survive.
    """
    if not rays:
        return ()
    lo = [sum(min(0, r[j]) for r in rays) for j in range(k)]
    hi = [sum(max(0, r[j]) for r in rays) for j in range(k)]
    candidates = [
        pt
        for pt in product(*(range(l, h + 1) for l, h in zip(lo, hi)))
        if any(pt) and cones.cone_contains(halfspaces, pt)
    ]
    basis = []
    for x in candidates:
        reducible = any(
            y != x and cones.cone_contains(halfspaces, vec_sub(x, y))
            for y in candidates
        )
        if not reducible:
            basis.append(x)
    return tuple(sorted(basis))


def _monoid_from_pairings(index_set: FaceKey, act: IntMat, n: int) -> ChartMonoid:
    if n > 4:
        raise DimensionTooLarge(f"semigroup enumeration capped at dim 4, got {n}")
    perp = kernel_basis(act, ncols=n) if act else identity(n)
    d = len(perp)
    if d:
        snf = smith_normal_form(perp)
        assert all(f == 1 for f in snf.invariant_factors)  # saturated
        v = snf.right
        vinv = invert_unimodular(v)
        quotient = tuple(tuple(v[j][d + r] for j in range(n)) for r in range(n - d))
        section = tuple(vinv[d + r] for r in range(n - d))
    else:
        quotient = identity(n)
        section = identity(n)
    k = n - d
    projected = []
    for a in act:
        h = mat_vec(section, a)
        if any(h):
            h = tuple(h)
            if h not in projected:
                projected.append(h)
    rays_q = cones.pointed_extreme_rays(projected, k)
    hb = _hilbert_basis(rays_q, projected, k)
    section_t = transpose(section)
    pairs = sorted((mat_vec(section_t, y), y) for y in hb)
    lifted = tuple(lift for lift, _ in pairs)
    in_quotient = tuple(y for _, y in pairs)
    return ChartMonoid(
        index_set=index_set,
        ambient_dim=n,
        active_pairings=act,
        perp_basis=perp,
        pointed_generators=lifted,
        pointed_quotient=in_quotient,
        quotient_matrix=quotient,
        section_matrix=section,
        pointed_halfspaces=tuple(projected),
    )


def dual_monoid(generators, n: int) -> ChartMonoid:
    """Monoid of the dual of cone(generators) w.r.t. the standard lattice."""
    act = tuple(tuple(g) for g in generators)
    return _monoid_from_pairings((), act, n)


# ---------------------------------------------------------------------------
# the fan


@dataclass(frozen=True, eq=False)
class Fan:
    """Cones on active facet normals, one per face of the polytope."""

    data: DelzantData
    face_lattice: FaceLattice
    cones: tuple[tuple[FaceKey, Cone], ...]

    @cached_property
    def cone_map(self) -> dict[FaceKey, Cone]:
        return dict(self.cones)

    def cone(self, index_set) -> Cone:
        return self.cone_map[tuple(sorted(index_set))]

    @cached_property
    def facet_pairings(self) -> IntMat:
        """Image-lattice coordinate rows of all facet normals."""
        return tuple(self.data.image_coordinates(u) for u in self.data.polytope.normals)

    @cached_property
    def _monoids(self) -> dict:
        return {}

    def monoid(self, index_set) -> ChartMonoid:
        key = tuple(sorted(index_set))
        if key not in self._monoids:
            act = tuple(self.facet_pairings[i] for i in key)
            self._monoids[key] = _monoid_from_pairings(key, act, self.data.dim)
        return self._monoids[key]

    @cached_property
    def _exponents(self) -> dict:
        return {}

    def generator_exponents(self, index_set) -> IntMat:
        """Per monoid generator, its pairing with every facet normal."""
        key = tuple(sorted(index_set))
        if key not in self._exponents:
            m = self.monoid(key)
            self._exponents[key] = tuple(
                tuple(vec_dot(g, a) for a in self.facet_pairings)
                for g in m.all_generators
            )
        return self._exponents[key]

    def validate(self) -> None:
        """Exact fan axioms: dimensions, inclusion reversal, intersections."""
        n = self.data.dim
        for face in self.face_lattice.faces:
            cone = self.cone(face.index_set)
            assert cone.dim == n - face.dim
            cone.validate()
        for e in self.face_lattice.faces:
            ce = self.cone(e.index_set)
            for f in self.face_lattice.faces:
                cf = self.cone(f.index_set)
                nested = set(e.index_set) >= set(f.index_set)
                assert nested == all(ce.contains(r) for r in cf.rays)
                common = tuple(sorted(set(e.index_set) & set(f.index_set)))
                cg = self.cone(common)
                meet = cones.rays_from_halfspaces(
                    ce.halfspaces + cf.halfspaces, n
                ).generators()
                assert all(cg.contains(r) for r in meet)
                assert all(ce.contains(r) and cf.contains(r) for r in cg.rays)


def build_fan(d: DelzantData, face_lattice: FaceLattice | None = None) -> Fan:
    if face_lattice is None:
        face_lattice = build_face_lattice(d.polytope)
    cone_list = []
    for face in face_lattice.faces:
        gens = tuple(d.polytope.facets[i][0] for i in face.index_set)
        cone_list.append((face.index_set, cone_from_generators(gens, d.dim)))
    return Fan(d, face_lattice, tuple(cone_list))


# ---------------------------------------------------------------------------
# chart evaluation


@dataclass(frozen=True)
class ChartPoint:
    """Values of a chart's generators at a stratum point."""

    index_set: FaceKey
    values: tuple[complex, ...]


def evaluate_chart(fan: Fan, index_set, z, strict: bool = True) -> ChartPoint:
    """Monomial values z^(pairings) for every monoid generator; 0**0 = 1.

    With strict=True the zero pattern of z must equal the face's index
    set; strict=False allows evaluating an enclosing chart at a point
    of a deeper stratum (zeros contained in the chart's index set).
    """
    key = tuple(sorted(index_set))
    z = np.asarray(z, dtype=complex)
    pattern = tuple(int(i) for i in range(len(z)) if z[i] == 0)
    if strict and pattern != key:
        raise WrongStratum(f"zero pattern {pattern} does not match face {key}")
    values = []
    for exps in fan.generator_exponents(key):
        val = complex(1.0)
        vanished = False
        for zj, e in zip(z, exps):
            if e == 0:
                continue
            if zj == 0:
                if e < 0:
                    raise NegativePowerOfZero(f"0**{e} in chart evaluation")
                vanished = True
            elif not vanished:
                val *= complex(zj) ** int(e)
        values.append(0j if vanished else val)
    return ChartPoint(key, tuple(values))


def project_to_perp(fan: Fan, index_set, x) -> IntVec:
    """Semigroup projection onto the invertible part: x or 0."""
    m = fan.monoid(index_set)
    x = tuple(x)
    if not m.contains(x):
        raise NotInCone(f"{x} is outside the dual cone of face {m.index_set}")
    return x if m.in_perp(x) else tuple(0 for _ in x)


# ---------------------------------------------------------------------------
# chart inclusions


@dataclass(frozen=True)
class InclusionTable:
    """Expressions of one chart's generators over an enclosing chart's.

    Rows align with the generators of the sub chart (larger face);
    columns with all_generators of the super chart.  Negative entries
    appear only at the invertible positions: generators of the super
    chart that annihilate the larger face's cone, hence are nonzero on
    the overlap.
    """

    super_face: FaceKey
    sub_face: FaceKey
    coefficients: IntMat
    invertible: tuple[int, ...]


def chart_inclusion(fan: Fan, super_face, sub_face) -> InclusionTable:
    e_key = tuple(sorted(super_face))
    f_key = tuple(sorted(sub_face))
    if not set(e_key) >= set(f_key):
        raise NotIncident(f"face {e_key} does not contain face {f_key} in its closure")
    me = fan.monoid(e_key)
    mf = fan.monoid(f_key)
    f_active = mf.active_pairings
    e_gens = me.all_generators
    invertible = tuple(
        t for t, g in enumerate(e_gens)
        if all(vec_dot(g, a) == 0 for a in f_active)
    )
    n = fan.data.dim
    shift = [0] * n
    for t in invertible:
        for j in range(n):
            shift[j] += e_gens[t][j]
    shift = tuple(shift)

    rows = []
    for g in mf.all_generators:
        s, k = tuple(g), 0
        while not me.contains(s):
            if not any(shift) or k > 512:
                raise NoIntegerCompletion("no localizing element for the face pair")
            s = tuple(a + b for a, b in zip(s, shift))
            k += 1
        coeffs = me.decompose(s)
        if coeffs is None:
            raise NoIntegerCompletion("generator escaped the enclosing monoid")
        row = list(coeffs)
        for t in invertible:
            row[t] -= k
        rows.append(tuple(row))
    return InclusionTable(e_key, f_key, tuple(rows), invertible)


def evaluate_through_inclusion(table: InclusionTable, super_values) -> tuple[complex, ...]:
    """Sub-chart generator values computed from super-chart values."""
    out = []
    for row in table.coefficients:
        val = complex(1.0)
        vanished = False
        for c, v in zip(row, super_values):
            if c == 0:
                continue
            if v == 0:
                if c < 0:
                    raise NegativePowerOfZero("inverting a vanishing chart value")
                vanished = True
            elif not vanished:
                val *= complex(v) ** int(c)
        out.append(0j if vanished else val)
    return tuple(out)


# ---------------------------------------------------------------------------
# fiber solving


def fiber_log_solve(fan: Fan, index_set, z, tol: float = 1e-6) -> np.ndarray:
    """A complexified relation vector v with exp(2 pi i v) moving the
    face's basepoint (1 on free coordinates, 0 on the face) onto z.

    Follows the constructive recipe: principal-branch logarithms on the
    free coordinates, an integer completion on the face coordinates
    chosen so the total image lands in the image lattice, then an
    integer shift into the kernel.
    """
    d = fan.data
    p, n = d.num_facets, d.dim
    key = tuple(sorted(index_set))
    z = np.asarray(z, dtype=complex)
    pattern = tuple(int(i) for i in range(p) if z[i] == 0)
    if pattern != key:
        raise WrongStratum(f"zero pattern {pattern} does not match face {key}")

    m = fan.monoid(key)
    chart = evaluate_chart(fan, key, z)
    nperp = len(m.perp_basis)
    drift = max((abs(v - 1) for v in chart.values[: 2 * nperp]), default=0.0)
    if drift > tol:
        raise NotInFiber(f"chart values deviate from 1 by {drift:.3e}")

    free = [j for j in range(p) if j not in key]
    w = np.zeros(p, dtype=complex)
    for j in free:
        w[j] = np.log(z[j]) / (2j * np.pi)

    pairings = np.array(fan.facet_pairings, dtype=float)  # p x n rows
    partial = w[free] @ pairings[free]  # image-lattice coordinates, complex n-vector

    act = tuple(fan.facet_pairings[i] for i in key)
    orth = kernel_basis(act, ncols=n) if act else identity(n)
    span = kernel_basis(orth, ncols=n) if orth else identity(n)
    r = len(span)
    if r < n:
        if r:
            snf = smith_normal_form(span)
            v2 = snf.right
            v2inv = invert_unimodular(v2)
            q2 = np.array(
                [[v2[j][r + s] for j in range(n)] for s in range(n - r)], dtype=float
            )
            section2 = tuple(v2inv[r + s] for s in range(n - r))
        else:
            q2 = np.eye(n)
            section2 = identity(n)
        cq = q2 @ partial
        rounded = np.rint(cq.real).astype(int)
        if np.max(np.abs(cq.imag)) > 0.05 or np.max(np.abs(cq.real - rounded)) > 0.05:
            raise NotInFiber("free part does not project onto a lattice point")
        m_coords = mat_vec(transpose(section2), tuple(int(c) for c in rounded))
    else:
        m_coords = tuple(0 for _ in range(n))

    rhs = np.array(m_coords, dtype=complex) - partial
    if key:
        a_mat = np.array([fan.facet_pairings[i] for i in key], dtype=float).T  # n x |I|
        completion, *_ = np.linalg.lstsq(a_mat, rhs, rcond=None)
        kernel_residual = float(np.max(np.abs(a_mat @ completion - rhs)))
        for idx, i in enumerate(key):
            w[i] = completion[idx]
    else:
        kernel_residual = float(np.max(np.abs(rhs))) if n else 0.0
    if kernel_residual > tol:
        raise NotInFiber(f"completion residual {kernel_residual:.3e} exceeds {tol:.3e}")

    m_ambient = mat_vec(transpose(d.image_basis), m_coords)
    shift = solve_integer_system(d.normal_matrix, vec_neg(m_ambient))
    if shift is None:
        raise NoIntegerCompletion("image lattice point has no integer preimage")
    v = w + np.array(shift, dtype=float)

    recon = np.exp(2j * np.pi * v[free]) - z[free]
    residual = max(kernel_residual, float(np.max(np.abs(recon))) if free else 0.0)
    if residual > tol:
        raise NotInFiber(f"reconstruction residual {residual:.3e} exceeds {tol:.3e}")
    return v


def relate_fiber_points(fan: Fan, index_set, z1, z2, tol: float = 1e-6) -> np.ndarray:
    """A complexified relation vector v with exp(2 pi i v) . z1 = z2.

    Exists precisely when the two stratum points have equal chart
    values; raises NotInFiber otherwise.
    """
    key = tuple(sorted(index_set))
    z1 = np.asarray(z1, dtype=complex)
    z2 = np.asarray(z2, dtype=complex)
    ratio = np.zeros_like(z1)
    for j in range(len(z1)):
        if j not in key:
            ratio[j] = z2[j] / z1[j]
    return fiber_log_solve(fan, key, ratio, tol)


# ---------------------------------------------------------------------------
# transversality of the real flow


@dataclass(frozen=True)
class TransversalityReport:
    """Outcome of the scaling-flow test at one (point, direction) pair."""

    coupled: bool              # some coordinate has v_i * z_i away from 0
    flow_stays_on_level: bool  # the flowed point is still on the zero level
    flow_fixes_point: bool     # the flowed point equals the original
    g_at_one: float
    g_at_e: float
    derivative_min: float
    implication_holds: bool    # stays on level only by fixing the point


def transversality_check(
    d: DelzantData, z, v, tol: float = 1e-9, grid=None
) -> TransversalityReport:
    """Flow z by the real one-parameter scaling group along v.

    The pairing g(s) of the reduction moment with v has derivative
    g'(s) = (1/s) * sum_i |z_i|^2 s^(2 v_i) v_i^2, which is strictly
    positive whenever some v_i z_i is nonzero; the flow can therefore
    stay on the zero level only by fixing the point.
    """
    z = np.asarray(z, dtype=complex)
    v = np.asarray(v, dtype=float)
    if grid is None:
        grid = np.geomspace(0.5, 4.0, 9)
    moduli_sq = np.abs(z) ** 2
    offsets = d.offsets_float

    def g(s: float) -> float:
        return float(np.sum((0.5 * moduli_sq * s ** (2 * v) + offsets) * v))

    def g_prime(s: float) -> float:
        return float(np.sum(moduli_sq * s ** (2 * v) * v**2) / s)

    flowed = np.exp(v) * z
    coupled = bool(np.max(np.abs(v * z)) > tol)
    stays = bool(np.max(np.abs(moment_reduction(d, flowed))) <= tol)
    fixes = bool(np.max(np.abs(flowed - z)) <= tol)
    return TransversalityReport(
        coupled=coupled,
        flow_stays_on_level=stays,
        flow_fixes_point=fixes,
        g_at_one=g(1.0),
        g_at_e=g(float(np.e)),
        derivative_min=min(g_prime(float(s)) for s in grid),
        implication_holds=(not stays) or fixes,
    )
