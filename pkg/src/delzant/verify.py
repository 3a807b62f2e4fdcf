"""Seeded numerical harness for the construction's structural claims.

Every check is a pure function of (data, seed, counts, tolerances) and
returns a record with the worst residual it saw; run_all wires them
together with per-check derived seeds so a report is reproducible
byte-for-byte for a fixed seed and input.  Containment statements are
asserted as sampled containment plus exact vertex attainment; sampling
cannot certify surjectivity onto the polytope and the report does not
claim it.
"""

from __future__ import annotations

import hashlib
import json
import time
from dataclasses import asdict, dataclass, field
from fractions import Fraction

import numpy as np

from .construction import (
    DelzantData,
    fiber_radii,
    moment_torus,
    properness_bound,
    sample_zero_level,
    stabilizer_data,
)
from .errors import NotInFiber, OutsidePolytope
from .lattice import kernel_basis, rat_rank, saturate_sublattice, vec_dot
from .polytope import HPolytope
from .toric import (
    Fan,
    build_fan,
    chart_inclusion,
    evaluate_chart,
    evaluate_through_inclusion,
    relate_fiber_points,
    fiber_log_solve,
    transversality_check,
)


@dataclass(frozen=True)
class VerifyConfig:
    """Knobs for the harness; defaults give sub-minute desk runs."""

    seed: int = 0
    moment_samples: int = 10000
    suite_samples: int = 1000
    orbit_fibers: int = 8
    fan_directions: int = 1000
    box_radius: int = 2
    tol_algebraic: float = 1e-9
    tol_chart: float = 1e-8
    tol_log: float = 1e-6
    rank_threshold: float = 1e-8

    def to_document(self) -> dict:
        return dict(sorted(asdict(self).items()))


@dataclass(frozen=True)
class CheckRecord:
    name: str
    statement: str
    samples: int
    max_residual: float
    tolerance: float
    passed: bool
    details: dict = field(default_factory=dict)

    def to_document(self) -> dict:
        return {
            "name": self.name,
            "statement": self.statement,
            "samples": int(self.samples),
            "max_residual": float(self.max_residual),
            "tolerance": float(self.tolerance),
            "passed": bool(self.passed),
            "details": dict(sorted(self.details.items())),
        }


@dataclass(frozen=True)
class VerificationReport:
    digest: str
    seed: int
    config: dict
    checks: tuple[CheckRecord, ...]
    wall_time_s: float

    @property
    def all_passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def to_document(self) -> dict:
        # wall time deliberately excluded: reports must be byte-stable
        return {
            "digest": self.digest,
            "seed": self.seed,
            "config": self.config,
            "all_passed": self.all_passed,
            "checks": [c.to_document() for c in self.checks],
        }

    def to_json_bytes(self) -> bytes:
        return canonical_json_bytes(self.to_document())


def canonical_json_bytes(doc) -> bytes:
    return json.dumps(doc, sort_keys=True, separators=(",", ":")).encode()


def polytope_digest(p: HPolytope) -> str:
    doc = {"dim": p.dim, "facets": [[list(u), str(off)] for u, off in p.facets]}
    return hashlib.sha256(canonical_json_bytes(doc)).hexdigest()


def _rng_for(seed: int, index: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(seed, spawn_key=(index,))))


def _sample_box_point(p: HPolytope, rng) -> tuple[Fraction, ...]:
    lo, hi = p.bounding_box
    denom = 1 << 32
    ks = rng.integers(0, denom, size=p.dim, dtype=np.int64)
    return tuple(l + (h - l) * Fraction(int(k), denom) for l, h, k in zip(lo, hi, ks))


def _sample_interior_point(d: DelzantData, rng, attempts: int = 100000):
    for _ in range(attempts):
        x = _sample_box_point(d.polytope, rng)
        if all(d.polytope.slack(x, i) > 0 for i in range(d.num_facets)):
            return x
    raise RuntimeError("failed to sample an interior point")


def _relation_combo(d: DelzantData, coeffs) -> np.ndarray:
    return np.asarray(coeffs) @ d.relation_basis_float


# ---------------------------------------------------------------------------
# individual checks


def check_exact_sequence(d: DelzantData) -> CheckRecord:
    """Exact integer identities of the kernel / image / quotient data."""
    p, n = d.num_facets, d.dim
    ok = True
    for l in d.relation_basis:
        ok &= all(vec_dot(row, l) == 0 for row in d.normal_matrix)
    ok &= len(d.relation_basis) == p - n
    if d.relation_basis:
        ok &= rat_rank(d.relation_basis) == p - n
        _, index = saturate_sublattice(d.relation_basis)
        ok &= index == 1
    ok &= len(d.image_basis) == n
    return CheckRecord(
        name="exact_sequence",
        statement="kernel and image of the facet-normal map are exact and saturated",
        samples=0,
        max_residual=0.0,
        tolerance=0.0,
        passed=bool(ok),
        details={"relation_rank": p - n, "torsion": list(d.torsion)},
    )


def check_moment_image(
    d: DelzantData, samples: int, rng, tol: float
) -> CheckRecord:
    """Sampled roundtrip through the zero level and exact vertex attainment."""
    p = d.polytope
    bound = properness_bound(d)
    feasible = 0
    equivalence_violations = 0
    properness_violations = 0
    max_resid = 0.0
    containment_violation = 0.0
    for _ in range(samples):
        x = _sample_box_point(p, rng)
        feas = all(p.slack(x, i) >= 0 for i in range(p.num_facets))
        try:
            radii, _ = fiber_radii(d, x)
            nonneg = True
        except OutsidePolytope:
            nonneg = False
        if feas != nonneg:
            equivalence_violations += 1
            continue
        if not feas:
            continue
        feasible += 1
        if max(radii) > bound:
            properness_violations += 1
        zp = sample_zero_level(d, x, rng)
        xhat, solve_resid = moment_torus(d, zp.point, tol=np.inf)
        roundtrip = float(np.max(np.abs(xhat - np.array([float(c) for c in x]))))
        max_resid = max(max_resid, roundtrip, solve_resid)
        slack_f = d.normal_matrix_float.T @ xhat - d.offsets_float
        containment_violation = max(containment_violation, float(max(0.0, -slack_f.min())))

    vertex_failures = 0
    for v in p.vertices:
        radii, active = fiber_radii(d, v)
        if any(radii[i] != 0 for i in active) or any(
            radii[i] == 0 for i in range(p.num_facets) if i not in active
        ):
            vertex_failures += 1
            continue
        zp = sample_zero_level(d, v, rng)
        xhat, _ = moment_torus(d, zp.point, tol=np.inf)
        err = float(np.max(np.abs(xhat - np.array([float(c) for c in v]))))
        max_resid = max(max_resid, err)
        if err > tol:
            vertex_failures += 1

    passed = (
        equivalence_violations == 0
        and properness_violations == 0
        and vertex_failures == 0
        and max_resid <= tol
        and containment_violation <= tol
        and feasible > 0
    )
    return CheckRecord(
        name="moment_image",
        statement=(
            "sampled zero-level points map into the polytope with exact "
            "feasibility equivalence, vertex attainment, and radii under "
            "the properness bound"
        ),
        samples=samples,
        max_residual=max(max_resid, containment_violation),
        tolerance=tol,
        passed=passed,
        details={
            "feasible": feasible,
            "equivalence_violations": equivalence_violations,
            "properness_violations": properness_violations,
            "vertex_failures": vertex_failures,
            "properness_bound": str(bound),
        },
    )


def check_orbit_decomposition(
    d: DelzantData, fan: Fan, fibers: int, rng, tol: float
) -> CheckRecord:
    """Phase differences of fiber points split into a torus lift plus a relation vector."""
    pi = d.normal_matrix_float
    gram = pi @ pi.T
    max_resid = 0.0
    pairs = 0
    for face in fan.face_lattice.faces:
        x = face.interior_point
        _, active = fiber_radii(d, x)
        taus = rng.random((fibers, d.num_facets))
        taus[:, list(active)] = 0.0
        for a in range(fibers):
            for b in range(a + 1, fibers):
                delta = taus[b] - taus[a]
                s = np.linalg.solve(gram, pi @ delta)
                l = delta - pi.T @ s
                max_resid = max(max_resid, float(np.max(np.abs(pi @ l))))
                pairs += 1
    return CheckRecord(
        name="orbit_decomposition",
        statement=(
            "any two fiber points over one polytope point differ by a "
            "relation-group element times a torus lift"
        ),
        samples=pairs,
        max_residual=max_resid,
        tolerance=tol,
        passed=max_resid <= tol,
        details={"fibers_per_point": fibers},
    )


def check_face_structure(d: DelzantData, fan: Fan) -> CheckRecord:
    """Exact integer identities: fiber dimensions, fixed points, stabilizers."""
    p, n = d.num_facets, d.dim
    violations = 0
    zero_dim_fibers = 0
    for face in fan.face_lattice.faces:
        free_cols = [j for j in range(p) if j not in face.index_set]
        restricted = tuple(
            tuple(row[j] for j in free_cols) for row in d.relation_basis
        )
        supported = (p - n) - rat_rank(restricted)
        fiber_dim = (p - len(face.index_set)) - (p - n - supported)
        if fiber_dim != face.dim:
            violations += 1
        if fiber_dim == 0:
            zero_dim_fibers += 1
        st = stabilizer_data(d, face)
        if st.rank != n - face.dim:
            violations += 1
    vertex_count = len(fan.face_lattice.vertex_faces)
    if zero_dim_fibers != vertex_count:
        violations += 1
    return CheckRecord(
        name="face_structure",
        statement=(
            "fiber dimension equals face dimension, zero-dimensional fibers "
            "are exactly the vertices, stabilizer rank is the face codimension"
        ),
        samples=len(fan.face_lattice.faces),
        max_residual=float(violations),
        tolerance=0.0,
        passed=violations == 0,
        details={"fixed_points": zero_dim_fibers, "vertices": vertex_count},
    )


def check_zero_level_rank(
    d: DelzantData, samples: int, rng, threshold: float
) -> CheckRecord:
    """Constraint gradients at interior zero-level points have full rank."""
    p, n = d.num_facets, d.dim
    k = p - n
    failures = 0
    for _ in range(samples):
        x = _sample_interior_point(d, rng)
        zp = sample_zero_level(d, x, rng)
        z = zp.point
        rows = [
            np.concatenate([l * z.real, l * z.imag])
            for l in np.asarray(d.relation_basis_float)
        ]
        if k:
            mat = np.array(rows)
            svals = np.linalg.svd(mat, compute_uv=False)
            rank = int(np.sum(svals > threshold * svals[0]))
        else:
            rank = 0
        if rank != k:
            failures += 1
    return CheckRecord(
        name="zero_level_rank",
        statement=(
            "the zero level is a transverse intersection at interior points: "
            "its dimension is facet count plus ambient dimension"
        ),
        samples=samples,
        max_residual=float(failures),
        tolerance=0.0,
        passed=failures == 0,
        details={"constraints": k, "zero_level_dim": p + n},
    )


def check_fan_completeness(fan: Fan, directions: int, rng) -> CheckRecord:
    """Every sampled direction lies in some vertex cone."""
    n = fan.data.dim
    vertex_cones = [fan.cone(f.index_set) for f in fan.face_lattice.vertex_faces]
    misses = 0
    tried = 0
    while tried < directions:
        vec = tuple(int(c) for c in rng.integers(-9, 10, size=n))
        if not any(vec):
            continue
        tried += 1
        if not any(c.contains(vec) for c in vertex_cones):
            misses += 1
    return CheckRecord(
        name="fan_completeness",
        statement="the vertex cones cover every sampled integer direction",
        samples=directions,
        max_residual=float(misses),
        tolerance=0.0,
        passed=misses == 0,
        details={"maximal_cones": len(vertex_cones)},
    )


def check_monoid_generation(fan: Fan, box_radius: int) -> CheckRecord:
    """Every dual-cone lattice point in the test box decomposes over the generators."""
    from itertools import product

    n = fan.data.dim
    failures = 0
    checked = 0
    for face in fan.face_lattice.faces:
        monoid = fan.monoid(face.index_set)
        for pt in product(range(-box_radius, box_radius + 1), repeat=n):
            if not monoid.contains(pt):
                continue
            checked += 1
            if monoid.decompose(pt) is None:
                failures += 1
    return CheckRecord(
        name="monoid_generation",
        statement=(
            "every dual-cone lattice point in the test box is a nonnegative "
            "integer combination of the chart generators"
        ),
        samples=checked,
        max_residual=float(failures),
        tolerance=0.0,
        passed=failures == 0,
        details={"box_radius": box_radius},
    )


def _random_stratum_point(d: DelzantData, index_set, rng) -> np.ndarray:
    z = np.zeros(d.num_facets, dtype=complex)
    for j in range(d.num_facets):
        if j not in index_set:
            z[j] = rng.uniform(0.3, 1.8) * np.exp(2j * np.pi * rng.random())
    return z


def _random_relation_vector(d: DelzantData, rng, imag_bound: float = 0.4) -> np.ndarray:
    k = d.codim
    coeffs = rng.random(k) + 1j * rng.uniform(-imag_bound, imag_bound, k)
    return coeffs @ d.relation_basis_float.astype(complex)


def _rel_dev(a, b) -> float:
    a = np.asarray(a)
    b = np.asarray(b)
    scale = np.maximum(1.0, np.maximum(np.abs(a), np.abs(b)))
    return float(np.max(np.abs(a - b) / scale))


def check_chart_invariance(fan: Fan, samples_per_face: int, rng, tol: float) -> CheckRecord:
    """Chart values do not move under the complexified relation subgroup."""
    d = fan.data
    max_dev = 0.0
    total = 0
    for face in fan.face_lattice.faces:
        key = face.index_set
        for _ in range(samples_per_face):
            z = _random_stratum_point(d, key, rng)
            v = _random_relation_vector(d, rng)
            gz = np.exp(2j * np.pi * v) * z
            base = evaluate_chart(fan, key, z).values
            moved = evaluate_chart(fan, key, gz).values
            max_dev = max(max_dev, _rel_dev(base, moved))
            total += 1
    return CheckRecord(
        name="chart_invariance",
        statement="chart values are invariant under the complexified relation subgroup",
        samples=total,
        max_residual=max_dev,
        tolerance=tol,
        passed=max_dev <= tol,
        details={},
    )


def check_chart_equivariance(fan: Fan, samples_per_face: int, rng, tol: float) -> CheckRecord:
    """Ambient torus elements act on chart values by the paired character."""
    d = fan.data
    max_dev = 0.0
    total = 0
    for face in fan.face_lattice.faces:
        key = face.index_set
        exps = fan.generator_exponents(key)
        for _ in range(samples_per_face):
            z = _random_stratum_point(d, key, rng)
            v = rng.random(d.num_facets) + 1j * rng.uniform(-0.4, 0.4, d.num_facets)
            gz = np.exp(2j * np.pi * v) * z
            base = evaluate_chart(fan, key, z).values
            moved = evaluate_chart(fan, key, gz).values
            factors = [np.exp(2j * np.pi * sum(v[j] * e for j, e in enumerate(row)))
                       for row in exps]
            expected = tuple(f * b for f, b in zip(factors, base))
            max_dev = max(max_dev, _rel_dev(expected, moved))
            total += 1
    return CheckRecord(
        name="chart_equivariance",
        statement="chart values transform by the paired character under the ambient torus",
        samples=total,
        max_residual=max_dev,
        tolerance=tol,
        passed=max_dev <= tol,
        details={},
    )


def check_atlas_consistency(fan: Fan, samples_per_pair: int, rng, tol: float) -> CheckRecord:
    """Evaluating through an inclusion table agrees with direct evaluation."""
    d = fan.data
    max_dev = 0.0
    total = 0
    faces = fan.face_lattice.faces
    for e_face in faces:
        for f_face in faces:
            if e_face.index_set == f_face.index_set:
                continue
            if not set(e_face.index_set) > set(f_face.index_set):
                continue
            table = chart_inclusion(fan, e_face.index_set, f_face.index_set)
            for _ in range(samples_per_pair):
                z = _random_stratum_point(d, f_face.index_set, rng)
                direct = evaluate_chart(fan, f_face.index_set, z).values
                super_vals = evaluate_chart(fan, e_face.index_set, z, strict=False).values
                via = evaluate_through_inclusion(table, super_vals)
                max_dev = max(max_dev, _rel_dev(direct, via))
                total += 1
    return CheckRecord(
        name="atlas_consistency",
        statement="incident charts agree on overlaps through their inclusion tables",
        samples=total,
        max_residual=max_dev,
        tolerance=tol,
        passed=max_dev <= tol,
        details={},
    )


def check_fiber_recovery(fan: Fan, samples_per_face: int, rng, tol: float) -> CheckRecord:
    """Points built by relation vectors are recovered by the log solver."""
    d = fan.data
    max_resid = 0.0
    failures = 0
    total = 0
    for face in fan.face_lattice.faces:
        key = face.index_set
        free = [j for j in range(d.num_facets) if j not in key]
        basepoint = np.zeros(d.num_facets, dtype=complex)
        basepoint[free] = 1.0
        for _ in range(samples_per_face):
            v = _random_relation_vector(d, rng)
            z = np.exp(2j * np.pi * v) * basepoint
            total += 1
            try:
                vhat = fiber_log_solve(fan, key, z, tol=tol)
            except NotInFiber:
                failures += 1
                continue
            err = float(np.max(np.abs(np.exp(2j * np.pi * vhat[free]) - z[free]))) if free else 0.0
            max_resid = max(max_resid, err)
    return CheckRecord(
        name="fiber_recovery",
        statement="constructed fiber points are recovered by the logarithmic solver",
        samples=total,
        max_residual=max_resid,
        tolerance=tol,
        passed=failures == 0 and max_resid <= tol,
        details={"failures": failures},
    )


def check_injectivity(fan: Fan, samples_per_face: int, rng, tol: float) -> CheckRecord:
    """Equal chart values on the zero level come from one relation-group element."""
    d = fan.data
    max_resid = 0.0
    failures = 0
    total = 0
    for face in fan.face_lattice.faces:
        key = face.index_set
        x = face.interior_point
        free = [j for j in range(d.num_facets) if j not in key]
        for _ in range(samples_per_face):
            z1 = sample_zero_level(d, x, rng).point
            u = (rng.random(d.codim) @ d.relation_basis_float).astype(complex)
            z2 = np.exp(2j * np.pi * u) * z1
            chart_gap = _rel_dev(
                evaluate_chart(fan, key, z1).values,
                evaluate_chart(fan, key, z2).values,
            )
            if chart_gap > 1e-9:
                continue  # hypothesis not met; nothing to assert
            total += 1
            try:
                vhat = relate_fiber_points(fan, key, z1, z2, tol=tol)
            except NotInFiber:
                failures += 1
                continue
            err = (
                float(np.max(np.abs(np.exp(2j * np.pi * vhat[free]) * z1[free] - z2[free])))
                if free
                else 0.0
            )
            max_resid = max(max_resid, err)
    return CheckRecord(
        name="injectivity",
        statement=(
            "zero-level points with equal chart values are related by a "
            "single relation-group element"
        ),
        samples=total,
        max_residual=max_resid,
        tolerance=tol,
        passed=failures == 0 and max_resid <= tol,
        details={"failures": failures},
    )


def check_transversality(d: DelzantData, fan: Fan, samples: int, rng, tol: float) -> CheckRecord:
    """The real scaling flow leaves the zero level unless it fixes the point."""
    faces = fan.face_lattice.faces
    implication_failures = 0
    degenerate_derivative = 0
    min_coupled_derivative = float("inf")
    supported_bases = {}
    for i in range(samples):
        if i % 4 == 3:
            face = faces[(i // 4) % len(faces)]
            x = face.interior_point
            key = face.index_set
            if key not in supported_bases:
                selectors = tuple(
                    tuple(int(j == c) for j in range(d.num_facets))
                    for c in range(d.num_facets)
                    if c not in key
                )
                stacked = d.normal_matrix + selectors
                supported_bases[key] = kernel_basis(stacked, ncols=d.num_facets)
            basis = supported_bases[key]
            if basis:
                coeffs = rng.uniform(-1.5, 1.5, len(basis))
                v = coeffs @ np.array(basis, dtype=float)
            else:
                v = np.zeros(d.num_facets)
        else:
            x = _sample_interior_point(d, rng)
            v = rng.uniform(-1.5, 1.5, d.codim) @ d.relation_basis_float
        z = sample_zero_level(d, x, rng).point
        report = transversality_check(d, z, v, tol=tol)
        if not report.implication_holds:
            implication_failures += 1
        if report.coupled:
            if report.derivative_min <= 0:
                degenerate_derivative += 1
            min_coupled_derivative = min(min_coupled_derivative, report.derivative_min)
    return CheckRecord(
        name="transversality",
        statement="the real scaling flow leaves the zero level unless it fixes the point",
        samples=samples,
        max_residual=float(implication_failures + degenerate_derivative),
        tolerance=0.0,
        passed=implication_failures == 0 and degenerate_derivative == 0,
        details={
            "min_coupled_derivative": (
                min_coupled_derivative if min_coupled_derivative < float("inf") else None
            ),
        },
    )


# ---------------------------------------------------------------------------
# the aggregate run


def run_all(d: DelzantData, config: VerifyConfig | None = None, fan: Fan | None = None) -> VerificationReport:
    """Run every check with per-check derived seeds; deterministic output."""
    cfg = config or VerifyConfig()
    if fan is None:
        fan = build_fan(d)
    t0 = time.perf_counter()
    per_face = max(1, cfg.suite_samples // len(fan.face_lattice.faces))
    checks = (
        check_exact_sequence(d),
        check_moment_image(d, cfg.moment_samples, _rng_for(cfg.seed, 1), cfg.tol_algebraic),
        check_orbit_decomposition(d, fan, cfg.orbit_fibers, _rng_for(cfg.seed, 2), cfg.tol_algebraic),
        check_face_structure(d, fan),
        check_zero_level_rank(d, min(50, cfg.suite_samples), _rng_for(cfg.seed, 4), cfg.rank_threshold),
        check_fan_completeness(fan, cfg.fan_directions, _rng_for(cfg.seed, 5)),
        check_monoid_generation(fan, cfg.box_radius),
        check_chart_invariance(fan, per_face, _rng_for(cfg.seed, 7), cfg.tol_chart),
        check_chart_equivariance(fan, per_face, _rng_for(cfg.seed, 8), cfg.tol_chart),
        check_atlas_consistency(fan, max(1, per_face // 4), _rng_for(cfg.seed, 9), cfg.tol_algebraic),
        check_fiber_recovery(fan, per_face, _rng_for(cfg.seed, 10), cfg.tol_log),
        check_injectivity(fan, max(1, per_face // 4), _rng_for(cfg.seed, 11), cfg.tol_log),
        check_transversality(d, fan, cfg.suite_samples, _rng_for(cfg.seed, 12), cfg.tol_algebraic),
    )
    elapsed = time.perf_counter() - t0
    return VerificationReport(
        digest=polytope_digest(d.polytope),
        seed=cfg.seed,
        config=cfg.to_document(),
        checks=checks,
        wall_time_s=elapsed,
    )


def moment_sample_rows(d: DelzantData, count: int, seed: int) -> list[tuple[tuple[float, ...], float]]:
    """(x, roundtrip residual) pairs for plot export; deterministic per seed."""
    rng = _rng_for(seed, 1)
    rows = []
    while len(rows) < count:
        x = _sample_box_point(d.polytope, rng)
        if not all(d.polytope.slack(x, i) >= 0 for i in range(d.num_facets)):
            continue
        zp = sample_zero_level(d, x, rng)
        xhat, _ = moment_torus(d, zp.point, tol=np.inf)
        xf = np.array([float(c) for c in x])
        rows.append((tuple(float(c) for c in xf), float(np.max(np.abs(xhat - xf)))))
    return rows
