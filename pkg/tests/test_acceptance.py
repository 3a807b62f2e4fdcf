"""Acceptance suite: one test per criterion, one printed verdict line each.

Run with `pytest tests/test_acceptance.py -s` to see the verdict lines.
Every tolerance and sample count is pinned here; nothing is deferred to
later calibration.
"""

import json
import time
from fractions import Fraction
from itertools import permutations

import numpy as np

from delzant.cli import dispatch
from delzant.construction import (
    build_delzant_data,
    retarget_lattice,
    stabilizer_data,
)
from delzant.lattice import (
    hermite_normal_form,
    int_det,
    invert_rational,
    kernel_basis,
    mat_mul,
    mat_vec,
    saturate_sublattice,
    smith_normal_form,
)
from delzant.toric import build_fan, dual_monoid
from delzant.verify import (
    check_chart_equivariance,
    check_chart_invariance,
    check_face_structure,
    check_fiber_recovery,
    check_moment_image,
    check_transversality,
    _rng_for,
)


def _verdict(num: int, ok: bool, text: str) -> None:
    print(f"\nACCEPTANCE {num}: {'PASS' if ok else 'FAIL'} - {text}")
    assert ok, f"criterion {num} failed: {text}"


def test_criterion_1_interval(interval_data, interval_fan):
    d = interval_data
    ok = d.num_facets == 2
    ok &= d.relation_basis == ((1, 1),)
    ok &= d.image_basis == ((1,),)
    ok &= d.torsion == ()
    ray_sets = sorted(c.rays for _, c in interval_fan.cones)
    ok &= ray_sets == [(), ((-1,),), ((1,),)]  # the complete fan of the line
    record = check_face_structure(d, interval_fan)
    ok &= record.passed and record.details["fixed_points"] == 2
    t0 = time.perf_counter()
    moment = check_moment_image(d, 10000, _rng_for(0, 1), tol=1e-9)
    elapsed = time.perf_counter() - t0
    ok &= moment.passed and moment.max_residual < 1e-9 and elapsed < 2.0
    _verdict(
        1, ok,
        f"interval: kernel (1,1), trivial quotient, complete fan, 2 fixed "
        f"points, 10^4 moment samples residual {moment.max_residual:.2e} "
        f"in {elapsed:.2f}s",
    )


def test_criterion_2_simplex(simplex_data, simplex_fan):
    d = simplex_data
    ok = d.relation_basis == ((1, 1, 1),)
    fl = simplex_fan.face_lattice
    dual_basis_dets = []
    for face in fl.vertex_faces:
        st = stabilizer_data(d, face)
        ok &= st.smooth
        monoid = simplex_fan.monoid(face.index_set)
        gens = monoid.all_generators
        ok &= len(gens) == 2
        dual_basis_dets.append(abs(int_det(gens)))
    ok &= all(det == 1 for det in dual_basis_dets)  # a basis of the dual lattice
    _verdict(
        2, ok,
        "simplex: kernel (1,1,1), 3 smooth vertices, each chart monoid is "
        "a 2-generator dual-lattice basis",
    )


def _unimodular_match(gens_a, gens_b) -> bool:
    """Some unimodular change of dual coordinates maps one set onto the other."""
    if len(gens_a) != len(gens_b):
        return False
    cols_a = tuple(zip(*gens_a))
    for perm in permutations(gens_b):
        cols_b = tuple(zip(*perm))
        # solve U . a_i = b_i from two independent columns, check the rest
        for i in range(len(gens_a)):
            for j in range(i + 1, len(gens_a)):
                sub_a = ((gens_a[i][0], gens_a[j][0]), (gens_a[i][1], gens_a[j][1]))
                if int_det(sub_a) == 0:
                    continue
                sub_b = ((perm[i][0], perm[j][0]), (perm[i][1], perm[j][1]))
                inv = invert_rational(sub_a)
                u = mat_mul(sub_b, inv)
                if any(x.denominator != 1 for row in u for x in row):
                    continue
                u = tuple(tuple(int(x) for x in row) for row in u)
                if abs(int_det(u)) != 1:
                    continue
                if all(mat_vec(u, a) == b for a, b in zip(gens_a, perm)):
                    return True
        return False
    return False


def test_criterion_3_singular_triangle(triangle_data, triangle_fan):
    d = triangle_data
    ok = d.relation_basis == ((1, 2, 1),)
    fl = triangle_fan.face_lattice
    singular = [
        f for f in fl.vertex_faces
        if stabilizer_data(d, f).orbifold_index == 2
    ]
    ok &= len(singular) == 1
    ok &= all(
        stabilizer_data(d, f).orbifold_index == 1
        for f in fl.vertex_faces
        if f not in singular
    )
    monoid = triangle_fan.monoid(singular[0].index_set)
    gens = monoid.all_generators
    ok &= len(gens) == 3
    reference = ((0, 1), (1, 0), (2, -1))
    # oracle: bounded lattice-point enumeration for the presented test cone
    oracle = dual_monoid([(1, 0), (1, 2)], 2)
    ok &= oracle.all_generators == reference
    # the vertex monoid is that same semigroup up to a unimodular change
    # of dual coordinates (it is the A1 chart in its own basis)
    ok &= _unimodular_match(gens, reference)
    _verdict(
        3, ok,
        f"triangle: kernel (1,2,1), one index-2 vertex, its 3-generator "
        f"chart monoid {gens} matches {reference} canonically",
    )


def test_criterion_4_octahedron(octahedron_data, octahedron_fan):
    d = octahedron_data
    fl = octahedron_fan.face_lattice
    ok = len(fl.vertex_faces) == 6
    ok &= all(len(f.index_set) == 4 for f in fl.vertex_faces)
    maximal = [c for _, c in octahedron_fan.cones if c.dim == 3]
    ok &= len(maximal) == 6 and all(len(c.rays) > 3 for c in maximal)
    record = check_face_structure(d, octahedron_fan)
    ok &= record.passed and record.samples == 27
    v, e, f2, _ = fl.f_vector()
    ok &= (v, e, f2) == (6, 12, 8) and v - e + f2 == 2
    _verdict(
        4, ok,
        "octahedron: 6 four-fold vertices, 6 non-simplicial maximal cones, "
        "fiber-dimension identity on all 27 faces, Euler count 2",
    )


def test_criterion_5_quotient(interval_data):
    rt = retarget_lattice(interval_data, [[Fraction(1, 2)]])
    ok = rt.quotient_torsion == (2,)
    vertex_rows = [row for row in rt.face_indices if len(row[0]) == 1]
    ok &= [idx for _, idx, _, _ in vertex_rows] == [2, 2]
    ok &= rt.polytope == interval_data.polytope
    _verdict(
        5, ok,
        "interval over the half lattice: quotient group of order 2, both "
        "vertex orbifold indices 2, moment polytope unchanged",
    )


def test_criterion_6_transversality(corpus):
    total = 0
    ok = True
    derivative_floor = float("inf")
    for name, polytope in corpus.items():
        d = build_delzant_data(polytope)
        fan = build_fan(d)
        record = check_transversality(d, fan, 250, _rng_for(6, 1), tol=1e-9)
        total += record.samples
        ok &= record.passed
        floor = record.details["min_coupled_derivative"]
        if floor is not None:
            derivative_floor = min(derivative_floor, floor)
    ok &= total >= 1000 and derivative_floor > 0
    _verdict(
        6, ok,
        f"transversality: {total} (point, direction) pairs across 4 corpus "
        f"polytopes, implication held every time, min coupled derivative "
        f"{derivative_floor:.3e} > 0",
    )


def test_criterion_7_chart_suite(corpus):
    ok = True
    worst_inv = worst_eq = worst_fiber = 0.0
    fiber_points = 0
    for name, polytope in corpus.items():
        d = build_delzant_data(polytope)
        fan = build_fan(d)
        inv = check_chart_invariance(fan, 1000, _rng_for(7, 1), tol=1e-8)
        eq = check_chart_equivariance(fan, 1000, _rng_for(7, 2), tol=1e-8)
        faces = len(fan.face_lattice.faces)
        fib = check_fiber_recovery(fan, -(-250 // faces), _rng_for(7, 3), tol=1e-6)
        ok &= inv.passed and eq.passed and fib.passed
        worst_inv = max(worst_inv, inv.max_residual)
        worst_eq = max(worst_eq, eq.max_residual)
        worst_fiber = max(worst_fiber, fib.max_residual)
        fiber_points += fib.samples
    ok &= fiber_points >= 1000
    _verdict(
        7, ok,
        f"charts: invariance {worst_inv:.2e} and equivariance {worst_eq:.2e} "
        f"within 1e-8 on 10^3 samples per face; {fiber_points} fiber points "
        f"recovered within 1e-6 (worst {worst_fiber:.2e})",
    )


def test_criterion_8_exact_algebra():
    rng = np.random.default_rng(8)
    checked = 0
    ok = True
    for _ in range(10000):
        m = int(rng.integers(1, 6))
        n = int(rng.integers(1, 6))
        mat = tuple(tuple(int(x) for x in row) for row in rng.integers(-9, 10, size=(m, n)))
        snf = smith_normal_form(mat)
        ok &= mat_mul(mat_mul(snf.left, mat), snf.right) == snf.diag
        ok &= abs(int_det(snf.left)) == 1 and abs(int_det(snf.right)) == 1
        facs = snf.invariant_factors
        ok &= all(b % a == 0 for a, b in zip(facs, facs[1:]))
        ker = kernel_basis(mat)
        ok &= all(all(x == 0 for x in mat_vec(mat, v)) for v in ker)
        if ker:
            _, index = saturate_sublattice(ker)
            ok &= index == 1  # integer kernels are saturated
        rows = hermite_normal_form(mat)
        if rows:
            _, index = saturate_sublattice(rows)
            prod = 1
            for f in smith_normal_form(rows).invariant_factors:
                prod *= f
            ok &= index == prod  # index equals product of invariant factors
        checked += 1
        if not ok:
            break
    _verdict(
        8, ok,
        f"exact algebra: {checked} random matrices, decomposition identities "
        "exact, kernels saturated, saturation index = invariant-factor product",
    )


def test_criterion_9_determinism(tmp_path, capsys):
    path = tmp_path / "interval.json"
    path.write_text(json.dumps({
        "dim": 1,
        "facets": [
            {"normal": [1], "offset": "0"},
            {"normal": [-1], "offset": "-1"},
        ],
    }))
    args = ["verify", "--input", str(path), "--seed", "42", "--format", "json"]
    code_a = dispatch(args)
    out_a = capsys.readouterr().out
    code_b = dispatch(args)
    out_b = capsys.readouterr().out
    ok = code_a == 0 and code_b == 0 and out_a.encode() == out_b.encode()
    _verdict(
        9, ok,
        f"determinism: two seed-42 runs produced byte-identical "
        f"{len(out_a)}-byte reports",
    )
