"""Harness behavior: determinism, record structure, failure surfacing."""

import json

from delzant.verify import (
    VerifyConfig,
    check_face_structure,
    check_moment_image,
    moment_sample_rows,
    polytope_digest,
    run_all,
    _rng_for,
)


SMALL = VerifyConfig(
    seed=3, moment_samples=400, suite_samples=60, fan_directions=100
)


def test_interval_all_pass(interval_data):
    report = run_all(interval_data, SMALL)
    assert report.all_passed
    assert {c.name for c in report.checks} == {
        "exact_sequence",
        "moment_image",
        "orbit_decomposition",
        "face_structure",
        "zero_level_rank",
        "fan_completeness",
        "monoid_generation",
        "chart_invariance",
        "chart_equivariance",
        "atlas_consistency",
        "fiber_recovery",
        "injectivity",
        "transversality",
    }


def test_triangle_all_pass(triangle_data, triangle_fan):
    report = run_all(triangle_data, SMALL, fan=triangle_fan)
    assert report.all_passed


def test_report_bytes_deterministic(interval_data):
    a = run_all(interval_data, SMALL).to_json_bytes()
    b = run_all(interval_data, SMALL).to_json_bytes()
    assert a == b


def test_report_bytes_depend_on_seed(interval_data):
    a = run_all(interval_data, SMALL).to_json_bytes()
    b = run_all(interval_data, VerifyConfig(
        seed=4, moment_samples=400, suite_samples=60, fan_directions=100
    )).to_json_bytes()
    assert a != b


def test_report_document_is_json_clean(interval_data):
    report = run_all(interval_data, SMALL)
    doc = json.loads(report.to_json_bytes())
    assert doc["all_passed"] is True
    assert doc["digest"] == polytope_digest(interval_data.polytope)
    for check in doc["checks"]:
        assert {"name", "statement", "samples", "max_residual",
                "tolerance", "passed", "details"} <= set(check)
    assert "wall_time" not in json.dumps(doc)


def test_impossible_tolerance_fails_honestly(interval_data):
    record = check_moment_image(
        interval_data, 200, _rng_for(0, 1), tol=1e-30
    )
    assert not record.passed
    assert record.max_residual > 1e-30


def test_face_structure_counts(octahedron_data, octahedron_fan):
    record = check_face_structure(octahedron_data, octahedron_fan)
    assert record.passed
    assert record.details["fixed_points"] == 6
    assert record.samples == 27


def test_moment_sample_rows_deterministic(triangle_data):
    rows_a = moment_sample_rows(triangle_data, 50, seed=9)
    rows_b = moment_sample_rows(triangle_data, 50, seed=9)
    assert rows_a == rows_b
    assert all(len(x) == 2 and r >= 0 for x, r in rows_a)
