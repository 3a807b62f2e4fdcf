"""CLI behavior: subcommands, exit codes, file outputs, schema round trips."""

import json
from pathlib import Path

import pytest

from delzant.cli import dispatch
from delzant.io import (
    dumps_report,
    load_polytope_file,
    parse_polytope_document,
    read_report,
)
from delzant.errors import ParseError

DATA = Path(__file__).resolve().parent.parent / "data"


def write_interval(tmp_path) -> Path:
    path = tmp_path / "interval.json"
    path.write_text(json.dumps({
        "dim": 1,
        "facets": [
            {"normal": [1], "offset": "0"},
            {"normal": [-1], "offset": "-1"},
        ],
    }))
    return path


class TestParsing:
    def test_interval_file(self, tmp_path):
        p, lattice = load_polytope_file(write_interval(tmp_path))
        assert p.num_facets == 2 and lattice is None

    def test_rational_strings_scaled(self):
        p, _ = parse_polytope_document({
            "dim": 1,
            "facets": [
                {"normal": ["2/3"], "offset": "1/3"},
                {"normal": [-1], "offset": "-1"},
            ],
        })
        assert ((1,), ) in [(u,) for u in p.normals]
        assert any(off == 0.5 for off in p.offsets)

    def test_missing_offset_names_facet(self):
        with pytest.raises(ParseError, match=r"facets\[1\].offset"):
            parse_polytope_document({
                "dim": 1,
                "facets": [
                    {"normal": [1], "offset": "0"},
                    {"normal": [-1]},
                ],
            })

    def test_float_rejected(self):
        # a non-rational entry must fail at construction time
        with pytest.raises(ParseError, match="exact rational"):
            parse_polytope_document({
                "dim": 1,
                "facets": [
                    {"normal": [0.9999], "offset": "0"},
                    {"normal": [-1], "offset": "-1"},
                ],
            })

    def test_embedded_lattice(self):
        _, lattice = parse_polytope_document({
            "dim": 1,
            "facets": [
                {"normal": [1], "offset": "0"},
                {"normal": [-1], "offset": "-1"},
            ],
            "lattice": [["1/2"]],
        })
        assert lattice is not None and str(lattice[0][0]) == "1/2"


class TestDispatch:
    def test_analyze_text(self, tmp_path, capsys):
        code = dispatch(["analyze", "--input", str(write_interval(tmp_path))])
        out = capsys.readouterr().out
        assert code == 0
        assert "relation basis (rank 1): [[1, 1]]" in out
        assert "2 vertices" in out
        assert "standard-lattice quotient: trivial" in out

    def test_analyze_json(self, tmp_path, capsys):
        code = dispatch(["analyze", "--input", str(write_interval(tmp_path)),
                         "--format", "json"])
        assert code == 0
        doc = json.loads(capsys.readouterr().out)
        assert doc["construction"]["relation_basis"] == [[1, 1]]
        assert doc["construction"]["torsion"] == []

    def test_fan_lists_cones(self, tmp_path, capsys):
        code = dispatch(["fan", "--input", str(write_interval(tmp_path)),
                         "--format", "json"])
        assert code == 0
        doc = json.loads(capsys.readouterr().out)
        rays = sorted(tuple(tuple(r) for r in c["rays"]) for c in doc["fan"]["cones"])
        assert rays == [(), ((-1,),), ((1,),)]

    def test_verify_passes(self, tmp_path, capsys):
        code = dispatch(["verify", "--input", str(write_interval(tmp_path)),
                         "--seed", "1", "--samples", "300"])
        out = capsys.readouterr().out
        assert code == 0
        assert "ALL PASS" in out

    def test_verify_failure_exit_code(self, tmp_path, capsys):
        code = dispatch(["verify", "--input", str(write_interval(tmp_path)),
                         "--samples", "200", "--tol", "1e-30"])
        out = capsys.readouterr().out
        assert code == 1
        assert "FAIL" in out

    def test_quotient_default_lattice(self, capsys):
        code = dispatch(["quotient", "--input", str(DATA / "p2_mod3.json"),
                         "--format", "json"])
        assert code == 0
        doc = json.loads(capsys.readouterr().out)
        assert doc["quotient"]["quotient_torsion"] == [3]

    def test_quotient_lattice_file(self, tmp_path, capsys):
        lattice = tmp_path / "half.json"
        lattice.write_text(json.dumps({"basis": [["1/2"]]}))
        code = dispatch(["quotient", "--input", str(write_interval(tmp_path)),
                         "--lattice", str(lattice), "--format", "json"])
        assert code == 0
        doc = json.loads(capsys.readouterr().out)
        assert doc["quotient"]["quotient_torsion"] == [2]
        vertex_rows = [f for f in doc["quotient"]["faces"] if len(f["index_set"]) == 1]
        assert [f["orbifold_index"] for f in vertex_rows] == [2, 2]

    def test_missing_file_is_input_error(self, capsys):
        code = dispatch(["analyze", "--input", "/nonexistent.json"])
        assert code == 2
        assert "input error" in capsys.readouterr().err

    def test_empty_polytope_is_input_error(self, tmp_path, capsys):
        bad = tmp_path / "bad.json"
        bad.write_text(json.dumps({
            "dim": 1,
            "facets": [
                {"normal": [1], "offset": "1"},
                {"normal": [-1], "offset": "0"},
            ],
        }))
        code = dispatch(["analyze", "--input", str(bad)])
        assert code == 2
        assert "EmptyPolytope" in capsys.readouterr().err

    def test_unbounded_is_input_error(self, tmp_path, capsys):
        bad = tmp_path / "open.json"
        bad.write_text(json.dumps({
            "dim": 1,
            "facets": [{"normal": [1], "offset": "0"}],
        }))
        assert dispatch(["analyze", "--input", str(bad)]) == 2


class TestExport:
    def test_export_writes_everything(self, tmp_path, capsys):
        out = tmp_path / "out"
        code = dispatch([
            "export", "--input", str(DATA / "triangle_index2.json"),
            "--out", str(out), "--samples", "300", "--seed", "5",
        ])
        assert code == 0
        names = {p.name for p in out.iterdir()}
        assert {"report.json", "samples.csv",
                "fig_residuals.png", "fig_moment_image.png", "fig_fan.png"} <= names
        doc = read_report(out / "report.json")
        assert doc["verification"]["all_passed"] is True
        header = (out / "samples.csv").read_text().splitlines()[0]
        assert header == "x0,x1,residual"

    def test_report_round_trip_bytes(self, tmp_path):
        out = tmp_path / "out"
        dispatch([
            "export", "--input", str(DATA / "interval.json"),
            "--out", str(out), "--samples", "200",
        ])
        raw = (out / "report.json").read_bytes()
        assert dumps_report(json.loads(raw)) == raw
