"""Command-line front end.

Subcommands mirror the pipeline stages:

  analyze   construction data and face/stabilizer tables
  fan       normal fan, dual cones, chart generators
  verify    the full numerical harness; exit 1 on any failed check
  quotient  re-read the construction against an overlattice
  export    write report.json, samples.csv, and figures to a directory

Exit codes: 0 success / all checks passed, 1 verification failure,
2 input error.
"""

from __future__ import annotations

import argparse
import sys

from . import io
from .construction import build_delzant_data, retarget_lattice
from .errors import DelzantError, ParseError
from .lattice import identity
from .toric import build_fan
from .verify import VerifyConfig, moment_sample_rows, run_all


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="delzant",
        description="Exact toolkit from rational polytopes to toric chart data.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, seeded: bool = False):
        p.add_argument("--input", required=True, metavar="PATH",
                       help="polytope JSON file (exact rational entries)")
        p.add_argument("--format", choices=("json", "text"), default="text",
                       help="output format (default: text)")
        if seeded:
            p.add_argument("--seed", type=int, default=0, metavar="U64",
                           help="base seed for all sampling (default: 0)")
            p.add_argument("--samples", type=int, default=10000, metavar="N",
                           help="moment-image sample count (default: 10000)")
            p.add_argument("--tol", type=float, default=1e-9, metavar="FLOAT",
                           help="algebraic tolerance (default: 1e-9)")

    common(sub.add_parser("analyze", help="construction and face tables"))
    common(sub.add_parser("fan", help="fan, dual cones, chart generators"))
    common(sub.add_parser("verify", help="run the verification harness"), seeded=True)
    q = sub.add_parser("quotient", help="retarget to an overlattice")
    common(q)
    q.add_argument("--lattice", metavar="PATH",
                   help="JSON lattice basis; default is the standard lattice")
    e = sub.add_parser("export", help="write report, CSV samples, and figures")
    common(e, seeded=True)
    e.add_argument("--out", required=True, metavar="DIR", help="output directory")
    return parser


def _emit(doc: dict, fmt: str, text_renderer) -> None:
    if fmt == "json":
        sys.stdout.write(io.dumps_report(doc).decode() + "\n")
    else:
        sys.stdout.write(text_renderer(doc))


def _text_analyze(doc: dict) -> str:
    c = doc["construction"]
    lines = [
        f"polytope: dim {c['dim']}, {c['facet_count']} facets, "
        f"{len(c['vertices'])} vertices",
    ]
    for f in c["polytope"]["facets"]:
        lines.append(f"  facet {tuple(f['normal'])} >= {f['offset']}")
    lines.append(f"relation basis (rank {len(c['relation_basis'])}): {c['relation_basis']}")
    lines.append(f"image lattice basis: {c['image_basis']}")
    torsion = c["torsion"] or "trivial"
    lines.append(f"standard-lattice quotient: {torsion}")
    lines.append(f"properness bound: {c['properness_bound']}")
    lines.append("faces (index set | dim | stabilizer rank | orbifold index | smooth):")
    for f in c["faces"]:
        lines.append(
            f"  {tuple(f['index_set'])!s:16s} {f['dim']:3d} "
            f"{f['stabilizer_rank']:3d} {f['orbifold_index']:3d}   {f['smooth']}"
        )
    return "\n".join(lines) + "\n"


def _text_fan(doc: dict) -> str:
    lines = ["fan cones (face | rays | monoid generators):"]
    for cone in doc["fan"]["cones"]:
        gens = cone["monoid"]["all_generators"]
        lines.append(
            f"  {tuple(cone['face'])!s:16s} rays={[tuple(r) for r in cone['rays']]} "
            f"gens={[tuple(g) for g in gens]}"
        )
    return "\n".join(lines) + "\n"


def _text_verify(doc: dict) -> str:
    v = doc["verification"]
    lines = [f"digest {v['digest'][:16]}  seed {v['seed']}"]
    for c in v["checks"]:
        mark = "PASS" if c["passed"] else "FAIL"
        lines.append(
            f"  [{mark}] {c['name']:22s} samples={c['samples']:<6d} "
            f"max_residual={c['max_residual']:.3e} tol={c['tolerance']:.1e}"
        )
    lines.append("ALL PASS" if v["all_passed"] else "FAILURES PRESENT")
    return "\n".join(lines) + "\n"


def _text_quotient(doc: dict) -> str:
    q = doc["quotient"]
    torsion = q["quotient_torsion"] or "trivial"
    lines = [
        f"new lattice basis: {q['lattice']}",
        f"quotient group invariants: {torsion}",
        "moment polytope unchanged",
        "faces (index set | orbifold index | stabilizer rank | smooth):",
    ]
    for f in q["faces"]:
        lines.append(
            f"  {tuple(f['index_set'])!s:16s} {f['orbifold_index']:3d} "
            f"{f['stabilizer_rank']:3d}   {f['smooth']}"
        )
    return "\n".join(lines) + "\n"


def dispatch(argv) -> int:
    args = _build_parser().parse_args(argv)
    try:
        polytope, embedded_lattice = io.load_polytope_file(args.input)
        data = build_delzant_data(polytope)

        if args.command == "analyze":
            fan = build_fan(data)
            doc = io.report_document(data, fan)
            _emit(doc, args.format, _text_analyze)
            return 0

        if args.command == "fan":
            fan = build_fan(data)
            doc = io.report_document(data, fan)
            _emit(doc, args.format, _text_fan)
            return 0

        if args.command == "verify":
            fan = build_fan(data)
            cfg = VerifyConfig(seed=args.seed, moment_samples=args.samples,
                               tol_algebraic=args.tol)
            report = run_all(data, cfg, fan=fan)
            doc = io.report_document(data, fan, verification=report)
            _emit(doc, args.format, _text_verify)
            return 0 if report.all_passed else 1

        if args.command == "quotient":
            fan = build_fan(data)
            if args.lattice:
                rows = io.load_lattice_file(args.lattice, polytope.dim)
            elif embedded_lattice is not None:
                rows = embedded_lattice
            else:
                rows = identity(polytope.dim)
            rt = retarget_lattice(data, rows, face_lattice=fan.face_lattice)
            doc = io.report_document(data, fan, retarget=rt)
            _emit(doc, args.format, _text_quotient)
            return 0

        if args.command == "export":
            from pathlib import Path

            from . import plots

            outdir = Path(args.out)
            outdir.mkdir(parents=True, exist_ok=True)
            fan = build_fan(data)
            cfg = VerifyConfig(seed=args.seed, moment_samples=args.samples,
                               tol_algebraic=args.tol)
            report = run_all(data, cfg, fan=fan)
            doc = io.report_document(data, fan, verification=report)
            report_path = outdir / "report.json"
            report_path.write_bytes(io.dumps_report(doc))
            rows = moment_sample_rows(data, min(args.samples, 2000), args.seed)
            csv_path = outdir / "samples.csv"
            io.write_sample_csv(csv_path, rows, polytope.dim)
            figures = plots.render_report_figures(outdir, polytope, fan, rows)
            for path in [report_path, csv_path, *figures]:
                sys.stdout.write(f"{path}\n")
            return 0 if report.all_passed else 1

    except ParseError as exc:
        sys.stderr.write(f"input error: {exc}\n")
        return 2
    except DelzantError as exc:
        sys.stderr.write(f"input error: {type(exc).__name__}: {exc}\n")
        return 2
    raise AssertionError("unreachable")


def main() -> None:
    sys.exit(dispatch(sys.argv[1:]))


if __name__ == "__main__":
    main()
