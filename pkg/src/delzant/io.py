"""File formats: polytope input, report output, CSV plot data.

Polytope files are JSON with exact rational entries; rationals are
written as strings like "-3/2" (plain integers allowed) and floats are
rejected, since a float in an exact field is almost always a mistake.
Reports serialize with sorted keys and fixed separators so identical
runs produce identical bytes.
"""

from __future__ import annotations

import csv
import json
from fractions import Fraction
from pathlib import Path

from . import __version__
from .construction import (
    DelzantData,
    LatticeRetarget,
    properness_bound,
    stabilizer_data,
)
from .errors import ParseError
from .polytope import HPolytope, normalize_h_rep
from .toric import Fan, dual_cone
from .verify import VerificationReport, canonical_json_bytes


def parse_rational(value, where: str) -> Fraction:
    if isinstance(value, bool) or isinstance(value, float):
        raise ParseError(f"{where}: expected an exact rational, got {value!r}")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        try:
            return Fraction(value.strip())
        except (ValueError, ZeroDivisionError) as exc:
            raise ParseError(f"{where}: bad rational {value!r} ({exc})") from None
    raise ParseError(f"{where}: expected an exact rational, got {type(value).__name__}")


def parse_polytope_document(doc, source: str = "<memory>") -> tuple[HPolytope, tuple | None]:
    """(polytope, optional lattice basis rows) from a parsed JSON document."""
    if not isinstance(doc, dict):
        raise ParseError(f"{source}: top level must be an object")
    try:
        dim = doc["dim"]
    except KeyError:
        raise ParseError(f"{source}: missing 'dim'") from None
    if not isinstance(dim, int) or dim < 1:
        raise ParseError(f"{source}: 'dim' must be a positive integer")
    facets = doc.get("facets")
    if not isinstance(facets, list) or not facets:
        raise ParseError(f"{source}: 'facets' must be a nonempty list")
    raw = []
    for i, entry in enumerate(facets):
        where = f"{source}: facets[{i}]"
        if not isinstance(entry, dict):
            raise ParseError(f"{where}: must be an object")
        normal = entry.get("normal")
        if not isinstance(normal, list) or len(normal) != dim:
            raise ParseError(f"{where}.normal: must be a list of length {dim}")
        if "offset" not in entry:
            raise ParseError(f"{where}.offset: missing")
        nvec = tuple(parse_rational(x, f"{where}.normal[{j}]") for j, x in enumerate(normal))
        off = parse_rational(entry["offset"], f"{where}.offset")
        raw.append((nvec, off))
    lattice = None
    if "lattice" in doc:
        lattice = parse_lattice_rows(doc["lattice"], dim, f"{source}: lattice")
    return normalize_h_rep(raw), lattice


def parse_lattice_rows(rows, dim: int, where: str) -> tuple:
    if not isinstance(rows, list) or len(rows) != dim:
        raise ParseError(f"{where}: must be a list of {dim} rows")
    out = []
    for i, row in enumerate(rows):
        if not isinstance(row, list) or len(row) != dim:
            raise ParseError(f"{where}[{i}]: must be a list of length {dim}")
        out.append(tuple(parse_rational(x, f"{where}[{i}][{j}]") for j, x in enumerate(row)))
    return tuple(out)


def load_polytope_file(path) -> tuple[HPolytope, tuple | None]:
    path = Path(path)
    try:
        doc = json.loads(path.read_text())
    except OSError as exc:
        raise ParseError(f"{path}: {exc}") from None
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path}:{exc.lineno}:{exc.colno}: {exc.msg}") from None
    return parse_polytope_document(doc, source=str(path))


def load_lattice_file(path, dim: int) -> tuple:
    path = Path(path)
    try:
        doc = json.loads(path.read_text())
    except OSError as exc:
        raise ParseError(f"{path}: {exc}") from None
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path}:{exc.lineno}:{exc.colno}: {exc.msg}") from None
    if isinstance(doc, dict) and "basis" in doc:
        doc = doc["basis"]
    return parse_lattice_rows(doc, dim, str(path))


# ---------------------------------------------------------------------------
# document builders (all-JSON-safe values, rationals as strings)


def _rat(x) -> str:
    return str(Fraction(x))


def polytope_document(p: HPolytope) -> dict:
    return {
        "dim": p.dim,
        "facets": [{"normal": list(u), "offset": _rat(off)} for u, off in p.facets],
    }


def construction_document(d: DelzantData, fan: Fan) -> dict:
    faces = []
    for face in fan.face_lattice.faces:
        st = stabilizer_data(d, face)
        faces.append(
            {
                "index_set": list(face.index_set),
                "dim": face.dim,
                "vertex_count": len(face.vertices),
                "stabilizer_rank": st.rank,
                "orbifold_index": st.orbifold_index,
                "smooth": st.smooth,
            }
        )
    return {
        "facet_count": d.num_facets,
        "dim": d.dim,
        "polytope": polytope_document(d.polytope),
        "vertices": [[_rat(c) for c in v] for v in d.polytope.vertices],
        "relation_basis": [list(r) for r in d.relation_basis],
        "image_basis": [list(r) for r in d.image_basis],
        "torsion": list(d.torsion),
        "properness_bound": _rat(properness_bound(d)),
        "faces": faces,
    }


def fan_document(fan: Fan) -> dict:
    cones_out = []
    for key, cone in fan.cones:
        monoid = fan.monoid(key)
        cones_out.append(
            {
                "face": list(key),
                "rays": [list(r) for r in cone.rays],
                "halfspaces": [list(h) for h in cone.halfspaces],
                "dual_rays": [list(r) for r in dual_cone(cone).rays],
                "monoid": {
                    "perp_basis": [list(g) for g in monoid.perp_basis],
                    "pointed_generators": [list(g) for g in monoid.pointed_generators],
                    "all_generators": [list(g) for g in monoid.all_generators],
                },
            }
        )
    return {"lattice_basis": [list(r) for r in fan.data.image_basis], "cones": cones_out}


def retarget_document(rt: LatticeRetarget) -> dict:
    return {
        "lattice": [[_rat(x) for x in row] for row in rt.lattice],
        "quotient_torsion": list(rt.quotient_torsion),
        "polytope": polytope_document(rt.polytope),
        "faces": [
            {
                "index_set": list(key),
                "orbifold_index": idx,
                "stabilizer_rank": rank,
                "smooth": smooth,
            }
            for key, idx, rank, smooth in rt.face_indices
        ],
    }


def report_document(
    d: DelzantData,
    fan: Fan,
    verification: VerificationReport | None = None,
    retarget: LatticeRetarget | None = None,
    seed: int | None = None,
) -> dict:
    doc = {
        "metadata": {
            "tool": "delzant",
            "version": __version__,
            "seed": seed if seed is not None else (verification.seed if verification else 0),
        },
        "construction": construction_document(d, fan),
        "fan": fan_document(fan),
    }
    if verification is not None:
        doc["verification"] = verification.to_document()
    if retarget is not None:
        doc["quotient"] = retarget_document(retarget)
    return doc


def dumps_report(doc) -> bytes:
    return canonical_json_bytes(doc)


def write_sample_csv(path, rows, dim: int) -> None:
    """Delimited (x, residual) pairs for external plotting."""
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow([f"x{i}" for i in range(dim)] + ["residual"])
        for coords, residual in rows:
            writer.writerow([repr(c) for c in coords] + [repr(residual)])


def read_report(path) -> dict:
    with open(path, "rb") as fh:
        return json.loads(fh.read())
