"""File formats: complexes, matroids, cell sheaves, functions, superforms.

Everything is canonical JSON with rationals as "a/b" strings and -infinity
as "-inf".  Coordinates and wedge indices are 1-based in files, matching
the usual x_1..x_r conventions; internally everything is 0-based.
"""

from __future__ import annotations

import hashlib
import json
from fractions import Fraction

from .cohomology import SHEAF, COSHEAF, CellularSheafDatum, SheafCell
from .errors import ParseError
from .matroids import Matroid, matroid_from
from .modifications import PLFunction
from .polyhedral import NEG_INF, Polyhedron, PolyhedralComplex, build_complex
from .polynomial import Poly
from .superforms import PolySuperform


def rational_to_str(x) -> str:
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else \
        f"{x.numerator}/{x.denominator}"


def parse_rational(s):
    if isinstance(s, bool):
        raise ParseError(f"not a rational: {s!r}")
    if isinstance(s, int):
        return Fraction(s)
    if isinstance(s, str):
        try:
            return Fraction(s)
        except (ValueError, ZeroDivisionError) as exc:
            raise ParseError(f"not a rational: {s!r}") from exc
    raise ParseError(f"not a rational: {s!r}")


def parse_extended(s):
    if s == "-inf":
        return NEG_INF
    return parse_rational(s)


def canonical_json(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2) + "\n"


def content_hash(obj) -> str:
    compact = json.dumps(obj, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(compact.encode()).hexdigest()


def _load_json(path):
    try:
        with open(path) as fh:
            return json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise ParseError(f"cannot read {path}: {exc}") from exc


# -- complexes ------------------------------------------------------------------


def complex_to_dict(c: PolyhedralComplex) -> dict:
    cells = []
    for i in c.facet_indices():
        cell = c.cells[i]
        verts = []
        for v in cell.vertices:
            verts.append(["-inf" if j in cell.sedentarity else
                          rational_to_str(x) for j, x in enumerate(v)])
        rays = [[rational_to_str(x) for x in r] for r in cell.rays]
        cells.append({"vertices": verts, "rays": rays,
                      "weight": c.weights.get(i, 1)})
    return {
        "ambient_dim": c.ambient_dim,
        "tropical_coords": sorted(i + 1 for i in c.tropical_coords),
        "maximal_cells": cells,
    }


def complex_from_dict(data) -> PolyhedralComplex:
    try:
        ambient = int(data["ambient_dim"])
        raw_cells = data["maximal_cells"]
    except (KeyError, TypeError, ValueError) as exc:
        raise ParseError(f"bad complex object: {exc}") from exc
    tropical = {int(i) - 1 for i in data.get("tropical_coords", [])}
    if any(i < 0 or i >= ambient for i in tropical):
        raise ParseError("tropical_coords out of range")
    maximal = []
    for entry in raw_cells:
        try:
            verts = [[parse_extended(x) for x in v]
                     for v in entry["vertices"]]
            rays = [[parse_rational(x) for x in r]
                    for r in entry.get("rays", [])]
            weight = int(entry.get("weight", 1))
        except (KeyError, TypeError) as exc:
            raise ParseError(f"bad cell entry: {exc}") from exc
        try:
            maximal.append((Polyhedron(ambient, verts, rays), weight))
        except ValueError as exc:
            raise ParseError(str(exc)) from exc
    return build_complex(maximal, tropical_coords=tropical)


def load_complex(path) -> PolyhedralComplex:
    return complex_from_dict(_load_json(path))


def save_complex(c: PolyhedralComplex, path):
    with open(path, "w") as fh:
        fh.write(canonical_json(complex_to_dict(c)))


# -- matroids -------------------------------------------------------------------


def matroid_to_dict(m: Matroid) -> dict:
    return {"ground_size": len(m.ground),
            "bases": sorted(sorted(b) for b in m.bases)}


def load_matroid(path) -> Matroid:
    data = _load_json(path)
    try:
        return matroid_from(data)
    except (KeyError, TypeError, ValueError) as exc:
        raise ParseError(f"bad matroid object: {exc}") from exc


# -- cell sheaves ----------------------------------------------------------------


def cellsheaf_from_dict(data) -> CellularSheafDatum:
    try:
        raw_cells = data["cells"]
        raw_relations = data["relations"]
        direction = data.get("direction", SHEAF)
    except (KeyError, TypeError) as exc:
        raise ParseError(f"bad cell-sheaf object: {exc}") from exc
    if direction not in (SHEAF, COSHEAF):
        raise ParseError(f"unknown direction {direction!r}")
    cells = []
    index = {}
    for entry in raw_cells:
        try:
            cell = SheafCell(str(entry["id"]), int(entry["dim"]),
                             int(entry["space_dim"]))
        except (KeyError, TypeError, ValueError) as exc:
            raise ParseError(f"bad cell entry: {exc}") from exc
        if cell.id in index:
            raise ParseError(f"duplicate cell id {cell.id}")
        index[cell.id] = len(cells)
        cells.append(cell)
    maps = {}
    for entry in raw_relations:
        try:
            lo = index[str(entry["from"])]
            hi = index[str(entry["to"])]
            matrix = tuple(tuple(parse_rational(x) for x in row)
                           for row in entry["matrix"])
        except (KeyError, TypeError) as exc:
            raise ParseError(f"bad relation entry: {exc}") from exc
        maps[(lo, hi)] = matrix
    return CellularSheafDatum(cells, maps, direction)


def load_cellsheaf(path) -> CellularSheafDatum:
    """Parse and validate a cell-sheaf file (diamond commutation included)."""
    return cellsheaf_from_dict(_load_json(path))


# -- piecewise linear functions -----------------------------------------------------


def plfunction_from_dict(data, reference=None) -> PLFunction:
    if "terms" in data:
        try:
            terms = [(parse_rational(t["coeff"]),
                      tuple(int(e) for e in t["exponents"]))
                     for t in data["terms"]]
            mode = data.get("mode", "max")
        except (KeyError, TypeError, ValueError) as exc:
            raise ParseError(f"bad tropical polynomial: {exc}") from exc
        return PLFunction(mode, terms=terms)
    if "per_facet" in data:
        if reference is None:
            raise ParseError("per-facet functions need a reference complex")
        facets = reference.facet_indices()
        per_facet = {}
        for entry in data["per_facet"]:
            try:
                idx = int(entry["cell_id"])
                lin = [parse_rational(x) for x in entry["linear"]]
                const = parse_rational(entry["constant"])
            except (KeyError, TypeError, ValueError) as exc:
                raise ParseError(f"bad per-facet entry: {exc}") from exc
            if idx < 0 or idx >= len(facets):
                raise ParseError(f"cell_id {idx} out of range")
            key = reference.cells[facets[idx]].key
            per_facet[key] = (lin, const)
        return PLFunction(per_facet=per_facet)
    raise ParseError("function needs either terms or per_facet")


def load_plfunction(path, reference=None) -> PLFunction:
    return plfunction_from_dict(_load_json(path), reference)


# -- superforms ----------------------------------------------------------------------


def superform_from_dict(data) -> PolySuperform:
    try:
        ambient = int(data["ambient_dim"])
        p = int(data["p"])
        q = int(data["q"])
        raw_terms = data["terms"]
    except (KeyError, TypeError, ValueError) as exc:
        raise ParseError(f"bad superform object: {exc}") from exc
    terms = {}
    for entry in raw_terms:
        try:
            k = tuple(int(i) - 1 for i in entry["K"])
            l = tuple(int(i) - 1 for i in entry["L"])
            poly_terms = {}
            for t in entry["poly"]:
                mono = tuple(int(e) for e in t["exponents"])
                poly_terms[mono] = poly_terms.get(mono, Fraction(0)) + \
                    parse_rational(t["coeff"])
        except (KeyError, TypeError, ValueError) as exc:
            raise ParseError(f"bad superform term: {exc}") from exc
        poly = Poly(ambient, poly_terms)
        key = (k, l)
        terms[key] = terms[key] + poly if key in terms else poly
    try:
        return PolySuperform(ambient, p, q, terms)
    except Exception as exc:
        raise ParseError(str(exc)) from exc


def load_superform(path) -> PolySuperform:
    return superform_from_dict(_load_json(path))


def betti_to_dict(table) -> dict:
    return table.as_dict()
