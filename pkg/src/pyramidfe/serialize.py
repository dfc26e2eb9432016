"""JSON/CSV formats for bases, DOF catalogs, tabulations and point files.

Rationals are written as decimal numerator/denominator strings so that no
precision is lost in parsers without big integers.  A RatFun is a list of
``[a, b, c, num, den]`` records in canonical term order.
"""
from __future__ import annotations

import csv
import io
import json
import math
from fractions import Fraction
from pathlib import Path

from .dofs import Dof
from .element import Element, Tabulation
from .geometry import Entity, Poly, reference_entities
from .ratfun import RatFun, check_point
from .errors import OutsideReferenceError


def frac_pair(v: Fraction) -> list[str]:
    v = Fraction(v)
    return [str(v.numerator), str(v.denominator)]


def ratfun_to_json(u: RatFun) -> list:
    return [[a, b, c, *frac_pair(v)] for (a, b, c), v in u.items()]


def ratfun_from_json(data) -> RatFun:
    out = {}
    for a, b, c, num, den in data:
        out[(int(a), int(b), int(c))] = Fraction(int(num), int(den))
    return RatFun(out)


def poly_to_json(p: Poly) -> list:
    return [[*k, *frac_pair(v)] for k, v in p.items()]


def entity_to_json(ent: Entity) -> dict:
    return {
        "kind": ent.kind,
        "id": ent.id,
        "vertices": list(ent.vertices),
        "origin": [str(c) for c in ent.origin],
        "directions": [[str(c) for c in d] for d in ent.directions],
    }


def dof_to_json(d: Dof) -> dict:
    rec = {
        "ordinal": d.ordinal,
        "kind": d.kind,
        "entity": {"kind": d.entity.kind, "id": d.entity.id},
        "weight_index": d.weight_index,
    }
    if d.kind == "eval":
        rec["point"] = [str(c) for c in d.weight]
    elif d.kind == "interior_moment":
        rec["weight"] = ratfun_to_json(d.weight)
    else:
        rec["weight"] = poly_to_json(d.weight)
    return rec


def basis_document(element: Element) -> dict:
    return {
        "family": element.spec.family.value,
        "order": element.spec.order,
        "dimension": len(element),
        "entities": [entity_to_json(e) for e in reference_entities()],
        "shape_basis": [ratfun_to_json(f) for f in element.basis.functions],
        "nodal_basis": [ratfun_to_json(f) for f in element.nodal_functions],
        "dofs": [dof_to_json(d) for d in element.dofs],
    }


def load_basis(path) -> dict:
    """Read a basis file back; function lists are returned as RatFuns."""
    doc = json.loads(Path(path).read_text())
    doc["shape_basis"] = [ratfun_from_json(f) for f in doc["shape_basis"]]
    doc["nodal_basis"] = [ratfun_from_json(f) for f in doc["nodal_basis"]]
    return doc


def dumps(doc) -> str:
    return json.dumps(doc, indent=1, sort_keys=True) + "\n"


def _num(x: float):
    return None if math.isnan(x) else float(x)


def tabulation_document(element: Element, tab: Tabulation) -> dict:
    return {
        "family": element.spec.family.value,
        "order": element.spec.order,
        "points": [[float(c) for c in p] for p in tab.points],
        "values": [[_num(v) for v in row] for row in tab.values.tolist()],
        "gradients": [[[_num(g) for g in fn] for fn in row] for row in tab.gradients.tolist()],
    }


def tabulation_csv(tab: Tabulation) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["point", "function", "xi", "eta", "zeta", "value", "dxi", "deta", "dzeta"])
    for ip, p in enumerate(tab.points):
        coords = [repr(float(c)) for c in p]
        for k in range(tab.values.shape[1]):
            row = [ip, k, *coords, repr(float(tab.values[ip, k]))]
            row += [repr(float(g)) for g in tab.gradients[ip, k]]
            w.writerow(row)
    return buf.getvalue()


class PointsFileError(ValueError):
    pass


def read_points(path) -> list[tuple[Fraction, Fraction, Fraction]]:
    """Parse a points file: CSV with header ``xi,eta,zeta`` or a JSON list of triples.

    Coordinates are parsed as exact decimals.  Points outside the reference
    pyramid raise :class:`OutsideReferenceError` naming the 1-based data row.
    """
    path = Path(path)
    text = path.read_text()
    if path.suffix.lower() == ".json":
        raw = json.loads(text)
    else:
        reader = csv.DictReader(io.StringIO(text))
        if reader.fieldnames is None or [f.strip() for f in reader.fieldnames] != ["xi", "eta", "zeta"]:
            raise PointsFileError(f"{path}: expected header 'xi,eta,zeta'")
        raw = [[row[k] for k in reader.fieldnames] for row in reader]
    pts = []
    for i, row in enumerate(raw, start=1):
        try:
            p = tuple(Fraction(str(v).strip()) for v in row)
        except (ValueError, ZeroDivisionError, TypeError) as exc:
            raise PointsFileError(f"{path}: row {i}: {exc}") from None
        if len(p) != 3:
            raise PointsFileError(f"{path}: row {i}: expected 3 coordinates")
        try:
            check_point(p)
        except OutsideReferenceError:
            raise OutsideReferenceError(
                f"{path}: row {i}: point ({', '.join(map(str, row))}) is outside the reference pyramid"
            ) from None
        pts.append(p)
    return pts
