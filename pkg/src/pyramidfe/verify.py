"""Verification checks behind ``pyramidfe verify``.

Each check returns a :class:`VerificationReport` whose witness holds the exact
quantities that decided it (determinants as fraction strings, dimensions,
coefficients of a counterexample).
"""
from __future__ import annotations

import time
from dataclasses import asdict, dataclass, field

from .compat import (
    boundary_vanishing_subspace,
    conformity_nullspace_check,
    factorization_witness,
    trace_space_report,
)
from .dofs import build_dof_set, group_counts
from .element import certify_unisolvence, nodal_basis
from .errors import NonPolynomialTraceError, NotDivisibleError
from .geometry import boundary_entities, faces, trace_on_entity
from .ratfun import reference_polynomial
from .serialize import ratfun_to_json
from .spaces import SpaceSpec, build_shape_basis, dimension, interior_dof_count

CHECKS = ("dims", "unisolvence", "traces", "reproduction", "conformity")


@dataclass
class VerificationReport:
    family: str
    order: int
    check: str
    passed: bool
    witness: dict = field(default_factory=dict)
    seconds: float = 0.0

    def to_json(self) -> dict:
        return asdict(self)


def check_dims(spec: SpaceSpec) -> tuple[bool, dict]:
    n_basis = len(build_shape_basis(spec))
    counts = group_counts(build_dof_set(spec))
    n_dofs = sum(counts.values())
    closed = dimension(spec)
    ok = n_basis == closed == n_dofs and counts["interior"] == interior_dof_count(spec)
    return ok, {"basis": n_basis, "closed_form": closed, "dofs": n_dofs, "dof_groups": counts}


def check_unisolvence(spec: SpaceSpec) -> tuple[bool, dict]:
    cert = certify_unisolvence(spec)
    return cert.invertible, {"size": cert.size, "determinant": str(cert.determinant)}


def check_traces(spec: SpaceSpec) -> tuple[bool, dict]:
    bad = []
    for f in build_shape_basis(spec).functions:
        for ent in boundary_entities():
            try:
                trace_on_entity(f, ent)
            except NonPolynomialTraceError:
                bad.append({"function": ratfun_to_json(f), "entity": ent.name})
    reports = [trace_space_report(spec, f) for f in faces()]
    spans = {
        r.entity: {"computed_dim": r.computed_dim, "target_dim": r.target_dim, "equal": r.equal}
        for r in reports
    }
    ok = not bad and all(r.equal for r in reports)
    return ok, {"faces": spans, "nonpolynomial_traces": bad}


def check_reproduction(spec: SpaceSpec) -> tuple[bool, dict]:
    el = nodal_basis(spec)
    r = spec.order
    failures = []
    count = 0
    for a in range(r + 1):
        for b in range(r + 1 - a):
            for c in range(r + 1 - a - b):
                p = reference_polynomial(a, b, c)
                count += 1
                if el.interpolate(p) != p:
                    failures.append([a, b, c])
    return not failures, {"monomials": count, "failures": failures}


def check_conformity(spec: SpaceSpec) -> tuple[bool, dict]:
    per_face = {f.name: conformity_nullspace_check(spec, f) for f in faces()}
    bv = boundary_vanishing_subspace(spec)
    expected = interior_dof_count(spec)
    factor_fail = []
    for u in bv:
        try:
            fw = factorization_witness(spec, u)
        except NotDivisibleError as exc:
            factor_fail.append({"function": ratfun_to_json(u), "reason": str(exc)})
            continue
        if not fw.in_quotient_space:
            factor_fail.append({"function": ratfun_to_json(u), "reason": f"quotient not in {fw.quotient_space}"})
    ok = all(per_face.values()) and len(bv) == expected and not factor_fail
    return ok, {
        "faces": per_face,
        "boundary_vanishing_dim": len(bv),
        "expected_interior_dim": expected,
        "factorization_failures": factor_fail,
    }


_RUNNERS = {
    "dims": check_dims,
    "unisolvence": check_unisolvence,
    "traces": check_traces,
    "reproduction": check_reproduction,
    "conformity": check_conformity,
}


def run_check(spec: SpaceSpec, name: str) -> VerificationReport:
    start = time.perf_counter()
    ok, witness = _RUNNERS[name](spec)
    return VerificationReport(
        spec.family.value, spec.order, name, bool(ok), witness, round(time.perf_counter() - start, 6)
    )


def parse_checks(text: str) -> list[str]:
    names = [t.strip() for t in text.split(",") if t.strip()]
    if not names:
        raise ValueError("no checks given")
    out = []
    for n in names:
        if n == "all":
            out.extend(CHECKS)
        elif n in CHECKS:
            out.append(n)
        else:
            raise ValueError(f"unknown check {n!r}; choose from {', '.join(CHECKS + ('all',))}")
    return [c for c in CHECKS if c in out]
