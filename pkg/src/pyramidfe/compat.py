"""Trace-compatibility and conformity checks.

These turn the face-by-face arguments behind H1-conformity into exact rank and
nullspace computations over the rationals.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .dofs import Dof, build_dof_set, dof_matrix, dofs_on_closure
from .errors import NotDivisibleError
from .geometry import Entity, Poly, faces, trace_on_entity
from .linalg import ExactMatrix
from .ratfun import RatFun
from .spaces import (
    Family,
    SpaceSpec,
    bubble,
    build_shape_basis,
    serendipity_bubble,
    shape_keys,
    sldeg,
    total_degree_keys,
)


@dataclass(frozen=True)
class TraceSpaceReport:
    spec: SpaceSpec
    entity: str
    computed_dim: int
    target_dim: int
    joint_rank: int

    @property
    def equal(self) -> bool:
        return self.computed_dim == self.target_dim == self.joint_rank


def target_face_space(spec: SpaceSpec, ent: Entity) -> list[tuple[int, int]]:
    """Exponents of the polynomial space the face trace must equal.

    Triangles: total degree ``<= r``.  Quad: degree ``<= r`` in each variable
    for ``YMINUS``, superlinear degree ``<= r`` for ``Y``.
    """
    r = spec.order
    if ent.kind == "tri":
        return [(i, j) for i in range(r + 1) for j in range(r + 1 - i)]
    if ent.kind != "quad":
        raise ValueError(f"{ent.name} is not a face")
    if spec.family is Family.YMINUS:
        return [(i, j) for i in range(r + 1) for j in range(r + 1)]
    return [(i, j) for i in range(r + 1) for j in range(r + 1) if sldeg((i, j)) <= r]


def span_matrix(polys: Sequence[Poly], monomials: Sequence[tuple[int, ...]] | None = None):
    """Columns are the coefficient vectors of ``polys`` in a fixed monomial basis."""
    if monomials is None:
        monomials = sorted({k for p in polys for k, _ in p.items()})
    index = {m: i for i, m in enumerate(monomials)}
    rows = [[Fraction(0)] * len(polys) for _ in monomials]
    for j, p in enumerate(polys):
        for k, v in p.items():
            rows[index[k]][j] = v
    return ExactMatrix(rows, len(polys)), list(monomials)


def face_traces(spec: SpaceSpec, ent: Entity) -> list[Poly]:
    return [trace_on_entity(f, ent) for f in build_shape_basis(spec).functions]


def trace_space_report(spec: SpaceSpec, ent: Entity) -> TraceSpaceReport:
    traces = face_traces(spec, ent)
    target = target_face_space(spec, ent)
    target_polys = [Poly(2, {m: 1}) for m in target]
    monos = sorted({k for p in traces for k, _ in p.items()} | set(target))
    t_mat, _ = span_matrix(traces, monos)
    g_mat, _ = span_matrix(target_polys, monos)
    return TraceSpaceReport(
        spec,
        ent.name,
        computed_dim=t_mat.rank(),
        target_dim=g_mat.rank(),
        joint_rank=t_mat.hstack(g_mat).rank(),
    )


def conformity_nullspace_check(spec: SpaceSpec, face: Entity, dofs: Sequence[Dof] | None = None) -> bool:
    """True iff vanishing of the DOFs on the closure of ``face`` forces a zero trace there."""
    if dofs is None:
        dofs = build_dof_set(spec)
    funcs = build_shape_basis(spec).functions
    idx = dofs_on_closure(dofs, face)
    sub = ExactMatrix(dof_matrix([dofs[i] for i in idx], funcs), len(funcs))
    null = sub.nullspace()
    if not null:
        return True
    t_mat, _ = span_matrix(face_traces(spec, face))
    return all(not any(row) for row in (t_mat @ ExactMatrix([list(c) for c in zip(*null)], len(null))).rows)


def boundary_vanishing_subspace(spec: SpaceSpec) -> list[RatFun]:
    """Basis of the shape-space members whose trace vanishes on all five faces."""
    basis = build_shape_basis(spec)
    t_all = None
    for f in faces():
        t_mat, _ = span_matrix(face_traces(spec, f))
        t_all = t_mat if t_all is None else t_all.vstack(t_mat)
    out = []
    for vec in t_all.nullspace():
        out.append(RatFun({k: c for k, c in zip(basis.keys, vec) if c}))
    return out


# -- factorization --------------------------------------------------------

def _divide_by_var(terms: dict, axis: int, what: str) -> dict:
    """Divide by the coordinate ``x`` (axis 0) or ``y`` (axis 1)."""
    out = {}
    for k, v in terms.items():
        if k[axis] == 0:
            raise NotDivisibleError(f"not divisible by {what}")
        kk = list(k)
        kk[axis] -= 1
        out[tuple(kk)] = v
    return out


def _divide_by_one_minus(terms: dict, axis: int, what: str) -> dict:
    """Divide by ``(1 - v)`` where ``v`` is ``x``, ``y`` or ``1/(1+z)`` (axis 2).

    Along the chosen axis each fibre is a polynomial ``p(v)``; it is divisible
    iff ``p(1) = 0`` and the quotient coefficients are the prefix sums of the
    coefficients of ``p``.
    """
    fibres: dict[tuple, dict[int, Fraction]] = {}
    for k, v in terms.items():
        rest = k[:axis] + k[axis + 1:]
        fibres.setdefault(rest, {})[k[axis]] = v
    out = {}
    for rest, coeffs in fibres.items():
        lo, hi = min(coeffs), max(coeffs)
        if sum(coeffs.values()) != 0:
            raise NotDivisibleError(f"not divisible by {what}")
        acc = Fraction(0)
        for e in range(lo, hi):
            acc += coeffs.get(e, 0)
            if acc:
                kk = list(rest)
                kk.insert(axis, e)
                out[tuple(kk)] = acc
    return out


@dataclass(frozen=True)
class Factorization:
    """``u = bubble * quotient``; ``quotient_space`` names where the quotient lives."""

    bubble: RatFun
    quotient: RatFun
    quotient_space: str
    in_quotient_space: bool
    xy_quotient: RatFun


def factorization_witness(spec: SpaceSpec, u: RatFun) -> Factorization:
    """Factor a boundary-vanishing shape function through the bubble.

    Divides the numerator by ``x(1-x)y(1-y)`` and then by ``z/(1+z)``
    ``= 1 - 1/(1+z)``; whatever is left is a combination of ``(1+z)^-c``
    terms.  ``YMINUS`` functions factor as ``b * q`` with ``q`` in the order
    ``r-3`` space.  ``Y`` functions factor through the serendipity bubble
    ``b / (1+z)^2`` with a quotient of degree ``r-5`` in ``(xi, eta, 1-zeta)``.
    """
    terms = dict(u.items())
    if not terms:
        raise NotDivisibleError("the zero function has no bubble factorization witness")
    terms = _divide_by_var(terms, 0, "x")
    terms = _divide_by_one_minus(terms, 0, "1-x")
    terms = _divide_by_var(terms, 1, "y")
    terms = _divide_by_one_minus(terms, 1, "1-y")
    xy_quot = RatFun(terms)
    terms = _divide_by_one_minus(terms, 2, "z/(1+z)")
    r = spec.order
    if spec.family is Family.YMINUS:
        shift, bub, allowed, name = 2, bubble(), set(shape_keys(Family.YMINUS, r - 3)), f"Q[{r-3}]"
    else:
        shift, bub, allowed, name = 4, serendipity_bubble(), set(total_degree_keys(r - 5)), f"P[{r-5}]"
    quot = {}
    for (a, b, c), v in terms.items():
        if c < shift:
            raise NotDivisibleError(f"remaining factor has a (1+z)^-{c} term; expected at least {shift}")
        quot[(a, b, c - shift)] = v
    q = RatFun(quot)
    if bub * q != u:
        raise NotDivisibleError("factorization does not reproduce the input")
    return Factorization(bub, q, name, all(k in allowed for k in q.keys()), xy_quot)
