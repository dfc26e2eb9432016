"""Degrees of freedom for the two pyramid families.

Every DOF is a vertex evaluation or a moment of the trace against a monomial
weight on the entity's parameter domain.  Interior moments pair ``u`` with a
bubble-weighted rational function over the reference pyramid.
"""
from __future__ import annotations

import random
from dataclasses import dataclass
from functools import lru_cache
from fractions import Fraction
from typing import Sequence, Union

from gmpy2 import mpq

from .geometry import (
    VERTICES,
    Entity,
    Poly,
    entities_of_kind,
    integrate_param,
    trace_on_entity,
)
from .ratfun import Point3, RatFun, evaluate, integrate_reference, multiply
from .spaces import Family, SpaceSpec, bubble, interior_index_space, interior_multiplier_keys

KIND_ORDER = ("vertex", "edge", "tri", "quad", "interior")
DOF_KIND = {
    "vertex": "eval",
    "edge": "edge_moment",
    "tri": "tri_moment",
    "quad": "quad_moment",
    "interior": "interior_moment",
}

Weight = Union[Poly, Point3, RatFun]


@dataclass(frozen=True)
class Dof:
    ordinal: int
    kind: str
    entity: Entity
    weight: Weight
    weight_index: int

    def __call__(self, u: RatFun) -> Fraction:
        return apply_dof(self, u)


def _mono2(i: int, j: int) -> Poly:
    return Poly(2, {(i, j): 1})


def index_space_basis(entity_kind: str, family, r: int) -> list:
    """Monomial basis of the weight space attached to one entity kind.

    Edges: ``t^i, i <= r-2``.  Triangles: ``s^i t^j, i+j <= r-3``.  Quad:
    ``s^i t^j`` with ``i, j <= r-2`` for ``YMINUS`` and ``i+j <= r-4`` for ``Y``.
    Interior: bubble-weighted functions from :func:`spaces.interior_index_space`.
    """
    family = Family.parse(family)
    if r < 1:
        raise ValueError("order must be >= 1")
    if entity_kind == "vertex":
        return [Fraction(1)]
    if entity_kind == "edge":
        return [Poly(1, {(i,): 1}) for i in range(r - 1)]
    if entity_kind == "tri":
        return [_mono2(i, d - i) for d in range(r - 2) for i in range(d, -1, -1)]
    if entity_kind == "quad":
        if family is Family.YMINUS:
            return [_mono2(i, j) for j in range(r - 1) for i in range(r - 1)]
        return [_mono2(i, d - i) for d in range(r - 3) for i in range(d, -1, -1)]
    if entity_kind == "interior":
        return interior_index_space(SpaceSpec(family, r))
    raise ValueError(f"unknown entity kind {entity_kind!r}")


def _gram(entity_kind: str, family: Family, r: int) -> list[list]:
    """Lower triangle of the Gram matrix of the monomial index basis, as ``mpq``."""
    if entity_kind == "interior":
        keys = interior_multiplier_keys(SpaceSpec(family, r))
        b2 = [(k, mpq(v.numerator, v.denominator)) for k, v in (bubble() * bubble()).items()]

        def pair(k1, k2):
            a, b, c = k1[0] + k2[0], k1[1] + k2[1], k1[2] + k2[2]
            return sum(v / ((a + x + 1) * (b + y + 1) * (c + z + 3)) for (x, y, z), v in b2)
    else:
        keys = [next(iter(p.terms)) for p in index_space_basis(entity_kind, family, r)]

        def pair(k1, k2):
            v = integrate_param(Poly(len(k1), {tuple(u + w for u, w in zip(k1, k2)): 1}), entity_kind)
            return mpq(v.numerator, v.denominator)
    return [[pair(k1, k2) for k2 in keys[: i + 1]] for i, k1 in enumerate(keys)]


@lru_cache(maxsize=None)
def moment_weights(entity_kind: str, family, r: int) -> tuple:
    """Weights actually used by the moment DOFs of one entity kind.

    The monomial index basis is orthogonalized in order under the entity
    pairing (exact Gram-Schmidt, done as ``G = L D L^T`` on its Gram matrix)
    and each ``p_k`` is divided by ``<p_k, p_k> = D_k``.  The DOFs then read
    off modal coefficients: the trace of the dual function on its own entity
    is ``p_k``.  Raw monomial moments give the same interpolant but nodal
    functions larger by orders of magnitude (the interior pairing of ``b``
    with itself is ``1/226800``).
    """
    family = Family.parse(family)
    basis = index_space_basis(entity_kind, family, r)
    if entity_kind == "vertex" or not basis:
        return tuple(basis)
    g = _gram(entity_kind, family, r)
    n = len(basis)
    zero, one = mpq(0), mpq(1)
    lo = [[one if i == j else zero for j in range(n)] for i in range(n)]
    d = [zero] * n
    for i in range(n):
        for j in range(i + 1):
            acc = g[i][j] - sum((lo[i][k] * lo[j][k] * d[k] for k in range(j)), zero)
            if i == j:
                d[i] = acc
            else:
                lo[i][j] = acc / d[j]
    # rows of L^-1 hold the coefficients of the orthogonal p_k
    inv = [[one if i == j else zero for j in range(n)] for i in range(n)]
    for i in range(n):
        for j in range(i):
            inv[i][j] = -sum((lo[i][k] * inv[k][j] for k in range(j, i)), zero)
    out = []
    for k in range(n):
        w = None
        for c, m in zip(inv[k], basis):
            if c:
                q = c / d[k]
                term = m * Fraction(int(q.numerator), int(q.denominator))
                w = term if w is None else w + term
        out.append(w)
    return tuple(out)


def _random_unimodular(n: int, rng: random.Random) -> list[list[int]]:
    # product of unit lower and unit upper triangular integer matrices
    lower = [[rng.randint(-2, 2) if j < i else int(i == j) for j in range(n)] for i in range(n)]
    upper = [[rng.randint(-2, 2) if j > i else int(i == j) for j in range(n)] for i in range(n)]
    return [[sum(lower[i][k] * upper[k][j] for k in range(n)) for j in range(n)] for i in range(n)]


def _recombine(weights: list, rng: random.Random) -> list:
    n = len(weights)
    if n <= 1:
        return list(weights)
    mat = _random_unimodular(n, rng)
    out = []
    for row in mat:
        w = None
        for c, base in zip(row, weights):
            if c:
                w = base * c if w is None else w + base * c
        out.append(w)
    return out


def build_dof_set(spec: SpaceSpec, rng: random.Random | None = None) -> list[Dof]:
    """Ordered DOFs: vertices, edges, triangles, quad, interior.

    Within a group DOFs are ordered by entity id and then by weight index.
    Moment weights come from :func:`moment_weights`.  With ``rng`` each
    weight list is replaced by a random unimodular recombination of itself
    (same spans, different functionals).
    """
    dofs: list[Dof] = []
    r = spec.order
    for kind in KIND_ORDER:
        weights = list(moment_weights(kind, spec.family, r))
        for ent in entities_of_kind(kind):
            ws = _recombine(weights, rng) if rng is not None and kind != "vertex" else weights
            for k, w in enumerate(ws):
                if kind == "vertex":
                    w = Point3(*(Fraction(c) for c in VERTICES[ent.vertices[0]]))
                dofs.append(Dof(len(dofs), DOF_KIND[kind], ent, w, k))
    return dofs


def pair_trace(d: Dof, trace) -> Fraction:
    """Value of ``d`` given the trace of the argument on ``d.entity``."""
    if d.kind == "eval":
        return Fraction(trace)
    if d.kind == "interior_moment":
        return integrate_reference(multiply(trace, d.weight))
    return integrate_param(trace * d.weight, d.entity.kind)


def apply_dof(d: Dof, u: RatFun) -> Fraction:
    if d.kind == "eval":
        return Fraction(evaluate(u, d.weight))
    return pair_trace(d, trace_on_entity(u, d.entity))


def dof_matrix(dofs: Sequence[Dof], functions: Sequence[RatFun]) -> list[list[Fraction]]:
    """``M[i][j] = dofs[i](functions[j])`` with one trace per (entity, function)."""
    cache: dict[tuple[str, int, int], object] = {}
    rows = []
    for d in dofs:
        row = []
        for j, f in enumerate(functions):
            key = (d.entity.kind, d.entity.id, j)
            if key not in cache:
                cache[key] = trace_on_entity(f, d.entity)
            row.append(pair_trace(d, cache[key]))
        rows.append(row)
    return rows


def dof_values(dofs: Sequence[Dof], u: RatFun) -> list[Fraction]:
    traces: dict[tuple[str, int], object] = {}
    out = []
    for d in dofs:
        key = (d.entity.kind, d.entity.id)
        if key not in traces:
            traces[key] = trace_on_entity(u, d.entity)
        out.append(pair_trace(d, traces[key]))
    return out


def group_counts(dofs: Sequence[Dof]) -> dict[str, int]:
    counts = {k: 0 for k in KIND_ORDER}
    for d in dofs:
        counts[d.entity.kind] += 1
    return counts


def dofs_on_closure(dofs: Sequence[Dof], ent: Entity) -> list[int]:
    """Indices of DOFs attached to ``ent`` or to an entity on its boundary."""
    vs = set(ent.vertices)
    return [
        i for i, d in enumerate(dofs)
        if d.entity.dim <= ent.dim and set(d.entity.vertices) <= vs
    ]

