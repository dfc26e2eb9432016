"""Vandermonde matrices, unisolvence certificates, dual bases and tabulation."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property, lru_cache
from typing import Sequence

import numpy as np

from .dofs import Dof, build_dof_set, dof_matrix, dof_values
from .errors import SingularSystemError
from .linalg import ExactMatrix
from .ratfun import (
    RatFun,
    apex_limit,
    check_point,
    gradient,
    term_integral,
)
from .spaces import ShapeBasis, SpaceSpec, build_shape_basis


@dataclass(frozen=True)
class UnisolvenceCertificate:
    spec: SpaceSpec
    determinant: Fraction
    size: int

    @property
    def invertible(self) -> bool:
        return self.determinant != 0


@dataclass(frozen=True)
class Tabulation:
    points: list
    values: np.ndarray  # (npoints, nfunctions)
    gradients: np.ndarray  # (npoints, nfunctions, 3); NaN where no apex limit exists


def vandermonde(spec: SpaceSpec, dofs: Sequence[Dof] | None = None) -> ExactMatrix:
    """``V[i][j] = dof_i(basis_j)`` over the canonical shape basis."""
    basis = build_shape_basis(spec)
    if dofs is None:
        dofs = build_dof_set(spec)
    return ExactMatrix(dof_matrix(dofs, basis.functions), len(basis))


def certify_unisolvence(spec: SpaceSpec, dofs: Sequence[Dof] | None = None) -> UnisolvenceCertificate:
    v = vandermonde(spec, dofs)
    if v.nrows != v.ncols:
        return UnisolvenceCertificate(spec, Fraction(0), v.nrows)
    return UnisolvenceCertificate(spec, v.det(), v.nrows)


@dataclass(frozen=True)
class Element:
    """Shape basis, DOFs and the exact DOF-dual (nodal) basis.

    Column ``k`` of ``dual`` holds the shape-basis coefficients of nodal
    function ``k``, so ``vandermonde @ dual`` is the identity.
    """

    spec: SpaceSpec
    basis: ShapeBasis
    dofs: tuple[Dof, ...]
    vandermonde: ExactMatrix = field(repr=False)
    dual: ExactMatrix = field(repr=False)

    def __len__(self) -> int:
        return len(self.dofs)

    def combine(self, coeffs: Sequence[Fraction]) -> RatFun:
        out = {}
        for k, c in zip(self.basis.keys, coeffs):
            if c:
                out[k] = c
        return RatFun(out)

    @cached_property
    def nodal_functions(self) -> tuple[RatFun, ...]:
        return tuple(self.combine(self.dual.column(k)) for k in range(len(self)))

    def interpolate(self, target: RatFun) -> RatFun:
        vals = dof_values(self.dofs, target)
        return self.combine(self.dual @ vals)

    def interpolate_many(self, targets: Sequence[RatFun]) -> list[RatFun]:
        return [self.interpolate(t) for t in targets]

    def tabulate(self, points) -> Tabulation:
        return tabulate_element(self, points)


def build_element(spec: SpaceSpec, dofs: Sequence[Dof] | None = None) -> Element:
    basis = build_shape_basis(spec)
    dofs = tuple(build_dof_set(spec) if dofs is None else dofs)
    v = vandermonde(spec, dofs)
    if v.nrows != v.ncols:
        raise SingularSystemError(f"{len(dofs)} DOFs for a {len(basis)}-dimensional space")
    dual = v.inverse()
    return Element(spec, basis, dofs, v, dual)


@lru_cache(maxsize=None)
def nodal_basis(spec: SpaceSpec) -> Element:
    """The element for ``spec`` with its exact dual basis (cached)."""
    return build_element(spec)


def interpolate(spec: SpaceSpec, target: RatFun) -> RatFun:
    return nodal_basis(spec).interpolate(target)


def _exact_point(p):
    return tuple(v if isinstance(v, Fraction) else Fraction(v) for v in p)


def _basis_values(keys, p):
    xi, eta, zeta = p
    w = 1 - zeta
    return [xi ** a * eta ** b * w ** (c - a - b) for a, b, c in keys]


def tabulate_element(element: Element, points) -> Tabulation:
    """Values and gradients of every nodal function at every point.

    Interior and boundary points are evaluated in exact arithmetic from the
    exact nodal coefficients and rounded to float once.  At the apex the
    continuous extension is used; gradient components without a limit there
    are reported as NaN.
    """
    pts = [check_point(p) for p in points]
    keys = element.basis.keys
    n = len(keys)
    dual_cols = [element.dual.column(k) for k in range(n)]
    grad_basis = [gradient(f) for f in element.basis.functions]
    values = np.empty((len(pts), n))
    grads = np.empty((len(pts), n, 3))
    for ip, p in enumerate(pts):
        q = _exact_point(p)
        if q[2] == 1:
            nodal = element.nodal_functions
            for k, f in enumerate(nodal):
                values[ip, k] = float(apex_limit(f))
                for d, g in enumerate(gradient(f)):
                    lim = apex_limit(g)
                    grads[ip, k, d] = math.nan if lim is None else float(lim)
            continue
        bv = _basis_values(keys, q)
        gv = []
        for d in range(3):
            comp = []
            for g in grad_basis:
                total = Fraction(0)
                for (a, b, c), v in g[d].items():
                    total += v * q[0] ** a * q[1] ** b * (1 - q[2]) ** (c - a - b)
                comp.append(total)
            gv.append(comp)
        for k in range(n):
            col = dual_cols[k]
            values[ip, k] = float(sum((c * x for c, x in zip(col, bv) if c), Fraction(0)))
            for d in range(3):
                grads[ip, k, d] = float(sum((c * x for c, x in zip(col, gv[d]) if c), Fraction(0)))
    return Tabulation(pts, values, grads)


def tabulate(spec: SpaceSpec, points) -> Tabulation:
    return tabulate_element(nodal_basis(spec), points)


def tabulate_physical(spec: SpaceSpec, pyramid, points) -> Tabulation:
    """Tabulate on an affine pyramid at physical points.

    Values pull back by composition; gradients transform with the inverse
    transpose of the affine map.
    """
    ref = [pyramid.to_reference(_exact_point(x)) for x in points]
    tab = tabulate(spec, ref)
    inv_t = np.array([[float(pyramid.inverse[j][i]) for j in range(3)] for i in range(3)])
    grads = np.einsum("ij,pkj->pki", inv_t, tab.gradients)
    return Tabulation(list(points), tab.values, grads)


def mass_matrix(spec: SpaceSpec) -> ExactMatrix:
    """Exact Gram matrix of the canonical shape basis on the reference pyramid."""
    keys = build_shape_basis(spec).keys
    return ExactMatrix(
        [[term_integral(a1 + a2, b1 + b2, c1 + c2) for (a2, b2, c2) in keys] for (a1, b1, c1) in keys],
        len(keys),
    )
