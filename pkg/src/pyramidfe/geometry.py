"""Reference pyramid entities, exact traces and affine pyramids.

Conventions (part of the exported JSON contract):

* vertices 0..4 are ``(0,0,0), (1,0,0), (1,1,0), (0,1,0), (0,0,1)``;
* edges run from the lower to the higher vertex id; 0..3 lie in the base,
  4..7 join base vertex ``i`` to the apex;
* triangles 0..3 are the faces ``xi=0, eta=0, xi=1-zeta, eta=1-zeta`` and the
  quadrilateral 0 is ``zeta=0``;
* an entity with sorted vertex ids ``(A, B, ...)`` is parameterized by
  ``A + t (B - A)`` (edges), ``A + s (B - A) + t (C - A)`` (triangles) and
  ``(s, t, 0)`` (the quad).
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import factorial
from typing import Mapping

from .errors import GeometryError, NonPolynomialTraceError
from .ratfun import RatFun, evaluate

VERTICES = (
    (0, 0, 0),
    (1, 0, 0),
    (1, 1, 0),
    (0, 1, 0),
    (0, 0, 1),
)
EDGES = ((0, 1), (1, 2), (2, 3), (0, 3), (0, 4), (1, 4), (2, 4), (3, 4))
TRIANGLES = ((0, 3, 4), (0, 1, 4), (1, 2, 4), (2, 3, 4))
QUAD = (0, 1, 2, 3)

KIND_DIM = {"vertex": 0, "edge": 1, "tri": 2, "quad": 2, "interior": 3}


class Poly:
    """Sparse polynomial with exact coefficients in ``nvars`` parameters."""

    __slots__ = ("nvars", "_terms")

    def __init__(self, nvars: int, terms: Mapping[tuple[int, ...], object] | None = None):
        self.nvars = nvars
        clean = {}
        for k, v in (terms or {}).items():
            if len(k) != nvars:
                raise ValueError(f"exponent {k} does not have {nvars} entries")
            v = Fraction(v)
            if v:
                clean[tuple(k)] = v
        self._terms = {k: clean[k] for k in sorted(clean)}

    @classmethod
    def const(cls, nvars: int, value) -> "Poly":
        return cls(nvars, {(0,) * nvars: value})

    @classmethod
    def var(cls, nvars: int, i: int) -> "Poly":
        return cls(nvars, {tuple(int(j == i) for j in range(nvars)): 1})

    @classmethod
    def affine(cls, const, coeffs) -> "Poly":
        n = len(coeffs)
        terms = {(0,) * n: const}
        for i, c in enumerate(coeffs):
            terms[tuple(int(j == i) for j in range(n))] = c
        return cls(n, terms)

    @property
    def terms(self) -> dict[tuple[int, ...], Fraction]:
        return dict(self._terms)

    def items(self):
        return self._terms.items()

    def is_zero(self) -> bool:
        return not self._terms

    def degree(self) -> int:
        return max((sum(k) for k in self._terms), default=-1)

    def _check(self, other: "Poly"):
        if other.nvars != self.nvars:
            raise ValueError("polynomials live in different parameter spaces")

    def __add__(self, other):
        if not isinstance(other, Poly):
            other = Poly.const(self.nvars, other)
        self._check(other)
        out = dict(self._terms)
        for k, v in other._terms.items():
            out[k] = out.get(k, 0) + v
        return Poly(self.nvars, out)

    __radd__ = __add__

    def __neg__(self):
        return Poly(self.nvars, {k: -v for k, v in self._terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, Poly):
            return Poly(self.nvars, {k: v * other for k, v in self._terms.items()})
        self._check(other)
        out: dict[tuple[int, ...], Fraction] = {}
        for k1, v1 in self._terms.items():
            for k2, v2 in other._terms.items():
                k = tuple(i + j for i, j in zip(k1, k2))
                out[k] = out.get(k, 0) + v1 * v2
        return Poly(self.nvars, out)

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "Poly":
        result = Poly.const(self.nvars, 1)
        for _ in range(n):
            result = result * self
        return result

    def __eq__(self, other):
        if not isinstance(other, Poly):
            other = Poly.const(self.nvars, other)
        return self.nvars == other.nvars and self._terms == other._terms

    def __hash__(self):
        return hash((self.nvars, tuple(self._terms.items())))

    def __repr__(self):
        return f"Poly({self.nvars}, {self._terms})"

    def divexact(self, d: "Poly") -> "Poly":
        """Exact quotient ``self / d``; raises if ``d`` does not divide."""
        self._check(d)
        if d.is_zero():
            raise ZeroDivisionError("division by the zero polynomial")
        lk = max(d._terms)
        lv = d._terms[lk]
        rem = dict(self._terms)
        quot: dict[tuple[int, ...], Fraction] = {}
        while rem:
            k = max(rem)
            if any(i < j for i, j in zip(k, lk)):
                raise NotDivisibleByError(self, d)
            m = tuple(i - j for i, j in zip(k, lk))
            f = rem[k] / lv
            quot[m] = f
            for dk, dv in d._terms.items():
                kk = tuple(i + j for i, j in zip(m, dk))
                s = rem.get(kk, 0) - f * dv
                if s:
                    rem[kk] = s
                else:
                    rem.pop(kk, None)
        return Poly(self.nvars, quot)

    def compose(self, subs: list["Poly"]) -> "Poly":
        """Substitute polynomial ``subs[i]`` for variable ``i``."""
        if len(subs) != self.nvars:
            raise ValueError("need one substitution per variable")
        n = subs[0].nvars if subs else 0
        out = Poly(n)
        for k, v in self._terms.items():
            term = Poly.const(n, v)
            for s, e in zip(subs, k):
                term = term * s ** e
            out = out + term
        return out

    def __call__(self, *args):
        total = Fraction(0)
        for k, v in self._terms.items():
            t = v
            for x, e in zip(args, k):
                t = t * x ** e
            total += t
        return total


class NotDivisibleByError(ArithmeticError):
    def __init__(self, p, d):
        super().__init__(f"{d!r} does not divide {p!r}")


@dataclass(frozen=True)
class Entity:
    kind: str
    id: int
    vertices: tuple[int, ...]
    origin: tuple[Fraction, Fraction, Fraction]
    directions: tuple[tuple[Fraction, Fraction, Fraction], ...]

    @property
    def dim(self) -> int:
        return KIND_DIM[self.kind]

    @property
    def name(self) -> str:
        return f"{self.kind}{self.id}"

    def param(self, *params):
        if len(params) != len(self.directions):
            raise ValueError(f"{self.name} takes {len(self.directions)} parameters")
        return tuple(
            o + sum(p * d[i] for p, d in zip(params, self.directions))
            for i, o in enumerate(self.origin)
        )

    def coordinate_polys(self) -> list[Poly]:
        """Reference coordinates ``(xi, eta, zeta)`` as affine polys in the parameters."""
        return [
            Poly.affine(self.origin[i], [d[i] for d in self.directions]) for i in range(3)
        ]

    def local_coords(self, point) -> tuple[Fraction, ...]:
        """Parameters of a reference point lying on this entity."""
        n = len(self.directions)
        rhs = [Fraction(point[i]) - self.origin[i] for i in range(3)]
        if n == 0:
            return ()
        # pick n coordinate rows that determine the parameters
        rows = _independent_rows(self.directions)
        mat = [[self.directions[j][i] for j in range(n)] for i in rows]
        vec = [rhs[i] for i in rows]
        sol = _solve_small(mat, vec)
        if tuple(Fraction(c) for c in self.param(*sol)) != tuple(Fraction(c) for c in point):
            raise GeometryError(f"point {point} is not on {self.name}")
        return tuple(sol)


def _independent_rows(dirs) -> list[int]:
    n = len(dirs)
    for rows in ((0, 1), (0, 2), (1, 2)) if n == 2 else ((0,), (1,), (2,)) if n == 1 else ((0, 1, 2),):
        mat = [[dirs[j][i] for j in range(n)] for i in rows]
        if _det_small(mat) != 0:
            return list(rows)
    raise GeometryError("degenerate entity parameterization")


def _det_small(m) -> Fraction:
    n = len(m)
    if n == 1:
        return Fraction(m[0][0])
    if n == 2:
        return Fraction(m[0][0] * m[1][1] - m[0][1] * m[1][0])
    return Fraction(
        m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
        - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
        + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
    )


def _solve_small(m, v) -> list[Fraction]:
    # Cramer's rule; only used for 1x1..3x3 systems
    d = _det_small(m)
    n = len(m)
    out = []
    for j in range(n):
        mj = [[v[i] if k == j else m[i][k] for k in range(n)] for i in range(n)]
        out.append(_det_small(mj) / d)
    return out


def _make_entity(kind: str, eid: int, verts: tuple[int, ...]) -> Entity:
    pts = [tuple(Fraction(c) for c in VERTICES[v]) for v in verts]
    origin = pts[0]
    if kind == "vertex":
        dirs = ()
    elif kind == "quad":
        dirs = ((Fraction(1), Fraction(0), Fraction(0)), (Fraction(0), Fraction(1), Fraction(0)))
    elif kind == "interior":
        dirs = tuple(tuple(Fraction(int(i == j)) for i in range(3)) for j in range(3))
    else:
        dirs = tuple(tuple(p[i] - origin[i] for i in range(3)) for p in pts[1:])
    return Entity(kind, eid, tuple(verts), origin, dirs)


@lru_cache(maxsize=None)
def reference_entities() -> tuple[Entity, ...]:
    ents = [_make_entity("vertex", i, (i,)) for i in range(5)]
    ents += [_make_entity("edge", i, e) for i, e in enumerate(EDGES)]
    ents += [_make_entity("tri", i, t) for i, t in enumerate(TRIANGLES)]
    ents.append(_make_entity("quad", 0, QUAD))
    ents.append(_make_entity("interior", 0, (0, 1, 2, 3, 4)))
    return tuple(ents)


def entity(kind: str, eid: int = 0) -> Entity:
    for e in reference_entities():
        if e.kind == kind and e.id == eid:
            return e
    raise KeyError(f"no entity {kind}{eid}")


def entities_of_kind(kind: str) -> list[Entity]:
    return [e for e in reference_entities() if e.kind == kind]


def boundary_entities() -> list[Entity]:
    return [e for e in reference_entities() if e.kind != "interior"]


def faces() -> list[Entity]:
    return entities_of_kind("tri") + entities_of_kind("quad")


def closure(ent: Entity) -> list[Entity]:
    """The entity together with all lower-dimensional entities on it."""
    vs = set(ent.vertices)
    return [e for e in reference_entities() if e.dim <= ent.dim and set(e.vertices) <= vs]


@lru_cache(maxsize=None)
def _entity_polys(ent: Entity):
    xi, eta, zeta = ent.coordinate_polys()
    return xi, eta, 1 - zeta


def trace_on_entity(u: RatFun, ent: Entity):
    """Restriction of ``u`` to ``ent`` as a polynomial in the entity parameters.

    Vertices return an exact number, the interior returns ``u`` itself.  Terms
    with a negative power of ``(1 - zeta)`` are gathered over a common
    denominator which must divide out exactly.
    """
    if ent.kind == "vertex":
        return evaluate(u, VERTICES[ent.vertices[0]])
    if ent.kind == "interior":
        return u
    xi, eta, w = _entity_polys(ent)
    n = xi.nvars
    numer = Poly(n)
    negative: dict[int, Poly] = {}
    for (a, b, c), v in u.items():
        if a and xi.is_zero() or b and eta.is_zero():
            continue
        e = c - a - b
        mono = xi ** a * eta ** b * v
        if e >= 0:
            numer = numer + mono * w ** e
        else:
            negative[-e] = negative.get(-e, Poly(n)) + mono
    if not negative:
        return numer
    top = max(negative)
    total = numer * w ** top
    for k, p in negative.items():
        total = total + p * w ** (top - k)
    try:
        for _ in range(top):
            total = total.divexact(w)
    except (NotDivisibleByError, ZeroDivisionError):
        raise NonPolynomialTraceError(f"trace of {u!r} on {ent.name} is not a polynomial") from None
    return total


def integrate_param(p: Poly, kind: str) -> Fraction:
    """Integral over the parameter domain of an edge, triangle or quad."""
    total = Fraction(0)
    for k, v in p.items():
        if kind == "edge":
            total += v / (k[0] + 1)
        elif kind == "tri":
            i, j = k
            total += v * Fraction(factorial(i) * factorial(j), factorial(i + j + 2))
        elif kind == "quad":
            i, j = k
            total += v / ((i + 1) * (j + 1))
        else:
            raise ValueError(f"no parameter-domain integral for {kind}")
    return total


@dataclass(frozen=True)
class AffinePyramid:
    """Physical pyramid ``K = F(K_ref)`` with ``F(p) = offset + matrix @ p``."""

    vertices: tuple[tuple[Fraction, Fraction, Fraction], ...]
    matrix: tuple[tuple[Fraction, ...], ...]
    offset: tuple[Fraction, Fraction, Fraction]
    inverse: tuple[tuple[Fraction, ...], ...]
    det: Fraction

    def to_physical(self, p):
        return tuple(
            self.offset[i] + sum(self.matrix[i][j] * p[j] for j in range(3)) for i in range(3)
        )

    def to_reference(self, x):
        d = [x[i] - self.offset[i] for i in range(3)]
        return tuple(sum(self.inverse[i][j] * d[j] for j in range(3)) for i in range(3))

    def gradient_to_physical(self, g):
        """Map a reference gradient to the physical one (``A^-T g``)."""
        return tuple(sum(self.inverse[j][i] * g[j] for j in range(3)) for i in range(3))


def affine_pyramid(vertices) -> AffinePyramid:
    """Validate five physical vertices and build the affine map from the reference pyramid.

    Vertices follow the reference numbering: base ``v0..v3`` in cyclic order
    and apex ``v4``.
    """
    if len(vertices) != 5:
        raise GeometryError("a pyramid needs exactly five vertices")
    vs = tuple(tuple(Fraction(c) for c in v) for v in vertices)
    if any(len(v) != 3 for v in vs):
        raise GeometryError("vertices must be points in 3-space")
    v0, v1, v2, v3, v4 = vs
    if any(v0[i] + v2[i] != v1[i] + v3[i] for i in range(3)):
        raise GeometryError("base is not a parallelogram: v0 + v2 != v1 + v3")
    cols = [[v[i] - v0[i] for i in range(3)] for v in (v1, v3, v4)]
    mat = [[cols[j][i] for j in range(3)] for i in range(3)]
    det = _det_small(mat)
    if det == 0:
        raise GeometryError("degenerate pyramid: apex lies in the base plane")
    inv = [[Fraction(0)] * 3 for _ in range(3)]
    for i in range(3):
        for j in range(3):
            minor = [[mat[r][c] for c in range(3) if c != i] for r in range(3) if r != j]
            inv[i][j] = (-1) ** (i + j) * _det_small(minor) / det
    return AffinePyramid(
        vertices=vs,
        matrix=tuple(tuple(r) for r in mat),
        offset=v0,
        inverse=tuple(tuple(r) for r in inv),
        det=det,
    )
