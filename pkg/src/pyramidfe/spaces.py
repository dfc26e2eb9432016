"""Shape spaces of the two pyramid families.

Family ``YMINUS`` uses the span of ``x^a y^b / (1+z)^c`` with
``0 <= a, b <= c <= r``; family ``Y`` keeps only the terms whose numerator has
superlinear degree at most ``c``, which makes its base trace a serendipity
space.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass, field
from functools import lru_cache
from math import comb
from typing import Iterable

from .ratfun import ONE, RatFun, X, Y, Z_OVER_1PZ


class Family(enum.Enum):
    YMINUS = "ym"
    Y = "y"

    @classmethod
    def parse(cls, value) -> "Family":
        if isinstance(value, Family):
            return value
        key = str(value).strip().lower()
        aliases = {"ym": cls.YMINUS, "yminus": cls.YMINUS, "y-": cls.YMINUS, "y": cls.Y}
        try:
            return aliases[key]
        except KeyError:
            raise ValueError(f"unknown family {value!r}; expected 'ym' or 'y'") from None


@dataclass(frozen=True)
class SpaceSpec:
    family: Family
    order: int

    def __post_init__(self):
        object.__setattr__(self, "family", Family.parse(self.family))
        if isinstance(self.order, bool) or not isinstance(self.order, int):
            raise TypeError(f"order must be an int, got {self.order!r}")
        if self.order < 1:
            raise ValueError(f"order must be >= 1, got {self.order}")

    @property
    def r(self) -> int:
        return self.order

    def __str__(self) -> str:
        return f"{self.family.value}{self.order}"


@dataclass(frozen=True)
class ShapeBasis:
    spec: SpaceSpec
    keys: tuple[tuple[int, int, int], ...]
    functions: tuple[RatFun, ...] = field(repr=False)

    def __len__(self) -> int:
        return len(self.functions)

    def __iter__(self):
        return iter(self.functions)

    def __getitem__(self, i):
        return self.functions[i]

    def graded_piece(self, j: int) -> list[tuple[int, int, int]]:
        """Keys with denominator exponent exactly ``j``."""
        return [k for k in self.keys if k[2] == j]


def sldeg(exponents: Iterable[int]) -> int:
    """Superlinear degree: the sum of the exponents that are not 1."""
    return sum(a for a in exponents if a != 1)


def shape_keys(family, order: int) -> list[tuple[int, int, int]]:
    """Exponent triples spanning the shape space, sorted by ``(c, a, b)``.

    ``order == 0`` is accepted here (it gives the constants) because the
    interior index spaces need the order ``r-3`` and ``r-5`` spaces.
    """
    family = Family.parse(family)
    if order < 0:
        return []
    keys = []
    for c in range(order + 1):
        for a in range(c + 1):
            for b in range(c + 1):
                if family is Family.Y and sldeg((a, b)) > c:
                    continue
                keys.append((a, b, c))
    return keys


def total_degree_keys(order: int) -> list[tuple[int, int, int]]:
    """Keys of ``xi^a eta^b (1-zeta)^e`` with ``a + b + e <= order``.

    This is the polynomial space of degree ``order`` on the reference pyramid,
    written with ``c = a + b + e``.
    """
    return [(a, b, c) for c in range(order + 1) for a in range(c + 1) for b in range(c + 1 - a)]


@lru_cache(maxsize=None)
def build_shape_basis(spec: SpaceSpec) -> ShapeBasis:
    keys = tuple(shape_keys(spec.family, spec.order))
    return ShapeBasis(spec, keys, tuple(RatFun.monomial(*k) for k in keys))


def dimension(spec: SpaceSpec) -> int:
    r = spec.order
    if spec.family is Family.YMINUS:
        num = 2 * r ** 3 + 9 * r ** 2 + 13 * r + 6
    else:
        num = r ** 3 + 6 * r ** 2 + 23 * r
    assert num % 6 == 0
    return num // 6


def interior_dof_count(spec: SpaceSpec) -> int:
    r = spec.order
    if spec.family is Family.YMINUS:
        return (2 * r - 3) * (r - 2) * (r - 1) // 6 if r >= 3 else 0
    return comb(r - 2, 3) if r >= 5 else 0


def bubble() -> RatFun:
    """``x(1-x) y(1-y) z / (1+z)^3``, the lowest-order boundary bubble."""
    return X * (ONE - X) * Y * (ONE - Y) * Z_OVER_1PZ * RatFun.monomial(0, 0, 2)


def serendipity_bubble() -> RatFun:
    """``x(1-x) y(1-y) z / (1+z)^5``.

    On the reference pyramid this is the polynomial
    ``xi eta zeta (xi+zeta-1)(eta+zeta-1)``; it is the lowest-order member of
    the ``Y`` shape spaces vanishing on the boundary (order 5).
    """
    return bubble() * RatFun.monomial(0, 0, 2)


def interior_multiplier_keys(spec: SpaceSpec) -> list[tuple[int, int, int]]:
    """Keys ``q`` such that ``bubble() * q`` spans the interior weights.

    ``YMINUS`` uses the full order ``r-3`` shape space.  ``Y`` uses the degree
    ``r-5`` polynomials in ``(xi, eta, 1-zeta)``, which is the space whose
    dimension ``C(r-2, 3)`` closes the dimension count.
    """
    r = spec.order
    if spec.family is Family.YMINUS:
        return shape_keys(Family.YMINUS, r - 3)
    return total_degree_keys(r - 5)


def interior_index_space(spec: SpaceSpec) -> list[RatFun]:
    b = bubble()
    return [b * RatFun.monomial(*k) for k in interior_multiplier_keys(spec)]


def in_shape_space(u: RatFun, spec: SpaceSpec) -> bool:
    allowed = set(build_shape_basis(spec).keys)
    return all(k in allowed for k in u.keys())
