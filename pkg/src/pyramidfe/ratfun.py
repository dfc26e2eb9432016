"""Exact rational functions on the infinite and reference pyramids.

A :class:`RatFun` is a finite sum of terms ``coeff * x**a * y**b / (1+z)**c``
on the infinite pyramid ``K_inf = [0,1]^2 x [0,inf]``.  Under the change of
coordinates ``(xi, eta, zeta) = (x, y, z) / (1 + z)`` the same term reads
``coeff * xi**a * eta**b * (1-zeta)**(c-a-b)`` on the reference pyramid
``{0 <= xi, eta, zeta; xi <= 1-zeta; eta <= 1-zeta}``, so one dictionary keyed
by ``(a, b, c)`` represents both pictures at once.
"""
from __future__ import annotations

from fractions import Fraction
from numbers import Rational
from typing import Iterable, Iterator, Mapping, NamedTuple

from .errors import DivergentIntegralError, NoApexLimitError, OutsideReferenceError

Key = tuple[int, int, int]


class RatTerm(NamedTuple):
    coeff: Fraction
    a: int
    b: int
    c: int

    @property
    def e(self) -> int:
        """Exponent of ``(1 - zeta)`` in the reference-pyramid form."""
        return self.c - self.a - self.b


class Point3(NamedTuple):
    xi: object
    eta: object
    zeta: object


def _order(key: Key) -> tuple[int, int, int]:
    a, b, c = key
    return (c, a, b)


def _exact(value) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, (int, Rational)):
        return Fraction(value)
    # floats convert exactly; strings like "1/3" parse
    return Fraction(value)


class RatFun:
    """Immutable canonical sum of ``x^a y^b (1+z)^-c`` terms.

    Terms are merged by exponent triple, zero coefficients are dropped and the
    remaining terms are kept in ascending ``(c, a, b)`` order.
    """

    __slots__ = ("_terms", "_hash")

    def __init__(self, terms: Mapping[Key, object] | None = None):
        merged: dict[Key, Fraction] = {}
        if terms:
            for key, coeff in terms.items():
                a, b, c = key
                if a < 0 or b < 0:
                    raise ValueError(f"negative x/y exponent in term {key}")
                coeff = _exact(coeff)
                if coeff:
                    merged[(int(a), int(b), int(c))] = coeff
        self._terms = {k: merged[k] for k in sorted(merged, key=_order)}
        self._hash = None

    # -- construction -------------------------------------------------------
    @classmethod
    def _raw(cls, terms: dict[Key, Fraction]) -> "RatFun":
        # caller guarantees zero-free terms with valid keys
        obj = cls.__new__(cls)
        obj._terms = {k: terms[k] for k in sorted(terms, key=_order)}
        obj._hash = None
        return obj

    @classmethod
    def constant(cls, value=1) -> "RatFun":
        return cls({(0, 0, 0): value})

    @classmethod
    def monomial(cls, a: int, b: int, c: int, coeff=1) -> "RatFun":
        """``coeff * x^a y^b / (1+z)^c`` on the infinite pyramid."""
        return cls({(a, b, c): coeff})

    @classmethod
    def reference_monomial(cls, a: int, b: int, e: int, coeff=1) -> "RatFun":
        """``coeff * xi^a eta^b (1-zeta)^e`` on the reference pyramid."""
        return cls({(a, b, a + b + e): coeff})

    @classmethod
    def from_reference(cls, terms: Mapping[tuple[int, int, int], object]) -> "RatFun":
        """Build from a ``{(a, b, e): coeff}`` map in reference coordinates."""
        return cls({(a, b, a + b + e): v for (a, b, e), v in terms.items()})

    # -- views --------------------------------------------------------------
    @property
    def terms(self) -> Mapping[Key, Fraction]:
        return dict(self._terms)

    def items(self) -> Iterator[tuple[Key, Fraction]]:
        return iter(self._terms.items())

    def keys(self) -> list[Key]:
        return list(self._terms)

    def rat_terms(self) -> list[RatTerm]:
        return [RatTerm(v, a, b, c) for (a, b, c), v in self._terms.items()]

    def to_reference(self) -> dict[tuple[int, int, int], Fraction]:
        """Return ``{(a, b, e): coeff}`` with ``e = c - a - b``."""
        return {(a, b, c - a - b): v for (a, b, c), v in self._terms.items()}

    def coefficient(self, a: int, b: int, c: int) -> Fraction:
        return self._terms.get((a, b, c), Fraction(0))

    def is_zero(self) -> bool:
        return not self._terms

    def __len__(self) -> int:
        return len(self._terms)

    def __bool__(self) -> bool:
        return bool(self._terms)

    # -- arithmetic ---------------------------------------------------------
    def __add__(self, other) -> "RatFun":
        other = _coerce(other)
        if other is NotImplemented:
            return other
        out = dict(self._terms)
        for k, v in other._terms.items():
            s = out.get(k, 0) + v
            if s:
                out[k] = s
            else:
                out.pop(k, None)
        return RatFun._raw(out)

    __radd__ = __add__

    def __neg__(self) -> "RatFun":
        return RatFun._raw({k: -v for k, v in self._terms.items()})

    def __sub__(self, other) -> "RatFun":
        other = _coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other) -> "RatFun":
        return (-self) + other

    def __mul__(self, other) -> "RatFun":
        if isinstance(other, RatFun):
            return multiply(self, other)
        if isinstance(other, (int, Rational)):
            s = Fraction(other)
            if not s:
                return RatFun()
            return RatFun._raw({k: v * s for k, v in self._terms.items()})
        return NotImplemented

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "RatFun":
        if n < 0:
            raise ValueError("negative powers are outside the algebra")
        result, base = RatFun.constant(1), self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __eq__(self, other) -> bool:
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(tuple(self._terms.items()))
        return self._hash

    def __repr__(self) -> str:
        if not self._terms:
            return "RatFun(0)"
        parts = [f"{v}*x^{a}y^{b}/(1+z)^{c}" for (a, b, c), v in self._terms.items()]
        return "RatFun(" + " + ".join(parts) + ")"


def _coerce(value):
    if isinstance(value, RatFun):
        return value
    if isinstance(value, (int, Rational)):
        return RatFun.constant(value)
    return NotImplemented


def canonicalize(terms: Iterable) -> RatFun:
    """Merge an iterable of ``RatTerm`` (or ``(coeff, a, b, c)`` tuples)."""
    out: dict[Key, Fraction] = {}
    for coeff, a, b, c in terms:
        key = (a, b, c)
        out[key] = out.get(key, Fraction(0)) + _exact(coeff)
    return RatFun(out)


def multiply(f: RatFun, g: RatFun) -> RatFun:
    out: dict[Key, Fraction] = {}
    for (a1, b1, c1), v1 in f._terms.items():
        for (a2, b2, c2), v2 in g._terms.items():
            k = (a1 + a2, b1 + b2, c1 + c2)
            out[k] = out.get(k, 0) + v1 * v2
    return RatFun._raw({k: v for k, v in out.items() if v})


# Commonly used functions, in both coordinate pictures.
ONE = RatFun.constant(1)
XI = RatFun.monomial(1, 0, 1)
ETA = RatFun.monomial(0, 1, 1)
ONE_MINUS_ZETA = RatFun.monomial(0, 0, 1)
ZETA = ONE - ONE_MINUS_ZETA
X = RatFun.monomial(1, 0, 0)
Y = RatFun.monomial(0, 1, 0)
Z_OVER_1PZ = ZETA  # z/(1+z) = 1 - 1/(1+z)


def reference_polynomial(a: int, b: int, c: int) -> RatFun:
    """The polynomial ``xi^a eta^b zeta^c`` as a RatFun."""
    return RatFun.reference_monomial(a, b, 0) * ZETA ** c


def term_integral(a: int, b: int, c: int) -> Fraction:
    """Integral of ``xi^a eta^b (1-zeta)^(c-a-b)`` over the reference pyramid.

    The inner integrals give ``(1-zeta)^(a+1) / (a+1)`` and the same for eta,
    leaving ``int_0^1 (1-zeta)^(c+2) d zeta``, which converges iff ``c > -3``.
    """
    if c + 3 <= 0:
        raise DivergentIntegralError(f"term x^{a} y^{b} (1+z)^-{c} is not integrable on the pyramid")
    return Fraction(1, (a + 1) * (b + 1) * (c + 3))


def integrate_reference(u: RatFun) -> Fraction:
    """Exact integral of ``u`` over the reference pyramid."""
    return sum((v * term_integral(*k) for k, v in u.items()), Fraction(0))


def in_reference(p, tol=0) -> bool:
    xi, eta, zeta = p
    return (
        xi >= -tol and eta >= -tol and zeta >= -tol
        and xi <= 1 - zeta + tol and eta <= 1 - zeta + tol
    )


def check_point(p) -> Point3:
    p = Point3(*p)
    if not in_reference(p):
        raise OutsideReferenceError(f"point {tuple(p)} is not in the reference pyramid")
    return p


def apex_limit(u: RatFun):
    """Limit of ``u`` at the apex, or ``None`` if no continuous extension exists.

    Approaching the apex means ``z -> inf`` with ``(x, y)`` free in the unit
    square; terms with ``c > 0`` vanish, so the limit exists iff every term with
    ``c <= 0`` is the constant term.
    """
    value = Fraction(0)
    for (a, b, c), v in u.items():
        if c > 0:
            continue
        if c < 0 or a or b:
            return None
        value += v
    return value


def evaluate(u: RatFun, p):
    """Value of ``u`` at a reference point ``p = (xi, eta, zeta)``.

    Exact for rational coordinates, float for float coordinates.  At the apex
    the continuous extension is returned.
    """
    # ints become Fractions: int ** negative int would silently give a float
    xi, eta, zeta = (Fraction(v) if isinstance(v, int) else v for v in check_point(p))
    if zeta == 1:
        value = apex_limit(u)
        if value is None:
            raise NoApexLimitError(f"{u!r} has no limit at the apex")
        return value
    w = 1 - zeta
    total = 0
    for (a, b, c), v in u.items():
        total += v * xi ** a * eta ** b * w ** (c - a - b)
    return Fraction(total) if isinstance(total, int) else total


def gradient(u: RatFun) -> tuple[RatFun, RatFun, RatFun]:
    """Partial derivatives with respect to ``(xi, eta, zeta)``.

    ``d/dxi`` maps key ``(a, b, c)`` to ``a * (a-1, b, c-1)``; ``d/dzeta``
    maps it to ``-(c-a-b) * (a, b, c-1)``.
    """
    dxi: dict[Key, Fraction] = {}
    deta: dict[Key, Fraction] = {}
    dzeta: dict[Key, Fraction] = {}
    for (a, b, c), v in u.items():
        if a:
            dxi[(a - 1, b, c - 1)] = dxi.get((a - 1, b, c - 1), 0) + a * v
        if b:
            deta[(a, b - 1, c - 1)] = deta.get((a, b - 1, c - 1), 0) + b * v
        e = c - a - b
        if e:
            dzeta[(a, b, c - 1)] = dzeta.get((a, b, c - 1), 0) - e * v
    return RatFun(dxi), RatFun(deta), RatFun(dzeta)
