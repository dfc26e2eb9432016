"""Dense exact linear algebra over the rationals.

Determinants and inverses use fraction-free (Bareiss) elimination on an
integer copy of the matrix: every row is first scaled by the lcm of its
denominators, so all intermediate pivots are exact integer minors.  Pivots are
always the first nonzero entry in the pivot column, which keeps results
deterministic.
"""
from __future__ import annotations

from fractions import Fraction
from math import lcm
from typing import Iterable, Sequence

from .errors import SingularSystemError

try:  # GMP integers make the Bareiss updates several times faster
    from gmpy2 import mpz as _bigint
except ImportError:  # pragma: no cover
    _bigint = int


class ExactMatrix:
    """Row-major matrix of ``Fraction`` entries."""

    __slots__ = ("rows", "nrows", "ncols")

    def __init__(self, rows: Iterable[Sequence], ncols: int | None = None):
        self.rows = [[Fraction(v) for v in row] for row in rows]
        self.nrows = len(self.rows)
        if ncols is None:
            ncols = len(self.rows[0]) if self.rows else 0
        if any(len(r) != ncols for r in self.rows):
            raise ValueError("ragged matrix")
        self.ncols = ncols

    @classmethod
    def identity(cls, n: int) -> "ExactMatrix":
        return cls([[int(i == j) for j in range(n)] for i in range(n)], n)

    @classmethod
    def zeros(cls, m: int, n: int) -> "ExactMatrix":
        return cls([[0] * n for _ in range(m)], n)

    @property
    def shape(self) -> tuple[int, int]:
        return (self.nrows, self.ncols)

    def __getitem__(self, ij):
        i, j = ij
        return self.rows[i][j]

    def __eq__(self, other) -> bool:
        return isinstance(other, ExactMatrix) and self.shape == other.shape and self.rows == other.rows

    def __repr__(self) -> str:
        return f"ExactMatrix({self.nrows}x{self.ncols})"

    def column(self, j: int) -> list[Fraction]:
        return [r[j] for r in self.rows]

    def transpose(self) -> "ExactMatrix":
        return ExactMatrix([list(c) for c in zip(*self.rows)] if self.rows else [], self.nrows)

    def select_rows(self, idx: Sequence[int]) -> "ExactMatrix":
        return ExactMatrix([self.rows[i] for i in idx], self.ncols)

    def hstack(self, other: "ExactMatrix") -> "ExactMatrix":
        if self.nrows != other.nrows:
            raise ValueError("row counts differ")
        return ExactMatrix([a + b for a, b in zip(self.rows, other.rows)], self.ncols + other.ncols)

    def vstack(self, other: "ExactMatrix") -> "ExactMatrix":
        if self.ncols != other.ncols:
            raise ValueError("column counts differ")
        return ExactMatrix(self.rows + other.rows, self.ncols)

    def __matmul__(self, other):
        if isinstance(other, ExactMatrix):
            if self.ncols != other.nrows:
                raise ValueError("shape mismatch")
            cols = list(zip(*other.rows))
            return ExactMatrix(
                [[sum((a * b for a, b in zip(r, c) if a and b), Fraction(0)) for c in cols] for r in self.rows],
                other.ncols,
            )
        vec = list(other)
        if len(vec) != self.ncols:
            raise ValueError("shape mismatch")
        return [sum((a * b for a, b in zip(r, vec) if a and b), Fraction(0)) for r in self.rows]

    def is_identity(self) -> bool:
        return self.nrows == self.ncols and all(
            v == (i == j) for i, r in enumerate(self.rows) for j, v in enumerate(r)
        )

    def is_symmetric(self) -> bool:
        return self.nrows == self.ncols and all(
            self.rows[i][j] == self.rows[j][i] for i in range(self.nrows) for j in range(i)
        )

    # -- elimination --------------------------------------------------------
    def _integer_rows(self):
        """Integer rows and the per-row scale factors used to clear denominators."""
        out, scales = [], []
        for r in self.rows:
            s = lcm(*(v.denominator for v in r)) if r else 1
            out.append([_bigint(v.numerator * (s // v.denominator)) for v in r])
            scales.append(s)
        return out, scales

    def det(self) -> Fraction:
        if self.nrows != self.ncols:
            raise ValueError("determinant of a non-square matrix")
        n = self.nrows
        a, scales = self._integer_rows()
        sign, prev = 1, _bigint(1)
        for k in range(n):
            piv = next((i for i in range(k, n) if a[i][k]), None)
            if piv is None:
                return Fraction(0)
            if piv != k:
                a[k], a[piv] = a[piv], a[k]
                sign = -sign
            pk, rowk = a[k][k], a[k]
            for i in range(k + 1, n):
                rowi = a[i]
                aik = rowi[k]
                if aik:
                    for j in range(k + 1, n):
                        rowi[j] = (pk * rowi[j] - aik * rowk[j]) // prev
                else:
                    for j in range(k + 1, n):
                        if rowi[j]:
                            rowi[j] = (pk * rowi[j]) // prev
            prev = pk
        denom = 1
        for s in scales:
            denom *= s
        return Fraction(sign * int(a[n - 1][n - 1]) if n else sign, denom)

    def inverse(self) -> "ExactMatrix":
        """Exact inverse by fraction-free Gauss-Jordan elimination."""
        if self.nrows != self.ncols:
            raise ValueError("inverse of a non-square matrix")
        n = self.nrows
        a, scales = self._integer_rows()
        for i in range(n):
            a[i].extend(_bigint(int(i == j)) for j in range(n))
        prev = _bigint(1)
        width = 2 * n
        for k in range(n):
            piv = next((i for i in range(k, n) if a[i][k]), None)
            if piv is None:
                raise SingularSystemError("matrix is singular")
            if piv != k:
                a[k], a[piv] = a[piv], a[k]
            pk, rowk = a[k][k], a[k]
            nz = [j for j in range(width) if j != k and rowk[j]]
            for i in range(n):
                if i == k:
                    continue
                rowi = a[i]
                aik = rowi[k]
                if aik:
                    new = [(pk * v) // prev if v else v for v in rowi]
                    for j in nz:
                        new[j] = (pk * rowi[j] - aik * rowk[j]) // prev
                    new[k] = _bigint(0)
                    a[i] = new
                else:
                    a[i] = [(pk * v) // prev if v else v for v in rowi]
            prev = pk
        # left block is now prev * I; undo the row scaling on the right (columns)
        det = prev
        return ExactMatrix(
            [[Fraction(int(a[i][n + j]) * scales[j], int(det)) for j in range(n)] for i in range(n)],
            n,
        )

    def rref(self) -> tuple["ExactMatrix", list[int]]:
        rows = [list(r) for r in self.rows]
        pivots: list[int] = []
        i = 0
        for j in range(self.ncols):
            piv = next((k for k in range(i, self.nrows) if rows[k][j]), None)
            if piv is None:
                continue
            rows[i], rows[piv] = rows[piv], rows[i]
            inv = 1 / rows[i][j]
            rows[i] = [v * inv for v in rows[i]]
            ri = rows[i]
            for k in range(self.nrows):
                if k != i and rows[k][j]:
                    f = rows[k][j]
                    rows[k] = [v - f * w if w else v for v, w in zip(rows[k], ri)]
            pivots.append(j)
            i += 1
            if i == self.nrows:
                break
        return ExactMatrix(rows, self.ncols), pivots

    def rank(self) -> int:
        if not self.rows or not self.ncols:
            return 0
        return len(self.rref()[1])

    def nullspace(self) -> list[list[Fraction]]:
        """Basis of ``{v : self @ v = 0}``, one vector per free column."""
        if not self.rows:
            return [[Fraction(int(i == j)) for i in range(self.ncols)] for j in range(self.ncols)]
        red, pivots = self.rref()
        free = [j for j in range(self.ncols) if j not in set(pivots)]
        basis = []
        for f in free:
            v = [Fraction(0)] * self.ncols
            v[f] = Fraction(1)
            for row, p in zip(red.rows, pivots):
                v[p] = -row[f]
            basis.append(v)
        return basis

    def solve(self, rhs: Sequence) -> list[Fraction]:
        if self.nrows != self.ncols:
            raise ValueError("solve needs a square matrix")
        aug = self.hstack(ExactMatrix([[v] for v in rhs], 1))
        red, pivots = aug.rref()
        if pivots != list(range(self.ncols)):
            raise SingularSystemError("matrix is singular")
        return red.column(self.ncols)

    def is_positive_definite(self) -> bool:
        """Exact test via the pivots of a symmetric LDL^T factorization."""
        if not self.is_symmetric():
            return False
        a = [list(r) for r in self.rows]
        n = self.nrows
        for k in range(n):
            if a[k][k] <= 0:
                return False
            for i in range(k + 1, n):
                f = a[i][k] / a[k][k]
                if f:
                    for j in range(k + 1, n):
                        a[i][j] -= f * a[k][j]
        return True
