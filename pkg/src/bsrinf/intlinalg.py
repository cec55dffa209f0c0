"""Exact integer linear algebra.

Matrices hold Python ints, so every computation is exact regardless of
entry size.  The Smith normal form routine always returns unimodular
transformation matrices ``U`` and ``V`` with ``U @ A @ V == D``.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import gcd
from typing import Iterable, Sequence

from .errors import DimensionMismatch, InvalidInput, NonCoprimeInput, NotSquare

__all__ = [
    "IntMatrix",
    "SnfResult",
    "snf",
    "determinant",
    "solve_in_lattice",
    "bidiagonal_matrix",
    "bidiagonal_snf_closed_form",
]


@dataclass(frozen=True)
class IntMatrix:
    rows: int
    cols: int
    entries: tuple[int, ...]

    def __post_init__(self):
        if self.rows < 0 or self.cols < 0:
            raise InvalidInput("negative matrix dimension")
        if len(self.entries) != self.rows * self.cols:
            raise DimensionMismatch(
                f"{len(self.entries)} entries for a {self.rows}x{self.cols} matrix"
            )

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[int]]) -> IntMatrix:
        rows = [list(r) for r in rows]
        ncols = len(rows[0]) if rows else 0
        if any(len(r) != ncols for r in rows):
            raise DimensionMismatch("ragged rows")
        return cls(len(rows), ncols, tuple(int(x) for r in rows for x in r))

    @classmethod
    def from_columns(cls, columns: Sequence[Sequence[int]], nrows: int | None = None) -> IntMatrix:
        if not columns:
            return cls(nrows or 0, 0, ())
        n = len(columns[0])
        if any(len(c) != n for c in columns):
            raise DimensionMismatch("ragged columns")
        return cls.from_rows([[c[i] for c in columns] for i in range(n)])

    @classmethod
    def identity(cls, n: int) -> IntMatrix:
        return cls(n, n, tuple(1 if i == j else 0 for i in range(n) for j in range(n)))

    @classmethod
    def zeros(cls, rows: int, cols: int) -> IntMatrix:
        return cls(rows, cols, (0,) * (rows * cols))

    @property
    def shape(self) -> tuple[int, int]:
        return (self.rows, self.cols)

    @property
    def is_square(self) -> bool:
        return self.rows == self.cols

    def __getitem__(self, ij: tuple[int, int]) -> int:
        i, j = ij
        return self.entries[i * self.cols + j]

    def row(self, i: int) -> tuple[int, ...]:
        return self.entries[i * self.cols:(i + 1) * self.cols]

    def col(self, j: int) -> tuple[int, ...]:
        return self.entries[j::self.cols] if self.cols else ()

    def tolist(self) -> list[list[int]]:
        return [list(self.row(i)) for i in range(self.rows)]

    def transpose(self) -> IntMatrix:
        return IntMatrix.from_rows([self.col(j) for j in range(self.cols)]) if self.cols else IntMatrix(0, self.rows, ())

    def __matmul__(self, other: IntMatrix) -> IntMatrix:
        if not isinstance(other, IntMatrix):
            return NotImplemented
        if self.cols != other.rows:
            raise DimensionMismatch(f"cannot multiply {self.shape} by {other.shape}")
        ocols = [other.col(j) for j in range(other.cols)]
        out = []
        for i in range(self.rows):
            r = self.row(i)
            out.extend(sum(a * b for a, b in zip(r, c)) for c in ocols)
        return IntMatrix(self.rows, other.cols, tuple(out))

    def matvec(self, v: Sequence[int]) -> tuple[int, ...]:
        if len(v) != self.cols:
            raise DimensionMismatch(f"vector of length {len(v)} for {self.shape} matrix")
        return tuple(sum(a * b for a, b in zip(self.row(i), v)) for i in range(self.rows))

    def __add__(self, other: IntMatrix) -> IntMatrix:
        if self.shape != other.shape:
            raise DimensionMismatch(f"cannot add {self.shape} and {other.shape}")
        return IntMatrix(self.rows, self.cols, tuple(a + b for a, b in zip(self.entries, other.entries)))

    def __sub__(self, other: IntMatrix) -> IntMatrix:
        if self.shape != other.shape:
            raise DimensionMismatch(f"cannot subtract {self.shape} and {other.shape}")
        return IntMatrix(self.rows, self.cols, tuple(a - b for a, b in zip(self.entries, other.entries)))

    def __rmul__(self, k: int) -> IntMatrix:
        if not isinstance(k, int):
            return NotImplemented
        return IntMatrix(self.rows, self.cols, tuple(k * a for a in self.entries))

    def __neg__(self) -> IntMatrix:
        return IntMatrix(self.rows, self.cols, tuple(-a for a in self.entries))

    def __repr__(self) -> str:
        return f"IntMatrix({self.tolist()})"


@dataclass(frozen=True)
class SnfResult:
    """``U @ A @ V == D`` with ``U``, ``V`` unimodular and ``D`` diagonal.

    ``divisors`` lists the diagonal of ``D`` (length ``min(rows, cols)``),
    nonnegative, each dividing the next; zeros come last.
    """

    U: IntMatrix
    D: IntMatrix
    V: IntMatrix
    divisors: tuple[int, ...]

    @property
    def rank(self) -> int:
        return sum(1 for d in self.divisors if d != 0)


def _swap_rows(a, i, j):
    a[i], a[j] = a[j], a[i]


def _swap_cols(a, i, j):
    for r in a:
        r[i], r[j] = r[j], r[i]


def _add_row(a, src, dst, q):
    # row[dst] += q * row[src]
    rs, rd = a[src], a[dst]
    for k in range(len(rd)):
        rd[k] += q * rs[k]


def _add_col(a, src, dst, q):
    for r in a:
        r[dst] += q * r[src]


def snf(a: IntMatrix) -> SnfResult:
    """Smith normal form with unimodular witnesses.

    Pivots on the entry of least absolute value in the remaining block,
    which keeps intermediate entries small without randomisation.
    """
    if a.rows == 0 or a.cols == 0:
        raise InvalidInput("snf of an empty matrix")
    m, n = a.rows, a.cols
    d = a.tolist()
    # u records row operations, v column operations
    u = IntMatrix.identity(m).tolist()
    v = IntMatrix.identity(n).tolist()

    for t in range(min(m, n)):
        while True:
            best = None
            for i in range(t, m):
                row = d[i]
                for j in range(t, n):
                    x = row[j]
                    if x and (best is None or abs(x) < best[0]):
                        best = (abs(x), i, j)
                        if best[0] == 1:
                            break
                if best is not None and best[0] == 1:
                    break
            if best is None:
                break
            _, pi, pj = best
            if pi != t:
                _swap_rows(d, t, pi)
                _swap_rows(u, t, pi)
            if pj != t:
                _swap_cols(d, t, pj)
                _swap_cols(v, t, pj)
            p = d[t][t]
            dirty = False
            for i in range(t + 1, m):
                if d[i][t]:
                    q = d[i][t] // p
                    _add_row(d, t, i, -q)
                    _add_row(u, t, i, -q)
                    dirty = dirty or d[i][t] != 0
            for j in range(t + 1, n):
                if d[t][j]:
                    q = d[t][j] // p
                    _add_col(d, t, j, -q)
                    _add_col(v, t, j, -q)
                    dirty = dirty or d[t][j] != 0
            if dirty:
                continue
            bad = None
            for i in range(t + 1, m):
                for j in range(t + 1, n):
                    if d[i][j] % p:
                        bad = i
                        break
                if bad is not None:
                    break
            if bad is None:
                break
            # pull the offending row into the pivot row, then re-pivot
            _add_row(d, bad, t, 1)
            _add_row(u, bad, t, 1)
        if d[t][t] < 0:
            d[t] = [-x for x in d[t]]
            u[t] = [-x for x in u[t]]

    k = min(m, n)
    divisors = tuple(d[i][i] for i in range(k))
    return SnfResult(
        U=IntMatrix.from_rows(u),
        D=IntMatrix.from_rows(d),
        V=IntMatrix.from_rows(v),
        divisors=divisors,
    )


def determinant(a: IntMatrix) -> int:
    """Exact determinant by fraction-free (Bareiss) elimination."""
    if not a.is_square:
        raise NotSquare(f"determinant of a {a.rows}x{a.cols} matrix")
    n = a.rows
    if n == 0:
        return 1
    m = a.tolist()
    sign = 1
    prev = 1
    for k in range(n - 1):
        if m[k][k] == 0:
            for i in range(k + 1, n):
                if m[i][k]:
                    m[k], m[i] = m[i], m[k]
                    sign = -sign
                    break
            else:
                return 0
        pivot = m[k][k]
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                m[i][j] = (m[i][j] * pivot - m[i][k] * m[k][j]) // prev
        prev = pivot
    return sign * m[n - 1][n - 1]


def solve_in_lattice(a: IntMatrix, v: Sequence[int], *, witness: SnfResult | None = None) -> tuple[int, ...] | None:
    """Return an integer ``x`` with ``a @ x == v``, or ``None`` if none exists."""
    if len(v) != a.rows:
        raise DimensionMismatch(f"right-hand side of length {len(v)} for {a.shape} matrix")
    if a.cols == 0:
        return () if not any(v) else None
    res = witness if witness is not None else snf(a)
    w = res.U.matvec(v)
    y = [0] * a.cols
    for i, wi in enumerate(w):
        di = res.divisors[i] if i < len(res.divisors) else 0
        if di == 0:
            if wi:
                return None
        else:
            if wi % di:
                return None
            y[i] = wi // di
    x = res.V.matvec(y)
    assert a.matvec(x) == tuple(v)
    return x


def bidiagonal_matrix(a: int, b: int, n: int, k: int = 1) -> IntMatrix:
    """Lower bidiagonal ``n x n`` matrix: ``a`` on the diagonal, ``b`` below it,
    and ``a**k`` in the top-left corner."""
    if n < 1 or k < 1:
        raise InvalidInput("need n >= 1 and k >= 1")
    rows = [[0] * n for _ in range(n)]
    for i in range(n):
        rows[i][i] = a
        if i:
            rows[i][i - 1] = b
    rows[0][0] = a ** k
    return IntMatrix.from_rows(rows)


def bidiagonal_snf_closed_form(a: int, b: int, n: int, k: int = 1) -> list[int]:
    """Invariant factors of :func:`bidiagonal_matrix` for coprime ``a, b``:
    ``n - 1`` ones followed by ``|a|**(n - 1 + k)``."""
    if n < 1 or k < 1:
        raise InvalidInput("need n >= 1 and k >= 1")
    if gcd(a, b) != 1:
        raise NonCoprimeInput(f"gcd({a}, {b}) = {gcd(a, b)}")
    return [1] * (n - 1) + [abs(a) ** (n - 1 + k)]


def is_unimodular(a: IntMatrix) -> bool:
    return a.is_square and abs(determinant(a)) == 1


def diagonal(values: Iterable[int]) -> IntMatrix:
    values = list(values)
    n = len(values)
    return IntMatrix(n, n, tuple(values[i] if i == j else 0 for i in range(n) for j in range(n)))
