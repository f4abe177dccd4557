"""Small dense exact-rational matrix helpers (row-vector convention)."""
from __future__ import annotations

from fractions import Fraction
from typing import Sequence

Row = tuple[Fraction, ...]
Mat = tuple[Row, ...]


def as_matrix(rows: Sequence[Sequence]) -> Mat:
    return tuple(tuple(Fraction(x) for x in row) for row in rows)


def identity(n: int) -> Mat:
    return tuple(tuple(Fraction(1 if i == j else 0) for j in range(n))
                 for i in range(n))


def transpose(m: Mat) -> Mat:
    return tuple(zip(*m)) if m else ()


def det(m: Mat) -> Fraction:
    n = len(m)
    a = [list(row) for row in m]
    sign = 1
    d = Fraction(1)
    for col in range(n):
        piv = next((r for r in range(col, n) if a[r][col] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != col:
            a[col], a[piv] = a[piv], a[col]
            sign = -sign
        d *= a[col][col]
        inv = 1 / a[col][col]
        for r in range(col + 1, n):
            if a[r][col] != 0:
                f = a[r][col] * inv
                for c in range(col, n):
                    a[r][c] -= f * a[col][c]
    return sign * d


def inverse(m: Mat) -> Mat:
    n = len(m)
    a = [list(row) + [Fraction(1 if i == j else 0) for j in range(n)]
         for i, row in enumerate(m)]
    for col in range(n):
        piv = next((r for r in range(col, n) if a[r][col] != 0), None)
        if piv is None:
            raise ZeroDivisionError("singular matrix")
        a[col], a[piv] = a[piv], a[col]
        inv = 1 / a[col][col]
        a[col] = [x * inv for x in a[col]]
        for r in range(n):
            if r != col and a[r][col] != 0:
                f = a[r][col]
                a[r] = [x - f * y for x, y in zip(a[r], a[col])]
    return tuple(tuple(row[n:]) for row in a)


def vec_mat(v: Sequence, m: Mat) -> Row:
    """Row vector times matrix."""
    n = len(m)
    assert len(v) == n
    return tuple(sum((Fraction(v[i]) * m[i][j] for i in range(n)),
                     Fraction(0)) for j in range(len(m[0]) if m else 0))


def mat_vec(m: Mat, v: Sequence) -> Row:
    """Matrix times column vector."""
    return tuple(sum((row[j] * Fraction(v[j]) for j in range(len(v))),
                     Fraction(0)) for row in m)
