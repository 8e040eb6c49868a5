"""Exact rational linear algebra on small dense matrices (lists of lists)."""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence

Matrix = list[list[Fraction]]


def to_matrix(rows: Sequence[Sequence]) -> Matrix:
    return [[Fraction(x) for x in row] for row in rows]


def is_square(rows) -> bool:
    n = len(rows)
    return all(len(r) == n for r in rows)


def is_symmetric(m) -> bool:
    n = len(m)
    return is_square(m) and all(m[i][j] == m[j][i] for i in range(n) for j in range(i))


def det(rows) -> Fraction:
    a = to_matrix(rows)
    n = len(a)
    out = Fraction(1)
    for k in range(n):
        piv = max(range(k, n), key=lambda i: abs(a[i][k]))
        if a[piv][k] == 0:
            return Fraction(0)
        if piv != k:
            a[k], a[piv] = a[piv], a[k]
            out = -out
        out *= a[k][k]
        for i in range(k + 1, n):
            f = a[i][k] / a[k][k]
            if f:
                for j in range(k, n):
                    a[i][j] -= f * a[k][j]
    return out


def solve(rows, rhs) -> list[Fraction]:
    """Solve the nonsingular system ``rows @ x = rhs``; partial pivoting on |entry|."""
    n = len(rows)
    a = [list(map(Fraction, r)) + [Fraction(b)] for r, b in zip(rows, rhs)]
    for k in range(n):
        piv = max(range(k, n), key=lambda i: abs(a[i][k]))
        if a[piv][k] == 0:
            raise ZeroDivisionError("singular system")
        a[k], a[piv] = a[piv], a[k]
        for i in range(k + 1, n):
            f = a[i][k] / a[k][k]
            if f:
                for j in range(k, n + 1):
                    a[i][j] -= f * a[k][j]
    x = [Fraction(0)] * n
    for i in reversed(range(n)):
        s = a[i][n] - sum(a[i][j] * x[j] for j in range(i + 1, n))
        x[i] = s / a[i][i]
    return x


def leading_minors(rows) -> list[Fraction]:
    n = len(rows)
    return [det([r[:k] for r in rows[:k]]) for k in range(1, n + 1)]


def submatrix(rows, idx: Sequence[int]) -> list[list]:
    return [[rows[i][j] for j in idx] for i in idx]


def mat_vec(rows, v) -> list:
    return [sum(r[j] * v[j] for j in range(len(v))) for r in rows]


def dot(u, v):
    return sum(a * b for a, b in zip(u, v))
