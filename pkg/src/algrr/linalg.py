"""Small exact matrix helpers over the rationals (lists of lists of Fraction)."""

from __future__ import annotations

from fractions import Fraction
from math import lcm


def zeros(rows: int, cols: int) -> list[list[Fraction]]:
    return [[Fraction(0)] * cols for _ in range(rows)]


def identity(n: int) -> list[list[Fraction]]:
    out = zeros(n, n)
    for i in range(n):
        out[i][i] = Fraction(1)
    return out


def as_matrix(rows) -> list[list[Fraction]]:
    return [[Fraction(x) for x in row] for row in rows]


def matmul(a, b):
    if not a or not b:
        return zeros(len(a), len(b[0]) if b else 0)
    inner, cols = len(b), len(b[0])
    out = zeros(len(a), cols)
    for i, row in enumerate(a):
        o = out[i]
        for k in range(inner):
            aik = row[k]
            if aik:
                bk = b[k]
                for j in range(cols):
                    if bk[j]:
                        o[j] += aik * bk[j]
    return out


def add(a, b, scale=1):
    return [[x + scale * y for x, y in zip(ra, rb)] for ra, rb in zip(a, b)]


def commutator(a, b):
    return add(matmul(a, b), matmul(b, a), -1)


def is_zero(a) -> bool:
    return all(x == 0 for row in a for x in row)


def rank(m) -> int:
    """Rank by fraction-free (Bareiss) elimination.

    Rows are first cleared of denominators, so all pivoting happens on
    integers and every intermediate division is exact.
    """
    rows = []
    for r in m:
        den = lcm(*(Fraction(x).denominator for x in r)) if r else 1
        row = [int(Fraction(x) * den) for x in r]
        if any(row):
            rows.append(row)
    if not rows:
        return 0
    ncols = len(rows[0])
    r = 0
    prev = 1
    for c in range(ncols):
        piv = next((i for i in range(r, len(rows)) if rows[i][c] != 0), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        p = rows[r][c]
        for i in range(r + 1, len(rows)):
            ric = rows[i][c]
            rows[i] = [(p * rows[i][j] - ric * rows[r][j]) // prev for j in range(ncols)]
        prev = p
        r += 1
        if r == len(rows):
            break
    return r
