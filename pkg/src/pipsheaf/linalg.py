"""Exact linear algebra over the rationals.

Two rank routines are kept deliberately separate so that one can audit the
other: a fraction-free integer row elimination and a Gauss-Jordan reduction
over ``Fraction`` applied to the transpose.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd, lcm
from typing import Sequence


def _integer_rows(matrix) -> list[list[int]]:
    rows = []
    for row in matrix:
        row = [Fraction(x) for x in row]
        den = 1
        for x in row:
            den = lcm(den, x.denominator)
        rows.append([int(x * den) for x in row])
    return rows


def _primitive(row: list[int]) -> list[int]:
    g = 0
    for x in row:
        if x:
            g = gcd(g, x)
            if g == 1:
                return row
    if g > 1:
        return [x // g for x in row]
    return row


def rank_fraction_free(matrix) -> int:
    """Rank by fraction-free row elimination with content removal."""
    rows = [r for r in _integer_rows(matrix) if any(r)]
    if not rows:
        return 0
    ncols = len(rows[0])
    rank = 0
    for col in range(ncols):
        pivot = None
        for i in range(rank, len(rows)):
            if rows[i][col]:
                if pivot is None or _weight(rows[i]) < _weight(rows[pivot]):
                    pivot = i
        if pivot is None:
            continue
        rows[rank], rows[pivot] = rows[pivot], rows[rank]
        prow = rows[rank]
        p = prow[col]
        support = [j for j in range(col, ncols) if prow[j]]
        for i in range(rank + 1, len(rows)):
            row = rows[i]
            a = row[col]
            if not a:
                continue
            g = gcd(p, a)
            mp, ma = p // g, a // g
            new = [mp * x for x in row]
            for j in support:
                new[j] -= ma * prow[j]
            rows[i] = _primitive(new)
        rank += 1
        if rank == len(rows):
            break
    return rank


def _weight(row: list[int]) -> int:
    return sum(1 for x in row if x)


def rref(matrix) -> tuple[list[list[Fraction]], list[int]]:
    """Reduced row echelon form over Fraction; returns (rows, pivot columns)."""
    rows = [[Fraction(x) for x in r] for r in matrix]
    pivots: list[int] = []
    if not rows:
        return rows, pivots
    ncols = len(rows[0])
    r = 0
    for c in range(ncols):
        pivot = next((i for i in range(r, len(rows)) if rows[i][c] != 0), None)
        if pivot is None:
            continue
        rows[r], rows[pivot] = rows[pivot], rows[r]
        inv = 1 / rows[r][c]
        prow = [x * inv for x in rows[r]]
        rows[r] = prow
        support = [j for j in range(c, ncols) if prow[j]]
        for i in range(len(rows)):
            f = rows[i][c]
            if i != r and f:
                row = rows[i]
                for j in support:
                    row[j] -= f * prow[j]
        pivots.append(c)
        r += 1
        if r == len(rows):
            break
    return rows, pivots


def column_space_dim(matrix) -> int:
    """Dimension of the column space, via Gauss-Jordan on the transpose."""
    matrix = [list(r) for r in matrix]
    if not matrix or not matrix[0]:
        return 0
    transpose = [list(col) for col in zip(*matrix)]
    _, pivots = rref(transpose)
    return len(pivots)


def rank(matrix) -> int:
    matrix = [list(r) for r in matrix]
    if not matrix or not matrix[0]:
        return 0
    return rank_fraction_free(matrix)


def hstack(*blocks: Sequence[Sequence], nrows: int) -> list[list]:
    out = [[] for _ in range(nrows)]
    for block in blocks:
        for i, row in enumerate(block):
            out[i].extend(row)
    return out


def matmul(a, b) -> list[list]:
    if not a:
        return []
    bt = list(zip(*b)) if b else []
    inner = len(b)
    if inner == 0:
        return [[0] * (len(b[0]) if b else 0) for _ in a]
    return [[sum(x * y for x, y in zip(row, col) if x and y) for col in bt] for row in a]


def identity(n: int, one=1, zero=0) -> list[list]:
    return [[one if i == j else zero for j in range(n)] for i in range(n)]


def inverse(matrix, one=1, zero=0):
    """Gauss-Jordan inverse over any exact field; ``None`` if singular."""
    n = len(matrix)
    aug = [list(row) + identity(n, one, zero)[i] for i, row in enumerate(matrix)]
    for c in range(n):
        pivot = next((i for i in range(c, n) if aug[i][c] != 0), None)
        if pivot is None:
            return None
        aug[c], aug[pivot] = aug[pivot], aug[c]
        inv = one / aug[c][c]
        aug[c] = [x * inv for x in aug[c]]
        for i in range(n):
            if i != c and aug[i][c] != 0:
                f = aug[i][c]
                aug[i] = [x - f * y for x, y in zip(aug[i], aug[c])]
    return [row[n:] for row in aug]


def field_rank(matrix) -> int:
    """Rank over any exact field with ``==``, ``*``, ``/`` (e.g. ComplexRational)."""
    rows = [list(r) for r in matrix]
    if not rows:
        return 0
    ncols = len(rows[0])
    r = 0
    for c in range(ncols):
        pivot = next((i for i in range(r, len(rows)) if rows[i][c] != 0), None)
        if pivot is None:
            continue
        rows[r], rows[pivot] = rows[pivot], rows[r]
        for i in range(r + 1, len(rows)):
            if rows[i][c] != 0:
                f = rows[i][c] / rows[r][c]
                rows[i] = [x - f * y for x, y in zip(rows[i], rows[r])]
        r += 1
        if r == len(rows):
            break
    return r


def nullspace(matrix, ncols: int) -> list[list[Fraction]]:
    """Basis of ``{x : matrix @ x = 0}`` over the rationals, as column vectors."""
    rows, pivots = rref(matrix) if matrix else ([], [])
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for f in free:
        x = [Fraction(0)] * ncols
        x[f] = Fraction(1)
        for i, p in enumerate(pivots):
            x[p] = -rows[i][f]
        basis.append(x)
    return basis
