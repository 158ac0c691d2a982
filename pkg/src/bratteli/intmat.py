"""Exact integer matrices as nested tuples.

Products of incidence matrices grow exponentially, so everything stays in
arbitrary-precision ints (Fractions for the rank computation).  No floats
anywhere in the package.
"""
from __future__ import annotations

from fractions import Fraction
from typing import Iterable

Matrix = tuple[tuple[int, ...], ...]
Vector = tuple[int, ...]


def mat(rows: Iterable[Iterable[int]]) -> Matrix:
    return tuple(tuple(int(x) for x in row) for row in rows)


def identity(n: int) -> Matrix:
    return tuple(tuple(1 if i == j else 0 for j in range(n)) for i in range(n))


def mat_mul(a: Matrix, b: Matrix) -> Matrix:
    if a and b and len(a[0]) != len(b):
        raise ValueError("matrix dimensions do not chain")
    bt = tuple(zip(*b)) if b else ()
    return tuple(
        tuple(sum(x * y for x, y in zip(row, col)) for col in bt) for row in a
    )


def mat_vec(a: Matrix, v: Vector) -> Vector:
    if a and len(a[0]) != len(v):
        raise ValueError("matrix/vector dimensions do not chain")
    return tuple(sum(x * y for x, y in zip(row, v)) for row in a)


def mat_pow(a: Matrix, k: int) -> Matrix:
    if len(a) != len(a[0]):
        raise ValueError("matrix power needs a square matrix")
    if k < 0:
        raise ValueError("negative matrix power")
    result = identity(len(a))
    base = a
    while k:
        if k & 1:
            result = mat_mul(result, base)
        base = mat_mul(base, base) if k > 1 else base
        k >>= 1
    return result


def all_positive(a: Matrix) -> bool:
    return all(x > 0 for row in a for x in row)


def row_sums(a: Matrix) -> Vector:
    return tuple(sum(row) for row in a)


def col_sums(a: Matrix) -> Vector:
    return tuple(sum(col) for col in zip(*a))


def pattern(a: Matrix) -> Matrix:
    """0/1 support pattern; positivity of powers only depends on this."""
    return tuple(tuple(1 if x else 0 for x in row) for row in a)


def pattern_mul(a: Matrix, b: Matrix) -> Matrix:
    bt = tuple(zip(*b))
    return tuple(
        tuple(1 if any(x and y for x, y in zip(row, col)) else 0 for col in bt)
        for row in a
    )


def solve_integer(a: Matrix, b: Vector) -> tuple[int, ...] | None:
    """Some integer solution x of a x = b, or None.

    Unimodular column operations bring `a` to column echelon form while the
    same operations accumulate in u, so a solution of the echelon system pulls
    back through u; divisibility of the pivots decides integrality.
    """
    rows = len(a)
    if rows == 0:
        return ()
    cols = len(a[0])
    if len(b) != rows:
        raise ValueError("dimension mismatch")
    work = [list(row) for row in a]
    u = [[1 if i == j else 0 for j in range(cols)] for i in range(cols)]

    def col_combine(j1, j2, r):
        # zero out work[r][j2] against work[r][j1] by a unimodular move
        p, q = work[r][j1], work[r][j2]
        if q == 0:
            return
        g, x, y = _xgcd(p, q)
        pj, qj = p // g, q // g
        for m in (work, u):
            for row in m:
                v1, v2 = row[j1], row[j2]
                row[j1] = x * v1 + y * v2
                row[j2] = -qj * v1 + pj * v2

    pivot_cols = []
    lead = 0
    for r in range(rows):
        pivot = next((j for j in range(lead, cols) if work[r][j]), None)
        if pivot is None:
            pivot_cols.append(None)
            continue
        if pivot != lead:
            for m in (work, u):
                for row in m:
                    row[lead], row[pivot] = row[pivot], row[lead]
        for j in range(lead + 1, cols):
            col_combine(lead, j, r)
        pivot_cols.append(lead)
        lead += 1
    y = [0] * cols
    for r in range(rows):
        residual = b[r] - sum(work[r][j] * y[j] for j in range(cols))
        pj = pivot_cols[r]
        if pj is None:
            if residual != 0:
                return None
            continue
        if residual % work[r][pj] != 0:
            return None
        y[pj] = residual // work[r][pj]
    return tuple(sum(u[i][j] * y[j] for j in range(cols)) for i in range(cols))


def _xgcd(a: int, b: int) -> tuple[int, int, int]:
    x, next_x, y, next_y, g, next_g = 1, 0, 0, 1, a, b
    while next_g:
        q = g // next_g
        x, next_x = next_x, x - q * next_x
        y, next_y = next_y, y - q * next_y
        g, next_g = next_g, g - q * next_g
    if g < 0:
        x, y, g = -x, -y, -g
    return g, x, y


def int_rank(rows: Iterable[Iterable[int]]) -> int:
    """Rank over the rationals, by Gaussian elimination with Fractions."""
    work = [[Fraction(x) for x in row] for row in rows]
    if not work:
        return 0
    ncols = len(work[0])
    rank = 0
    col = 0
    while rank < len(work) and col < ncols:
        pivot = next((r for r in range(rank, len(work)) if work[r][col]), None)
        if pivot is None:
            col += 1
            continue
        work[rank], work[pivot] = work[pivot], work[rank]
        inv = 1 / work[rank][col]
        work[rank] = [x * inv for x in work[rank]]
        for r in range(len(work)):
            if r != rank and work[r][col]:
                factor = work[r][col]
                work[r] = [x - factor * y for x, y in zip(work[r], work[rank])]
        rank += 1
        col += 1
    return rank
