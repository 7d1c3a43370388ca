"""Exact integer / rational linear algebra on small matrices."""

from __future__ import annotations

from fractions import Fraction
from math import gcd
from typing import Sequence

IntMatrix = Sequence[Sequence[int]]


def primitive(vec: Sequence[int]) -> tuple[int, ...]:
    g = 0
    for x in vec:
        g = gcd(g, int(x))
    if g == 0:
        return tuple(int(x) for x in vec)
    return tuple(int(x) // g for x in vec)


def sign_normalize(vec: Sequence[int]) -> tuple[int, ...]:
    """Flip the sign so the first nonzero entry is positive."""
    for x in vec:
        if x != 0:
            return tuple(vec) if x > 0 else tuple(-y for y in vec)
    return tuple(vec)


def rank(rows: IntMatrix) -> int:
    """Exact rank by fraction-valued Gaussian elimination."""
    m = [[Fraction(x) for x in row] for row in rows]
    if not m:
        return 0
    ncols = len(m[0])
    r = 0
    for c in range(ncols):
        pivot = next((i for i in range(r, len(m)) if m[i][c] != 0), None)
        if pivot is None:
            continue
        m[r], m[pivot] = m[pivot], m[r]
        for i in range(len(m)):
            if i != r and m[i][c] != 0:
                f = m[i][c] / m[r][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        r += 1
        if r == len(m):
            break
    return r


def integer_kernel(rows: IntMatrix, ncols: int | None = None) -> list[tuple[int, ...]]:
    """Z-basis of ``{x in Z^n : A x = 0}`` via unimodular column reduction.

    Column operations are recorded in a unimodular matrix ``U`` with
    ``A U = [H | 0]``; the columns of ``U`` opposite the zero block span the
    integer kernel.
    """
    a = [[int(x) for x in row] for row in rows]
    n = ncols if ncols is not None else (len(a[0]) if a else 0)
    u = [[int(i == j) for j in range(n)] for i in range(n)]  # u[col] is a column vector

    def sub_col(dst, src, q):
        for row in a:
            row[dst] -= q * row[src]
        u[dst] = [x - q * y for x, y in zip(u[dst], u[src])]

    def swap_col(i, j):
        for row in a:
            row[i], row[j] = row[j], row[i]
        u[i], u[j] = u[j], u[i]

    piv = 0
    for row in a:
        if piv >= n:
            break
        while True:
            nz = [c for c in range(piv, n) if row[c] != 0]
            if len(nz) <= 1:
                break
            cmin = min(nz, key=lambda c: abs(row[c]))
            for c in nz:
                if c != cmin:
                    sub_col(c, cmin, row[c] // row[cmin])
        if nz:
            swap_col(nz[0], piv)
            piv += 1
    return [sign_normalize(u[c]) for c in range(piv, n)]


def solve_exact(columns: Sequence[Sequence[int]], target: Sequence[int]) -> tuple[Fraction, ...]:
    """Coefficients ``c`` with ``sum_j c_j columns[j] == target``; raises if none."""
    k = len(columns)
    dim = len(target)
    aug = [[Fraction(columns[j][i]) for j in range(k)] + [Fraction(target[i])] for i in range(dim)]
    pivots = []
    r = 0
    for c in range(k):
        p = next((i for i in range(r, dim) if aug[i][c] != 0), None)
        if p is None:
            continue
        aug[r], aug[p] = aug[p], aug[r]
        aug[r] = [x / aug[r][c] for x in aug[r]]
        for i in range(dim):
            if i != r and aug[i][c] != 0:
                f = aug[i][c]
                aug[i] = [x - f * y for x, y in zip(aug[i], aug[r])]
        pivots.append(c)
        r += 1
    if any(aug[i][k] != 0 for i in range(r, dim)):
        raise ValueError("target not in span")
    sol = [Fraction(0)] * k
    for i, c in enumerate(pivots):
        sol[c] = aug[i][k]
    return tuple(sol)


def int_inverse(mat: IntMatrix) -> tuple[tuple[int, ...], ...]:
    """Inverse of a unimodular integer matrix."""
    n = len(mat)
    cols = [[mat[i][j] for i in range(n)] for j in range(n)]
    inv_cols = []
    for j in range(n):
        e = [int(i == j) for i in range(n)]
        sol = solve_exact(cols, e)
        if any(x.denominator != 1 for x in sol):
            raise ValueError("matrix is not unimodular")
        inv_cols.append([int(x) for x in sol])
    return tuple(tuple(inv_cols[j][i] for j in range(n)) for i in range(n))
