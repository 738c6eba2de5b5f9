"""Exact integer linear algebra: left kernels and left solves over Z.

Row operations only, Euclidean-style with xgcd pivots; everything works on
lists of Python ints so coefficient growth is harmless at desk scale.
"""

from __future__ import annotations


def xgcd(a: int, b: int) -> tuple[int, int, int]:
    # returns (x, y, g) with x*a + y*b == g == gcd(a, b), g >= 0
    x, next_x = 1, 0
    y, next_y = 0, 1
    g, next_g = a, b
    while next_g:
        q = g // next_g
        x, next_x = next_x, x - q * next_x
        y, next_y = next_y, y - q * next_y
        g, next_g = next_g, g - q * next_g
    if g < 0:
        x, y, g = -x, -y, -g
    return x, y, g


def _row_echelon_with_transform(rows: list[list[int]]) -> tuple[list[list[int]], list[list[int]], list[int]]:
    """Integer row echelon by unimodular row ops.

    Returns (R, U, pivot_cols) with U * rows == R, pivot rows first in R,
    each pivot entry positive and the entries above reduced modulo it.
    """
    m = len(rows)
    ncols = len(rows[0]) if m else 0
    R = [list(r) for r in rows]
    U = [[1 if i == j else 0 for j in range(m)] for i in range(m)]
    pivot_cols: list[int] = []
    rank = 0
    for col in range(ncols):
        # clear the column below `rank` to a single nonzero entry
        pivot = None
        for i in range(rank, m):
            if R[i][col]:
                pivot = i
                break
        if pivot is None:
            continue
        for i in range(pivot + 1, m):
            if not R[i][col]:
                continue
            a, b = R[pivot][col], R[i][col]
            if b % a == 0:
                q = b // a
                for k in range(col, ncols):
                    R[i][k] -= q * R[pivot][k]
                for k in range(m):
                    U[i][k] -= q * U[pivot][k]
            else:
                x, y, g = xgcd(a, b)
                mb, ag = -b // g, a // g
                for k in range(col, ncols):
                    ra, rb = R[pivot][k], R[i][k]
                    R[pivot][k] = x * ra + y * rb
                    R[i][k] = mb * ra + ag * rb
                for k in range(m):
                    ua, ub = U[pivot][k], U[i][k]
                    U[pivot][k] = x * ua + y * ub
                    U[i][k] = mb * ua + ag * ub
        R[rank], R[pivot] = R[pivot], R[rank]
        U[rank], U[pivot] = U[pivot], U[rank]
        if R[rank][col] < 0:
            R[rank] = [-x for x in R[rank]]
            U[rank] = [-x for x in U[rank]]
        pivot_cols.append(col)
        rank += 1
        if rank == m:
            break
    return R, U, pivot_cols


def kernel_basis(rows: list[list[int]]) -> list[list[int]]:
    """A Z-basis of {c : sum c_i * rows[i] == 0}."""
    if not rows:
        return []
    R, U, pivot_cols = _row_echelon_with_transform(rows)
    rank = len(pivot_cols)
    return [U[i] for i in range(rank, len(rows)) ]


def solve_left(rows: list[list[int]], target: list[int]) -> list[int] | None:
    """Coefficients c with sum c_i * rows[i] == target, or None."""
    if not rows:
        return None if any(target) else []
    R, U, pivot_cols = _row_echelon_with_transform(rows)
    t = list(target)
    combo = [0] * len(rows)
    for i, col in enumerate(pivot_cols):
        if t[col] == 0:
            continue
        q, r = divmod(t[col], R[i][col])
        if r:
            return None
        for k in range(len(t)):
            t[k] -= q * R[i][k]
        for k in range(len(rows)):
            combo[k] += q * U[i][k]
    if any(t):
        return None
    return combo
