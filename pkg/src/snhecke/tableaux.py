"""Robinson-Schensted correspondence and basic tableau combinatorics.

Tableaux are tuples of row tuples; shapes are weakly decreasing tuples of
positive integers.  Row insertion is the fixed convention: the recording
tableau Q classifies left cells (checked against Hecke-side cells in the
test suite), the insertion tableau P classifies right cells.
"""

from __future__ import annotations

import itertools
from bisect import bisect_right
from math import factorial

from .permutations import Perm, elements, inverse, is_involution, sort_key

Tableau = tuple[tuple[int, ...], ...]
Shape = tuple[int, ...]


def rs(w: Perm) -> tuple[Tableau, Tableau]:
    """Row-insert the one-line word of w, returning (insertion, recording).

    >>> rs((3, 1, 2))
    (((1, 2), (3,)), ((1, 3), (2,)))
    """
    p: list[list[int]] = []
    q: list[list[int]] = []
    for step, value in enumerate(w, start=1):
        row = 0
        while True:
            if row == len(p):
                p.append([value])
                q.append([step])
                break
            r = p[row]
            pos = bisect_right(r, value)
            if pos == len(r):
                r.append(value)
                q[row].append(step)
                break
            value, r[pos] = r[pos], value
            row += 1
    return tuple(tuple(r) for r in p), tuple(tuple(r) for r in q)


def inverse_rs(p: Tableau, q: Tableau) -> Perm:
    """The permutation with insertion tableau p and recording tableau q.

    >>> inverse_rs(((1, 2), (3,)), ((1, 3), (2,)))
    (3, 1, 2)
    """
    if tableau_shape(p) != tableau_shape(q):
        raise ValueError("insertion and recording tableaux must share a shape")
    n = sum(len(r) for r in p)
    for t in (p, q):
        if not is_standard(t, n):
            raise ValueError("inverse insertion requires standard tableaux")
    rows = [list(r) for r in p]
    cell_of_step = {}
    for r, row in enumerate(q):
        for c, entry in enumerate(row):
            cell_of_step[entry] = (r, c)
    word = [0] * n
    for step in range(n, 0, -1):
        r, c = cell_of_step[step]
        value = rows[r].pop(c)
        for row in range(r - 1, -1, -1):
            cur = rows[row]
            pos = bisect_right(cur, value) - 1
            cur[pos], value = value, cur[pos]
        word[step - 1] = value
    return tuple(word)


def is_standard(t: Tableau, n: int) -> bool:
    entries = [x for row in t for x in row]
    if sorted(entries) != list(range(1, n + 1)):
        return False
    for row in t:
        if any(row[i] >= row[i + 1] for i in range(len(row) - 1)):
            return False
    for r in range(1, len(t)):
        if len(t[r]) > len(t[r - 1]):
            return False
        if any(t[r][c] <= t[r - 1][c] for c in range(len(t[r]))):
            return False
    return True


def tableau_shape(t: Tableau) -> Shape:
    return tuple(len(r) for r in t)


def shape_of(w: Perm) -> Shape:
    """The partition shape of the RS tableaux of w."""
    return tableau_shape(rs(w)[0])


def dominance_leq(lam: Shape, mu: Shape) -> bool:
    """Dominance order on partitions of the same n: partial sums compare.

    >>> dominance_leq((2, 2), (3, 1))
    True
    """
    if sum(lam) != sum(mu):
        raise ValueError("dominance compares partitions of the same integer")
    a = b = 0
    for i in range(max(len(lam), len(mu))):
        a += lam[i] if i < len(lam) else 0
        b += mu[i] if i < len(mu) else 0
        if a > b:
            return False
    return True


def conjugate(lam: Shape) -> Shape:
    return tuple(sum(1 for part in lam if part > i) for i in range(lam[0] if lam else 0))


def hook_length_count(lam: Shape) -> int:
    """Number of standard Young tableaux of shape lam, by the hook formula.

    >>> hook_length_count((2, 2))
    2
    """
    n = sum(lam)
    conj = conjugate(lam)
    prod = 1
    for r, part in enumerate(lam):
        for c in range(part):
            prod *= (part - c) + (conj[c] - r) - 1
    return factorial(n) // prod


def partitions(n: int) -> tuple[Shape, ...]:
    """All partitions of n, in descending lex order."""
    out: list[Shape] = []

    def rec(remaining: int, maxpart: int, prefix: tuple[int, ...]):
        if remaining == 0:
            out.append(prefix)
            return
        for part in range(min(maxpart, remaining), 0, -1):
            rec(remaining - part, part, prefix + (part,))

    rec(n, n, ())
    return tuple(sorted(out, reverse=True))


def standard_tableaux(lam: Shape) -> tuple[Tableau, ...]:
    """All standard Young tableaux of shape lam (row-tuple lex order)."""
    n = sum(lam)
    out = []

    def rec(rows: list[list[int]], step: int):
        if step > n:
            out.append(tuple(tuple(r) for r in rows))
            return
        for r in range(len(lam)):
            c = len(rows[r])
            if c >= lam[r]:
                continue
            if r > 0 and len(rows[r - 1]) <= c:
                continue
            rows[r].append(step)
            rec(rows, step + 1)
            rows[r].pop()

    rec([[] for _ in lam], 1)
    return tuple(sorted(out))


def left_cell_of(w: Perm) -> tuple[Perm, ...]:
    """All u in S_n with the same recording tableau as w."""
    q = rs(w)[1]
    return tuple(u for u in elements(len(w)) if rs(u)[1] == q)


def right_cell_of(w: Perm) -> tuple[Perm, ...]:
    p = rs(w)[0]
    return tuple(u for u in elements(len(w)) if rs(u)[0] == p)


def duflo_involution_of_left_cell(q: Tableau) -> Perm:
    """The unique involution in the left cell with recording tableau q."""
    d = inverse_rs(q, q)
    assert is_involution(d)
    return d


def rs_cells(n: int, order: str) -> tuple[tuple[Perm, ...], ...]:
    """The left/right/two-sided cells of S_n from the RS correspondence,
    each cell sorted by the fixed total order; cells sorted by their
    least member."""
    keyfn = {
        "left": lambda w: rs(w)[1],
        "right": lambda w: rs(w)[0],
        "two_sided": shape_of,
    }[order]
    buckets: dict[object, list[Perm]] = {}
    for w in elements(n):
        buckets.setdefault(keyfn(w), []).append(w)
    cells = [tuple(sorted(b, key=sort_key)) for b in buckets.values()]
    return tuple(sorted(cells, key=lambda c: sort_key(c[0])))


def involutions_by_tableau(n: int) -> dict[Tableau, Perm]:
    """Map each standard tableau to its involution (P = Q = the tableau)."""
    out = {}
    for lam in partitions(n):
        for t in standard_tableaux(lam):
            out[t] = inverse_rs(t, t)
    return out
