"""The symmetric group S_n as a Coxeter group of type A.

A permutation is a tuple of the integers 1..n in one-line notation, so
``w[i-1]`` is the image of ``i``.  Products compose as functions: the group
product ``compose(x, y)`` applies ``y`` first, which matches the Hecke
convention ``H_x H_y = H_{xy}`` when lengths add.  The simple reflection
``s_i`` (1 <= i <= n-1) swaps ``i`` and ``i+1``.

All functions are pure; permutations of different ranks never mix.
"""

from __future__ import annotations

import itertools
from functools import lru_cache
from typing import Iterable, Iterator, Sequence

Perm = tuple[int, ...]


def is_permutation(w: Sequence[int]) -> bool:
    return sorted(w) == list(range(1, len(w) + 1))


def identity(n: int) -> Perm:
    return tuple(range(1, n + 1))


def simple(i: int, n: int) -> Perm:
    """The simple reflection s_i swapping i and i+1.

    >>> simple(2, 4)
    (1, 3, 2, 4)
    """
    if not 1 <= i <= n - 1:
        raise ValueError(f"simple reflection index {i} out of range for S_{n}")
    w = list(range(1, n + 1))
    w[i - 1], w[i] = w[i], w[i - 1]
    return tuple(w)


def compose(x: Perm, y: Perm) -> Perm:
    """The product xy, applying y first: (xy)(i) = x(y(i)).

    >>> compose(simple(1, 3), simple(2, 3))   # st in S_3
    (2, 3, 1)
    """
    if len(x) != len(y):
        raise ValueError(f"rank mismatch: S_{len(x)} vs S_{len(y)}")
    return tuple(x[y[i] - 1] for i in range(len(x)))


def inverse(w: Perm) -> Perm:
    out = [0] * len(w)
    for i, wi in enumerate(w):
        out[wi - 1] = i + 1
    return tuple(out)


def length(w: Perm) -> int:
    """Coxeter length = number of inversions.

    >>> length((3, 2, 1))
    3
    """
    n = len(w)
    return sum(1 for i in range(n) for j in range(i + 1, n) if w[i] > w[j])


def mul_simple_right(w: Perm, i: int) -> Perm:
    """w * s_i: swaps the entries in positions i, i+1."""
    lst = list(w)
    lst[i - 1], lst[i] = lst[i], lst[i - 1]
    return tuple(lst)


def mul_simple_left(w: Perm, i: int) -> Perm:
    """s_i * w: swaps the values i, i+1 wherever they sit."""
    lst = list(w)
    a, b = lst.index(i), lst.index(i + 1)
    lst[a], lst[b] = lst[b], lst[a]
    return tuple(lst)


def right_descents(w: Perm) -> frozenset[int]:
    """Indices i with l(w s_i) < l(w), i.e. descents of the one-line word."""
    return frozenset(i for i in range(1, len(w)) if w[i - 1] > w[i])


def left_descents(w: Perm) -> frozenset[int]:
    """Indices i with l(s_i w) < l(w): i appears after i+1 in the word."""
    inv = inverse(w)
    return frozenset(i for i in range(1, len(w)) if inv[i - 1] > inv[i])


def reduced_word(w: Perm) -> tuple[int, ...]:
    """A reduced expression for w (deterministic: strips the least right
    descent at every step), so w = s_{a_1} s_{a_2} ... s_{a_k}.

    >>> reduced_word((3, 2, 1))
    (1, 2, 1)
    """
    word = []
    while True:
        desc = right_descents(w)
        if not desc:
            break
        i = min(desc)
        w = mul_simple_right(w, i)
        word.append(i)
    word.reverse()
    return tuple(word)


def bruhat_leq(x: Perm, y: Perm) -> bool:
    """The Bruhat order via the prefix-dominance criterion: x <= y iff for
    every i, the decreasing sort of x[:i] is entrywise <= that of y[:i].

    >>> bruhat_leq((2, 3, 1), (3, 1, 2))
    False
    >>> bruhat_leq((2, 1, 3), (3, 1, 2))
    True
    """
    if len(x) != len(y):
        raise ValueError(f"rank mismatch: S_{len(x)} vs S_{len(y)}")
    for i in range(1, len(x)):
        xi = sorted(x[:i], reverse=True)
        yi = sorted(y[:i], reverse=True)
        if any(a > b for a, b in zip(xi, yi)):
            return False
    return True


def sort_key(w: Perm) -> tuple[int, Perm]:
    """The fixed total order on S_n: length first, then one-line lex."""
    return (length(w), w)


@lru_cache(maxsize=None)
def elements(n: int) -> tuple[Perm, ...]:
    """All of S_n in the fixed total order (length, then one-line lex)."""
    if n < 1:
        raise ValueError("rank must be at least 1")
    return tuple(sorted(itertools.permutations(range(1, n + 1)), key=sort_key))


@lru_cache(maxsize=None)
def element_index(n: int) -> dict[Perm, int]:
    return {w: i for i, w in enumerate(elements(n))}


def all_elements(n: int) -> Iterator[Perm]:
    return iter(elements(n))


def is_involution(w: Perm) -> bool:
    return compose(w, w) == identity(len(w))


def longest_element(n: int) -> Perm:
    return tuple(range(n, 0, -1))


# -- standard parabolic subgroups ---------------------------------------


def parabolic_blocks(J: Iterable[int], n: int) -> tuple[tuple[int, int], ...]:
    """The consecutive blocks [a, b] of {1..n} cut out by the simple
    reflections in J; J = {1,2} in S_4 gives blocks (1,3), (4,4).
    """
    J = set(J)
    if not J <= set(range(1, n)):
        raise ValueError(f"parabolic subset {sorted(J)} out of range for S_{n}")
    blocks = []
    start = 1
    for i in range(1, n + 1):
        if i == n or i not in J:
            blocks.append((start, i))
            start = i + 1
    return tuple(blocks)


def parabolic_longest(J: Iterable[int], n: int) -> Perm:
    """The longest element of the standard parabolic W_J: reverses each block.

    >>> parabolic_longest({1, 2}, 4)
    (3, 2, 1, 4)
    """
    w = list(range(1, n + 1))
    for a, b in parabolic_blocks(J, n):
        w[a - 1 : b] = reversed(w[a - 1 : b])
    return tuple(w)


def parabolic_elements(J: Iterable[int], n: int) -> tuple[Perm, ...]:
    """All elements of the standard parabolic W_J, in the fixed total order."""
    blocks = parabolic_blocks(J, n)
    per_block = [
        [tuple(p) for p in itertools.permutations(range(a, b + 1))] for a, b in blocks
    ]
    out = []
    for choice in itertools.product(*per_block):
        w = list(range(1, n + 1))
        for (a, _b), block_perm in zip(blocks, choice):
            for off, val in enumerate(block_perm):
                w[a - 1 + off] = val
        out.append(tuple(w))
    return tuple(sorted(out, key=sort_key))


def coset_min_representative(w: Perm, J: Iterable[int], side: str = "left") -> Perm:
    """Minimal-length representative of the coset W_J w (side="left")
    or w W_J (side="right")."""
    J = sorted(J)
    while True:
        if side == "left":
            hit = next((j for j in J if j in left_descents(w)), None)
            if hit is None:
                return w
            w = mul_simple_left(w, hit)
        elif side == "right":
            hit = next((j for j in J if j in right_descents(w)), None)
            if hit is None:
                return w
            w = mul_simple_right(w, hit)
        else:
            raise ValueError(f"side must be 'left' or 'right', got {side!r}")


def coset_max_representative(w: Perm, J: Iterable[int], side: str = "left") -> Perm:
    """Maximal-length representative of W_J w or w W_J."""
    J = sorted(J)
    while True:
        if side == "left":
            hit = next((j for j in J if j not in left_descents(w)), None)
            if hit is None:
                return w
            w = mul_simple_left(w, hit)
        elif side == "right":
            hit = next((j for j in J if j not in right_descents(w)), None)
            if hit is None:
                return w
            w = mul_simple_right(w, hit)
        else:
            raise ValueError(f"side must be 'left' or 'right', got {side!r}")


def coset_min_representatives(J: Iterable[int], n: int, side: str = "left") -> tuple[Perm, ...]:
    """All minimal coset representatives for W_J\\W (left) or W/W_J (right)."""
    J = tuple(sorted(J))
    reps = {coset_min_representative(w, J, side) for w in elements(n)}
    return tuple(sorted(reps, key=sort_key))


# -- parsing and formatting ----------------------------------------------


def format_perm(w: Perm) -> str:
    if len(w) <= 9:
        return "".join(str(i) for i in w)
    return ",".join(str(i) for i in w)


def parse_perm(text: str, n: int | None = None) -> Perm:
    """Parse a one-line form ("2314" or "2,3,1,4") or a reduced word
    ("s1 s2"; requires n)."""
    text = text.strip()
    if text.startswith("s"):
        if n is None:
            raise ValueError("parsing a reduced word requires the rank n")
        w = identity(n)
        for token in text.split():
            if not token.startswith("s"):
                raise ValueError(f"bad reduced-word token {token!r}")
            w = compose(w, simple(int(token[1:]), n))
        return w
    if "," in text:
        w = tuple(int(t) for t in text.split(","))
    else:
        w = tuple(int(ch) for ch in text)
    if not is_permutation(w):
        raise ValueError(f"{text!r} is not a permutation")
    if n is not None and len(w) != n:
        raise ValueError(f"expected a permutation of rank {n}, got rank {len(w)}")
    return w
