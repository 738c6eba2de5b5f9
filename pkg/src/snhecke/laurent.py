"""Exact arithmetic in the ring of integer Laurent polynomials Z[v, v^-1].

A polynomial is stored sparsely as a map from exponent to nonzero integer
coefficient; every operation re-canonicalizes, so two polynomials are equal
iff their term maps are equal.  The three ring symmetries used throughout
the package are `bar` (v -> v^-1), `beta` (v -> -v^-1) and evaluation at
v = 1.
"""

from __future__ import annotations

import re
from math import gcd

_TERM_RE = re.compile(r"([+-]?\d*)\s*(v(?:\^(-?\d+))?)?")


class LaurentPoly:
    """An element of Z[v, v^-1] in canonical sparse form.

    >>> a = LaurentPoly.parse("v + v^-1")
    >>> str(a * a)
    'v^2+2+v^-2'
    >>> a.bar() == a
    True
    """

    __slots__ = ("_t",)

    def __init__(self, terms: dict[int, int] | None = None):
        t = {e: c for e, c in terms.items() if c} if terms else {}
        self._t = t

    # -- constructors ------------------------------------------------

    @classmethod
    def term(cls, coeff: int, exp: int = 0) -> LaurentPoly:
        return cls({exp: coeff})

    @classmethod
    def parse(cls, text: str) -> LaurentPoly:
        """Parse strings like ``"v^3+2v+2v^-1+v^-3"`` or ``"-v + 3"``."""
        terms: dict[int, int] = {}
        pos = 0
        s = text.replace(" ", "")
        if not s or s == "0":
            return cls()
        while pos < len(s):
            m = _TERM_RE.match(s, pos)
            if not m or m.end() == pos:
                raise ValueError(f"cannot parse Laurent polynomial {text!r} at {pos}")
            sign_digits, vpart, exp_digits = m.group(1), m.group(2), m.group(3)
            if sign_digits in ("", "+", "-"):
                coeff = -1 if sign_digits == "-" else 1
                if vpart is None:
                    raise ValueError(f"dangling sign in {text!r}")
            else:
                coeff = int(sign_digits)
            if vpart is None:
                exp = 0
            else:
                exp = int(exp_digits) if exp_digits is not None else 1
            terms[exp] = terms.get(exp, 0) + coeff
            pos = m.end()
        return cls(terms)

    @classmethod
    def from_json_dict(cls, data: dict[str, int]) -> LaurentPoly:
        return cls({int(e): int(c) for e, c in data.items()})

    # -- ring operations ---------------------------------------------

    def __add__(self, other: LaurentPoly | int) -> LaurentPoly:
        other = _coerce(other)
        t = dict(self._t)
        for e, c in other._t.items():
            t[e] = t.get(e, 0) + c
        return LaurentPoly(t)

    __radd__ = __add__

    def __neg__(self) -> LaurentPoly:
        return LaurentPoly({e: -c for e, c in self._t.items()})

    def __sub__(self, other: LaurentPoly | int) -> LaurentPoly:
        return self + (-_coerce(other))

    def __rsub__(self, other: int) -> LaurentPoly:
        return _coerce(other) - self

    def __mul__(self, other: LaurentPoly | int) -> LaurentPoly:
        if isinstance(other, int):
            if other == 0:
                return LaurentPoly()
            return LaurentPoly({e: c * other for e, c in self._t.items()})
        t: dict[int, int] = {}
        for e1, c1 in self._t.items():
            for e2, c2 in other._t.items():
                e = e1 + e2
                t[e] = t.get(e, 0) + c1 * c2
        return LaurentPoly(t)

    __rmul__ = __mul__

    def __pow__(self, k: int) -> LaurentPoly:
        if k < 0:
            raise ValueError("negative powers are not defined in Z[v,v^-1]")
        out = ONE
        for _ in range(k):
            out = out * self
        return out

    def __bool__(self) -> bool:
        return bool(self._t)

    def __eq__(self, other: object) -> bool:
        if isinstance(other, int):
            other = _coerce(other)
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        return self._t == other._t

    def __hash__(self) -> int:
        return hash(self.key())

    def key(self) -> tuple[tuple[int, int], ...]:
        """Hashable canonical form (exponent-sorted term tuple)."""
        return tuple(sorted(self._t.items()))

    # -- inspection ---------------------------------------------------

    def items(self):
        return self._t.items()

    def coeff(self, exp: int) -> int:
        """The coefficient at v^exp."""
        return self._t.get(exp, 0)

    @property
    def degree(self) -> int:
        if not self._t:
            raise ValueError("degree of 0 is undefined (empty support)")
        return max(self._t)

    @property
    def valuation(self) -> int:
        if not self._t:
            raise ValueError("valuation of 0 is undefined (empty support)")
        return min(self._t)

    def is_nonneg(self) -> bool:
        return all(c >= 0 for c in self._t.values())

    def is_bar_symmetric(self) -> bool:
        return all(self._t.get(-e, 0) == c for e, c in self._t.items())

    def int_content(self) -> int:
        """gcd of all coefficients (0 for the zero polynomial)."""
        g = 0
        for c in self._t.values():
            g = gcd(g, c)
        return g

    # -- symmetries and specialization ---------------------------------

    def bar(self) -> LaurentPoly:
        """The bar involution v -> v^-1."""
        return LaurentPoly({-e: c for e, c in self._t.items()})

    def beta(self) -> LaurentPoly:
        """The ring involution v -> -v^-1, so v^i -> (-1)^i v^-i."""
        return LaurentPoly({-e: (c if e % 2 == 0 else -c) for e, c in self._t.items()})

    def at_one(self) -> int:
        """Evaluate at v = 1 (sum of coefficients)."""
        return sum(self._t.values())

    def shift(self, k: int) -> LaurentPoly:
        """Multiply by the unit v^k."""
        return LaurentPoly({e + k: c for e, c in self._t.items()})

    def scale_div(self, k: int) -> LaurentPoly:
        """Exact division of every coefficient by the integer k."""
        out = {}
        for e, c in self._t.items():
            q, r = divmod(c, k)
            if r:
                raise ValueError(f"coefficient {c} not divisible by {k}")
            out[e] = q
        return LaurentPoly(out)

    # -- rendering -----------------------------------------------------

    def __str__(self) -> str:
        if not self._t:
            return "0"
        parts = []
        for e in sorted(self._t, reverse=True):
            c = self._t[e]
            if e == 0:
                body = str(abs(c))
            else:
                vpow = "v" if e == 1 else f"v^{e}"
                body = vpow if abs(c) == 1 else f"{abs(c)}{vpow}"
            parts.append(("-" if c < 0 else "+", body))
        sign, body = parts[0]
        text = ("-" if sign == "-" else "") + body
        for sign, body in parts[1:]:
            text += sign + body
        return text

    def __repr__(self) -> str:
        return f"LaurentPoly({str(self)!r})"

    def to_json_dict(self) -> dict[str, int]:
        """JSON form: exponent (decimal string) -> coefficient, keys ascending."""
        return {str(e): self._t[e] for e in sorted(self._t)}


def _coerce(x: LaurentPoly | int) -> LaurentPoly:
    if isinstance(x, LaurentPoly):
        return x
    if isinstance(x, int):
        return LaurentPoly({0: x})
    raise TypeError(f"cannot coerce {type(x).__name__} into Z[v,v^-1]")


ZERO = LaurentPoly()
ONE = LaurentPoly({0: 1})
V = LaurentPoly({1: 1})
VINV = LaurentPoly({-1: 1})
