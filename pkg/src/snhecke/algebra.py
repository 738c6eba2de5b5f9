"""The Hecke algebra of S_n over Z[v, v^-1].

Elements are always stored in the standard basis {H_w}.  The generators
satisfy H_s^2 = H_e + (v^-1 - v) H_s, and H_x H_y = H_{xy} whenever
lengths add.  The canonical basis (KL), its dual, and the twisted (tilting)
basis exist as conversion tables against the standard basis:

* KL element for w: the unique bar-invariant element equal to H_w plus
  terms in v Z[v]; its standard coordinates are the KL polynomials h_{w,y}.
* dual KL element for w: determined by tau(dual(x) * kl(y^-1)) = delta_{x,y};
  computed as beta(kl(w w0)) * H_{w0}.
* tilting element for w: H_{w0} * kl(w0 w).

A KLCache holds all per-rank tables (h, mu, the three basis element tables,
memoized products) and serializes the h-table to JSON, one file per rank.
"""

from __future__ import annotations

import json
from functools import lru_cache

from .laurent import ONE, V, VINV, ZERO, LaurentPoly
from .permutations import (
    Perm,
    bruhat_leq,
    compose,
    elements,
    format_perm,
    identity,
    inverse,
    left_descents,
    length,
    longest_element,
    mul_simple_left,
    mul_simple_right,
    parse_perm,
    reduced_word,
    sort_key,
)

V_MINUS_VINV = V - VINV
VINV_MINUS_V = VINV - V

Coords = dict[Perm, LaurentPoly]


def _add_into(acc: Coords, coords: Coords, scale: LaurentPoly | None = None) -> None:
    for w, c in coords.items():
        cc = c if scale is None else c * scale
        cur = acc.get(w)
        s = cc if cur is None else cur + cc
        if s:
            acc[w] = s
        elif cur is not None:
            del acc[w]


def _rmul_simple(coords: Coords, i: int) -> Coords:
    out: Coords = {}
    for w, c in coords.items():
        ws = mul_simple_right(w, i)
        if w[i - 1] < w[i]:
            cur = out.get(ws)
            s = c if cur is None else cur + c
            if s:
                out[ws] = s
            elif cur is not None:
                del out[ws]
        else:
            for tgt, cc in ((ws, c), (w, c * VINV_MINUS_V)):
                cur = out.get(tgt)
                s = cc if cur is None else cur + cc
                if s:
                    out[tgt] = s
                elif cur is not None:
                    del out[tgt]
    return out


def _lmul_simple(coords: Coords, i: int) -> Coords:
    out: Coords = {}
    for w, c in coords.items():
        inv_w = inverse(w)
        sw = mul_simple_left(w, i)
        if inv_w[i - 1] < inv_w[i]:
            cur = out.get(sw)
            s = c if cur is None else cur + c
            if s:
                out[sw] = s
            elif cur is not None:
                del out[sw]
        else:
            for tgt, cc in ((sw, c), (w, c * VINV_MINUS_V)):
                cur = out.get(tgt)
                s = cc if cur is None else cur + cc
                if s:
                    out[tgt] = s
                elif cur is not None:
                    del out[tgt]
    return out


class HeckeElt:
    """A sparse Z[v,v^-1]-combination of standard basis elements of fixed rank."""

    __slots__ = ("n", "coords")

    def __init__(self, n: int, coords: Coords | None = None):
        self.n = n
        self.coords = {w: c for w, c in (coords or {}).items() if c}

    @classmethod
    def standard(cls, w: Perm) -> HeckeElt:
        return cls(len(w), {w: ONE})

    @classmethod
    def zero(cls, n: int) -> HeckeElt:
        return cls(n, {})

    def _check_rank(self, other: HeckeElt) -> None:
        if self.n != other.n:
            raise ValueError(f"rank mismatch: S_{self.n} vs S_{other.n}")

    def __add__(self, other: HeckeElt) -> HeckeElt:
        self._check_rank(other)
        out = dict(self.coords)
        _add_into(out, other.coords)
        return HeckeElt(self.n, out)

    def __sub__(self, other: HeckeElt) -> HeckeElt:
        self._check_rank(other)
        out = dict(self.coords)
        _add_into(out, other.coords, -ONE)
        return HeckeElt(self.n, out)

    def __neg__(self) -> HeckeElt:
        return HeckeElt(self.n, {w: -c for w, c in self.coords.items()})

    def __mul__(self, other: HeckeElt | LaurentPoly | int) -> HeckeElt:
        if isinstance(other, (LaurentPoly, int)):
            return HeckeElt(self.n, {w: c * other for w, c in self.coords.items()})
        self._check_rank(other)
        acc: Coords = {}
        for y, cy in other.coords.items():
            cur = self.coords
            for i in reduced_word(y):
                cur = _rmul_simple(cur, i)
            _add_into(acc, cur, cy)
        return HeckeElt(self.n, acc)

    def __rmul__(self, other: LaurentPoly | int) -> HeckeElt:
        return HeckeElt(self.n, {w: other * c for w, c in self.coords.items()})

    def __bool__(self) -> bool:
        return bool(self.coords)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, HeckeElt):
            return NotImplemented
        return self.n == other.n and self.coords == other.coords

    def key(self) -> tuple:
        """Hashable canonical form."""
        return tuple((w, self.coords[w].key()) for w in sorted(self.coords, key=sort_key))

    def __hash__(self) -> int:
        return hash(self.key())

    def tau(self) -> LaurentPoly:
        """The coefficient of H_e."""
        return self.coords.get(identity(self.n), ZERO)

    def star(self) -> HeckeElt:
        """The anti-automorphism fixing v with H_w -> H_{w^-1}."""
        return HeckeElt(self.n, {inverse(w): c for w, c in self.coords.items()})

    def beta(self) -> HeckeElt:
        """The ring involution v -> -v^-1 fixing every H_w."""
        return HeckeElt(self.n, {w: c.beta() for w, c in self.coords.items()})

    def specialize(self) -> IntHeckeElt:
        """Evaluate every coordinate at v = 1."""
        return IntHeckeElt(self.n, {w: c.at_one() for w, c in self.coords.items()})

    def support(self) -> tuple[Perm, ...]:
        return tuple(sorted(self.coords, key=sort_key))

    def __repr__(self) -> str:
        return f"HeckeElt({self.n}, {render_coords(self.coords, 'H')})"


def form(a: HeckeElt, b: HeckeElt) -> LaurentPoly:
    """The symmetric bilinear form tau(ab)."""
    return (a * b).tau()


class IntHeckeElt:
    """An element of the v=1 specialization, which is the group ring of S_n."""

    __slots__ = ("n", "coords")

    def __init__(self, n: int, coords: dict[Perm, int] | None = None):
        self.n = n
        self.coords = {w: c for w, c in (coords or {}).items() if c}

    def __add__(self, other: IntHeckeElt) -> IntHeckeElt:
        out = dict(self.coords)
        for w, c in other.coords.items():
            s = out.get(w, 0) + c
            if s:
                out[w] = s
            elif w in out:
                del out[w]
        return IntHeckeElt(self.n, out)

    def __sub__(self, other: IntHeckeElt) -> IntHeckeElt:
        return self + IntHeckeElt(other.n, {w: -c for w, c in other.coords.items()})

    def __mul__(self, other: IntHeckeElt | int) -> IntHeckeElt:
        if isinstance(other, int):
            return IntHeckeElt(self.n, {w: c * other for w, c in self.coords.items()})
        out: dict[Perm, int] = {}
        for x, cx in self.coords.items():
            for y, cy in other.coords.items():
                w = compose(x, y)
                s = out.get(w, 0) + cx * cy
                if s:
                    out[w] = s
                elif w in out:
                    del out[w]
        return IntHeckeElt(self.n, out)

    def __bool__(self) -> bool:
        return bool(self.coords)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, IntHeckeElt):
            return NotImplemented
        return self.n == other.n and self.coords == other.coords

    def key(self) -> tuple:
        return tuple((w, self.coords[w]) for w in sorted(self.coords, key=sort_key))

    def __hash__(self) -> int:
        return hash(self.key())

    def tau(self) -> int:
        return self.coords.get(identity(self.n), 0)


class KLCache:
    """All Kazhdan-Lusztig data of one rank: the h-table, the mu-function,
    the three distinguished bases, and memoized basis-conversion products."""

    def __init__(self, n: int, h: dict[Perm, Coords] | None = None):
        self.n = n
        self.els = elements(n)
        self.w0 = longest_element(n)
        self._ldesc = {w: left_descents(w) for w in self.els}
        self.h_table = h if h is not None else self._build()
        self._mu_adj: dict[Perm, dict[Perm, int]] = {w: {} for w in self.els}
        for x, row in self.h_table.items():
            for y, poly in row.items():
                m = poly.coeff(1)
                if m and x != y:
                    self._mu_adj[x][y] = m
                    self._mu_adj[y][x] = m
        self._bar_std: dict[Perm, Coords] = {}
        self._dual_std: dict[Perm, Coords] = {}
        self._tilt_std: dict[Perm, Coords] = {}
        self._kl_product: dict[tuple[Perm, Perm], Coords] = {}
        self._dual_product: dict[tuple[Perm, Perm], Coords] = {}
        self._mixed_product: dict[tuple[Perm, Perm], Coords] = {}
        self._kl_times_dual: dict[tuple[Perm, Perm], Coords] = {}

    # -- construction ---------------------------------------------------

    def _build(self) -> dict[Perm, Coords]:
        h: dict[Perm, Coords] = {}
        mu_lower: dict[Perm, dict[Perm, int]] = {}
        for w in self.els:
            desc = self._ldesc[w]
            if not desc:
                h[w] = {w: ONE}
                mu_lower[w] = {}
                continue
            s = min(desc)
            u = mul_simple_left(w, s)
            row = _lmul_simple(h[u], s)
            _add_into(row, h[u], V)
            for z, m in mu_lower[u].items():
                if s in self._ldesc[z]:
                    _add_into(row, h[z], LaurentPoly.term(-m))
            h[w] = row
            mu_lower[w] = {
                y: c.coeff(1) for y, c in row.items() if y != w and c.coeff(1)
            }
        return h

    def validate(self) -> None:
        """Check the defining invariants of the h-table; raises ValueError."""
        for x in self.els:
            row = self.h_table.get(x)
            if row is None:
                raise ValueError(f"missing KL row for {format_perm(x)}")
            if row.get(x) != ONE:
                raise ValueError(f"h({format_perm(x)},{format_perm(x)}) != 1")
            for y, poly in row.items():
                if not poly:
                    raise ValueError("stored zero coefficient in KL row")
                if y != x:
                    if not bruhat_leq(y, x):
                        raise ValueError(
                            f"h({format_perm(x)},{format_perm(y)}) nonzero but "
                            f"{format_perm(y)} is not Bruhat-below {format_perm(x)}"
                        )
                    if poly.valuation < 1:
                        raise ValueError("off-diagonal KL entry outside vZ[v]")
                    if poly.degree > length(x) - length(y):
                        raise ValueError("KL entry degree exceeds the length difference")

    # -- basics -----------------------------------------------------------

    def h(self, x: Perm, y: Perm) -> LaurentPoly:
        """The KL polynomial h_{x,y}: the coefficient of H_y in kl(x)."""
        return self.h_table[x].get(y, ZERO)

    def mu(self, x: Perm, y: Perm) -> int:
        """The symmetrized coefficient at v in h between x and y."""
        return self._mu_adj[x].get(y, 0)

    def mu_neighbors(self, x: Perm) -> dict[Perm, int]:
        return self._mu_adj[x]

    def kl_element(self, w: Perm) -> HeckeElt:
        return HeckeElt(self.n, dict(self.h_table[w]))

    def bar_std(self, w: Perm) -> Coords:
        """Standard coordinates of bar(H_w) = (H_{s_1})^-1 ... (H_{s_k})^-1."""
        cached = self._bar_std.get(w)
        if cached is None:
            cur: Coords = {identity(self.n): ONE}
            for i in reduced_word(w):
                nxt = _rmul_simple(cur, i)
                _add_into(nxt, cur, V_MINUS_VINV)
                cur = nxt
            self._bar_std[w] = cached = cur
        return cached

    def bar_elt(self, a: HeckeElt) -> HeckeElt:
        """The bar involution: bar on scalars, H_s -> H_s^-1 multiplicatively."""
        acc: Coords = {}
        for w, c in a.coords.items():
            _add_into(acc, self.bar_std(w), c.bar())
        return HeckeElt(self.n, acc)

    def dual_std(self, w: Perm) -> Coords:
        cached = self._dual_std.get(w)
        if cached is None:
            base = self.h_table[compose(w, self.w0)]
            cur = {x: c.beta() for x, c in base.items()}
            for i in reduced_word(self.w0):
                cur = _rmul_simple(cur, i)
            self._dual_std[w] = cached = cur
        return cached

    def dual_kl_element(self, w: Perm) -> HeckeElt:
        return HeckeElt(self.n, dict(self.dual_std(w)))

    def tilting_std(self, w: Perm) -> Coords:
        cached = self._tilt_std.get(w)
        if cached is None:
            cur = dict(self.h_table[compose(self.w0, w)])
            for i in reversed(reduced_word(self.w0)):
                cur = _lmul_simple(cur, i)
            self._tilt_std[w] = cached = cur
        return cached

    def tilting_element(self, w: Perm) -> HeckeElt:
        return HeckeElt(self.n, dict(self.tilting_std(w)))

    # -- basis conversions -------------------------------------------------

    def to_kl_coords(self, a: HeckeElt) -> Coords:
        """Coordinates of a in the KL basis (unitriangular back-substitution)."""
        rem = dict(a.coords)
        out: Coords = {}
        while rem:
            w = max(rem, key=sort_key)
            c = rem[w]
            out[w] = c
            _add_into(rem, self.h_table[w], -c)
        return out

    def to_dual_kl_coords(self, a: HeckeElt) -> Coords:
        rem = dict(a.coords)
        out: Coords = {}
        while rem:
            w = min(rem, key=sort_key)
            c = rem[w]
            out[w] = c
            _add_into(rem, self.dual_std(w), -c)
        return out

    def to_tilting_coords(self, a: HeckeElt) -> Coords:
        rem = dict(a.coords)
        out: Coords = {}
        while rem:
            w = min(rem, key=sort_key)
            c = rem[w]
            out[w] = c
            _add_into(rem, self.tilting_std(w), -c)
        return out

    # -- structure constants -------------------------------------------------

    def kl_product(self, x: Perm, y: Perm) -> Coords:
        """KL coordinates of kl(x) * kl(y)."""
        key = (x, y)
        cached = self._kl_product.get(key)
        if cached is None:
            prod = self.kl_element(x) * self.kl_element(y)
            cached = self._kl_product[key] = self.to_kl_coords(prod)
        return cached

    def gamma(self, x: Perm, y: Perm, w: Perm) -> LaurentPoly:
        return self.kl_product(x, y).get(w, ZERO)

    def dual_product(self, x: Perm, y: Perm) -> Coords:
        """Dual-KL coordinates of dual(x) * dual(y)."""
        key = (x, y)
        cached = self._dual_product.get(key)
        if cached is None:
            prod = self.dual_kl_element(x) * self.dual_kl_element(y)
            cached = self._dual_product[key] = self.to_dual_kl_coords(prod)
        return cached

    def gamma_hat(self, x: Perm, y: Perm, w: Perm) -> LaurentPoly:
        return self.dual_product(x, y).get(w, ZERO)

    def gamma_hat_from_gamma(self, x: Perm, y: Perm, w: Perm) -> LaurentPoly:
        """The dual structure constant evaluated through the ordinary ones:
        the signed double sum over a, z of h_{w0 z, a} * bar(h_{y w0, a}) *
        gamma_{x w0, z}^{w w0}, with beta applied to the total."""
        xw0 = compose(x, self.w0)
        yw0 = compose(y, self.w0)
        ww0 = compose(w, self.w0)
        total = ZERO
        for a in self.els:
            ha = self.h(yw0, a)
            if not ha:
                continue
            ha_bar = ha.bar()
            lw0a = length(compose(self.w0, a))
            for z in self.els:
                hz = self.h(compose(self.w0, z), a)
                if not hz:
                    continue
                gam = self.gamma(xw0, z, ww0)
                if not gam:
                    continue
                term = hz * ha_bar * gam
                if (lw0a - length(z)) % 2:
                    term = -term
                total = total + term
        return total.beta()

    def mixed_product(self, w: Perm, x: Perm) -> Coords:
        """Dual-KL coordinates of dual(w) * kl(x)."""
        key = (w, x)
        cached = self._mixed_product.get(key)
        if cached is None:
            prod = self.dual_kl_element(w) * self.kl_element(x)
            cached = self._mixed_product[key] = self.to_dual_kl_coords(prod)
        return cached

    def m_coeff(self, w: Perm, x: Perm, y: Perm) -> LaurentPoly:
        """Coefficient of dual(y) in dual(w) * kl(x)."""
        return self.mixed_product(w, x).get(y, ZERO)

    def kl_times_dual(self, x: Perm, w: Perm) -> Coords:
        """Dual-KL coordinates of kl(x) * dual(w)."""
        key = (x, w)
        cached = self._kl_times_dual.get(key)
        if cached is None:
            prod = self.kl_element(x) * self.dual_kl_element(w)
            cached = self._kl_times_dual[key] = self.to_dual_kl_coords(prod)
        return cached

    def n_coeff(self, x: Perm, w: Perm, y: Perm) -> LaurentPoly:
        """Coefficient of dual(y) in kl(x) * dual(w)."""
        return self.kl_times_dual(x, w).get(y, ZERO)

    # -- persistence ---------------------------------------------------------

    def save(self, path: str) -> None:
        entries = {}
        for x in self.els:
            for y, poly in self.h_table[x].items():
                entries[f"{format_perm(x)}|{format_perm(y)}"] = poly.to_json_dict()
        payload = {
            "version": 1,
            "n": self.n,
            "h": {k: entries[k] for k in sorted(entries)},
        }
        with open(path, "w") as fh:
            json.dump(payload, fh)

    @classmethod
    def load(cls, path: str) -> KLCache:
        with open(path) as fh:
            payload = json.load(fh)
        if payload.get("version") != 1:
            raise ValueError(f"unsupported cache version {payload.get('version')!r}")
        n = payload["n"]
        h: dict[Perm, Coords] = {w: {} for w in elements(n)}
        for key, data in payload["h"].items():
            xs, ys = key.split("|")
            x = parse_perm(xs, n)
            y = parse_perm(ys, n)
            h[x][y] = LaurentPoly.from_json_dict(data)
        cache = cls(n, h=h)
        cache.validate()
        return cache


@lru_cache(maxsize=8)
def get_cache(n: int) -> KLCache:
    """Process-wide KLCache per rank (built fresh, not loaded from disk)."""
    return KLCache(n)


# -- rendering ---------------------------------------------------------------


def render_coords(coords: Coords, label: str) -> str:
    """Canonical text form: terms in descending (length, lex) order; composite
    or negative coefficients parenthesized."""
    if not coords:
        return "0"
    parts = []
    for w in sorted(coords, key=sort_key, reverse=True):
        c = coords[w]
        base = f"{label}[{format_perm(w)}]"
        if c == ONE:
            parts.append(base)
            continue
        cstr = str(c)
        if len(c.items()) > 1 or cstr.startswith("-"):
            parts.append(f"({cstr})*{base}")
        else:
            parts.append(f"{cstr}*{base}")
    return " + ".join(parts)


def render_elt(a: HeckeElt, label: str = "H") -> str:
    return render_coords(a.coords, label)
