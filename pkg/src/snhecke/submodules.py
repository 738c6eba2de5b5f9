"""Exact membership in finitely generated submodules of the regular module
over Z[v, v^-1], and the cyclic-submodule questions built on it.

A SpanBasis coordinatizes its generators in one of the three bases (the
sparsest available), clears the unit v^k from every row, and decides
membership in two phases:

1. fraction-field solvability against a fraction-free echelon form (content
   is stripped after every cross-multiplication);
2. normal-form reduction against a v-saturated strong Groebner basis of the
   Z[v]-row module (position-over-term order, positions ordered by the fixed
   total order on S_n).  Saturation iterates the colon (M : v), realized as
   integer kernels of the constant-term matrix of the current basis.

Member verdicts carry an exact certificate over the original generators;
non-member verdicts carry the obstructing normal form and, when one exists,
an integer-specialization obstruction.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import gcd

from .algebra import Coords, HeckeElt, KLCache
from .cells import lm_set, ln_set
from .intlinalg import kernel_basis, solve_left, xgcd
from .laurent import ONE, ZERO, LaurentPoly
from .permutations import (
    Perm,
    compose,
    element_index,
    elements,
    format_perm,
    length,
    parabolic_longest,
)

Vec = dict[int, LaurentPoly]


# -- sparse polynomial vectors ------------------------------------------------


def _vec_add_into(acc: Vec, other: Vec, scale: LaurentPoly | None = None) -> None:
    for j, p in other.items():
        pp = p if scale is None else p * scale
        cur = acc.get(j)
        s = pp if cur is None else cur + pp
        if s:
            acc[j] = s
        elif cur is not None:
            del acc[j]


def _vec_scale(vec: Vec, scale: LaurentPoly) -> Vec:
    return {j: p * scale for j, p in vec.items()}


def _vec_v_content(vec: Vec) -> int:
    return min(p.valuation for p in vec.values())


def _vec_int_content(vec: Vec) -> int:
    g = 0
    for p in vec.values():
        g = gcd(g, p.int_content())
        if g == 1:
            return 1
    return g


def _lead(vec: Vec) -> tuple[int, int, int]:
    """(position, degree, coeff) of the POT-leading term."""
    j = max(vec)
    p = vec[j]
    d = p.degree
    return j, d, p.coeff(d)


@dataclass
class _Row:
    vec: Vec
    cof: dict[object, LaurentPoly]

    def scaled(self, s: LaurentPoly) -> _Row:
        return _Row(_vec_scale(self.vec, s), {k: c * s for k, c in self.cof.items()})


def _row_normalize(row: _Row) -> _Row | None:
    """Strip the unit v^k and the sign so the leading coefficient is positive."""
    if not row.vec:
        return None
    k = _vec_v_content(row.vec)
    if k:
        row = row.scaled(LaurentPoly.term(1, -k))
    if _lead(row.vec)[2] < 0:
        row = row.scaled(LaurentPoly.term(-1))
    return row


def _row_add_scaled(dst: _Row, src: _Row, scale: LaurentPoly) -> None:
    _vec_add_into(dst.vec, src.vec, scale)
    for k, c in src.cof.items():
        cc = c * scale
        cur = dst.cof.get(k)
        s = cc if cur is None else cur + cc
        if s:
            dst.cof[k] = s
        elif cur is not None:
            del dst.cof[k]


# -- strong Groebner basis over Z[v] ------------------------------------------


class _Basis:
    """A set of rows indexed by leading position, each stored with its lead."""

    def __init__(self):
        self.rows: list[tuple[tuple[int, int, int], _Row]] = []
        self.by_pos: dict[int, list[int]] = {}

    def add(self, row: _Row) -> int:
        lead = _lead(row.vec)
        self.rows.append((lead, row))
        i = len(self.rows) - 1
        self.by_pos.setdefault(lead[0], []).append(i)
        return i

    def reducer(self, j: int, d: int, c: int, skip: int | None = None) -> int | None:
        """Index of a row whose lead divides c * v^d at position j."""
        best = None
        for i in self.by_pos.get(j, ()):
            if i == skip:
                continue
            (gj, gd, gc), _row = self.rows[i]
            if gd <= d and c % gc == 0:
                key = (gd, gc, i)
                if best is None or key < best[0]:
                    best = (key, i)
        return None if best is None else best[1]

    def remove(self, i: int) -> _Row:
        lead, row = self.rows[i]
        self.by_pos[lead[0]].remove(i)
        self.rows[i] = (lead, None)  # type: ignore[assignment]
        return row

    def live(self):
        return [(i, lead, row) for i, (lead, row) in enumerate(self.rows) if row is not None]


def _top_reduce(row: _Row, basis: _Basis, quotients: dict[int, LaurentPoly] | None = None) -> _Row:
    """Divide out leading terms while a basis lead divides (position equal,
    degree <=, integer coefficient dividing); stops when stuck."""
    while row.vec:
        j, d, c = _lead(row.vec)
        gi = basis.reducer(j, d, c)
        if gi is None:
            return row
        (gj, gd, gc), g = basis.rows[gi]
        q = LaurentPoly.term(-(c // gc), d - gd)
        _row_add_scaled(row, g, q)
        if quotients is not None:
            quotients[gi] = quotients.get(gi, ZERO) - q
    return row


def _full_reduce(row: _Row, basis: _Basis) -> _Row:
    """Normal form that keeps reducing below the leading term: irreducible
    leading monomials are stripped into the result and the tail continues."""
    out = _Row({}, dict(row.cof))
    work = dict(row.vec)
    while work:
        j = max(work)
        p = work[j]
        d = p.degree
        c = p.coeff(d)
        gi = basis.reducer(j, d, c)
        if gi is None:
            # strip the irreducible monomial and keep going
            out.vec[j] = out.vec.get(j, ZERO) + LaurentPoly.term(c, d)
            rest = p - LaurentPoly.term(c, d)
            if rest:
                work[j] = rest
            else:
                del work[j]
            continue
        (gj, gd, gc), g = basis.rows[gi]
        q = LaurentPoly.term(-(c // gc), d - gd)
        _vec_add_into(work, _vec_scale(g.vec, q))
        for k, cc in g.cof.items():
            s = out.cof.get(k, ZERO) + q * cc
            if s:
                out.cof[k] = s
            elif k in out.cof:
                del out.cof[k]
    out.vec = {j: p for j, p in out.vec.items() if p}
    return out


def _pairs_of(f_lead: tuple[int, int, int], f: _Row, g_lead: tuple[int, int, int], g: _Row) -> list[_Row]:
    """S-polynomial, and the gcd-polynomial when neither leading integer
    coefficient divides the other."""
    fj, fd, fc = f_lead
    gj, gd, gc = g_lead
    if fj != gj:
        return []
    out = []
    D = max(fd, gd)
    L = fc * gc // gcd(fc, gc)
    spoly = _Row(dict(f.vec), dict(f.cof)).scaled(LaurentPoly.term(L // fc, D - fd))
    _row_add_scaled(spoly, g, LaurentPoly.term(-(L // gc), D - gd))
    out.append(spoly)
    if fc % gc and gc % fc:
        x, y, _gg = xgcd(fc, gc)
        gpoly = _Row(dict(f.vec), dict(f.cof)).scaled(LaurentPoly.term(x, D - fd))
        _row_add_scaled(gpoly, g, LaurentPoly.term(y, D - gd))
        out.append(gpoly)
    return out


def _buchberger(rows: list[_Row]) -> _Basis:
    """Strong Groebner basis of the Z[v]-row module generated by `rows`.
    Candidates are processed smallest lead first and fully reduced; basis
    rows whose lead becomes divisible by a new lead are sent back to work.
    """
    work: list[_Row] = []
    seen: set[tuple] = set()
    for row in rows:
        norm = _row_normalize(_Row(dict(row.vec), dict(row.cof)))
        if norm is None:
            continue
        key = tuple(sorted((j, p.key()) for j, p in norm.vec.items()))
        if key in seen:
            continue
        seen.add(key)
        work.append(norm)
    basis = _Basis()
    while work:
        best = min(range(len(work)), key=lambda i: _lead(work[i].vec))
        cand = work.pop(best)
        cand = _row_normalize(cand)
        if cand is None:
            continue
        cand = _full_reduce(cand, basis)
        cand = _row_normalize(cand)
        if cand is None:
            continue
        j, d, c = _lead(cand.vec)
        # interreduce: displaced rows re-enter the work list
        for i, (gj, gd, gc), _row in basis.live():
            if gj == j and d <= gd and gc % c == 0:
                work.append(basis.remove(i))
        for _i, g_lead, g in basis.live():
            work.extend(_pairs_of((j, d, c), cand, g_lead, g))
        basis.add(cand)
    final = [(lead, row) for _i, lead, row in basis.live()]
    final.sort(key=lambda t: t[0])
    out = _Basis()
    for _lead_t, row in final:
        out.add(row)
    return out


def _saturate(rows: list[_Row]) -> _Basis:
    """Close the row module under division by v (the colon (M : v), iterated
    until stable): integer kernels of the constant-term matrix of the basis
    yield the combinations divisible by v."""
    basis = _buchberger(rows)
    while True:
        live = basis.live()
        cols = sorted({j for _i, _lead_t, row in live for j in row.vec})
        const = [
            [row.vec.get(j, ZERO).coeff(0) for j in cols] for _i, _lead_t, row in live
        ]
        new_rows: list[_Row] = []
        for combo in kernel_basis(const):
            acc = _Row({}, {})
            for c, (_i, _lead_t, row) in zip(combo, live):
                if c:
                    _row_add_scaled(acc, row, LaurentPoly.term(c))
            norm = _row_normalize(acc)
            if norm is None:
                continue
            red = _row_normalize(_top_reduce(norm, basis))
            if red is not None:
                new_rows.append(red)
        if not new_rows:
            return basis
        basis = _buchberger([row for _i, _lead_t, row in basis.live()] + new_rows)


# -- fraction-field echelon ----------------------------------------------------


def _strip_content(vec: Vec) -> Vec:
    k = _vec_v_content(vec)
    if k:
        vec = _vec_scale(vec, LaurentPoly.term(1, -k))
    g = _vec_int_content(vec)
    if g > 1:
        vec = {j: p.scale_div(g) for j, p in vec.items()}
    if _lead(vec)[2] < 0:
        vec = _vec_scale(vec, LaurentPoly.term(-1))
    return vec


def _echelon_reduce(vec: Vec, echelon: dict[int, Vec]) -> Vec:
    """Fraction-free reduction of vec against pivot rows keyed by lead position."""
    while vec:
        j = max(vec)
        pivot = echelon.get(j)
        if pivot is None:
            return vec
        scale_self = pivot[j]
        scale_piv = vec[j]
        vec = _vec_scale(vec, scale_self)
        _vec_add_into(vec, pivot, -scale_piv)
        if vec:
            vec = _strip_content(vec)
    return vec


def _build_echelon(vecs: list[Vec]) -> dict[int, Vec]:
    echelon: dict[int, Vec] = {}
    for vec in vecs:
        red = _echelon_reduce(dict(vec), echelon)
        if red:
            echelon[max(red)] = red
    return echelon


# -- the public span/membership interface ---------------------------------------


@dataclass(frozen=True)
class Verdict:
    member: bool
    certificate: dict[object, LaurentPoly] | None = None
    witness: dict | None = None


class SpanBasis:
    """The Z[v,v^-1]-span of a list of Hecke elements, with exact membership.

    `coords` selects the coordinate basis ("standard", "kl" or "dualkl");
    conversions are unimodular-triangular, so membership is basis-independent
    and the sparsest choice wins.
    """

    def __init__(
        self,
        generators: dict[object, HeckeElt],
        kl: KLCache,
        coords: str = "standard",
    ):
        self.kl = kl
        self.n = kl.n
        self.coords = coords
        self.labels = tuple(generators)
        self.generators = dict(generators)
        self._idx = element_index(self.n)
        rows: list[_Row] = []
        for label, gen in generators.items():
            vec = self._to_vec(gen)
            if not vec:
                continue
            row = _row_normalize(_Row(vec, {label: ONE}))
            rows.append(row)
        self._rows = rows
        self._echelon: dict[int, Vec] | None = None
        self._satgb: _Basis | None = None

    def _to_vec(self, elt: HeckeElt) -> Vec:
        if elt.n != self.n:
            raise ValueError(f"rank mismatch: S_{elt.n} element against S_{self.n} span")
        if self.coords == "standard":
            c = elt.coords
        elif self.coords == "kl":
            c = self.kl.to_kl_coords(elt)
        elif self.coords == "dualkl":
            c = self.kl.to_dual_kl_coords(elt)
        else:
            raise ValueError(f"unknown coordinate basis {self.coords!r}")
        return {self._idx[w]: p for w, p in c.items()}

    def echelon(self) -> dict[int, Vec]:
        if self._echelon is None:
            self._echelon = _build_echelon([r.vec for r in self._rows])
        return self._echelon

    def rank(self) -> int:
        return len(self.echelon())

    def saturated_basis(self) -> _Basis:
        if self._satgb is None:
            self._satgb = _saturate(self._rows)
        return self._satgb

    def solvable_over_fractions(self, target: HeckeElt) -> bool:
        vec = self._to_vec(target)
        if not vec:
            return True
        return not _echelon_reduce(_strip_content(vec), self.echelon())

    def _int_obstruction(self, target: HeckeElt) -> dict | None:
        """Try to exhibit a human-readable obstruction by specializing v -> 1."""
        cols = sorted({j for r in self._rows for j in r.vec} | set(self._to_vec(target)))
        rows = [[r.vec.get(j, ZERO).at_one() for j in cols] for r in self._rows]
        tvec = self._to_vec(target)
        t = [tvec.get(j, ZERO).at_one() if j in tvec else 0 for j in cols]
        if solve_left(rows, t) is None:
            return {"evaluation": "v=1", "reason": "integer system unsolvable"}
        return None

    def membership(self, target: HeckeElt) -> Verdict:
        vec = self._to_vec(target)
        if not vec:
            return Verdict(member=True, certificate={})
        if not self.solvable_over_fractions(target):
            return Verdict(
                member=False,
                witness={
                    "reason": "not solvable over the fraction field",
                    "rank": self.rank(),
                    "obstruction": self._int_obstruction(target),
                },
            )
        shift = _vec_v_content(vec)
        work = _Row(_vec_scale(vec, LaurentPoly.term(1, -shift)), {})
        basis = self.saturated_basis()
        quotients: dict[int, LaurentPoly] = {}
        red = _top_reduce(work, basis, quotients)
        if red.vec:
            return Verdict(
                member=False,
                witness={
                    "reason": "nonzero normal form against the saturated basis",
                    "normal_form": {
                        str(j): str(p) for j, p in sorted(red.vec.items())
                    },
                    "obstruction": self._int_obstruction(target),
                },
            )
        unit = LaurentPoly.term(1, shift)
        cert: dict[object, LaurentPoly] = {}
        for gi, q in quotients.items():
            for label, c in basis.rows[gi][1].cof.items():
                s = cert.get(label, ZERO) + q * c * unit
                if s:
                    cert[label] = s
                elif label in cert:
                    del cert[label]
        return Verdict(member=True, certificate=cert)

    def verify_certificate(self, target: HeckeElt, cert: dict[object, LaurentPoly]) -> bool:
        acc = HeckeElt.zero(self.n)
        for label, coeff in cert.items():
            acc = acc + self.generators[label] * coeff
        return acc == target


def cyclic_submodule(g: HeckeElt, kl: KLCache, coords: str = "standard") -> SpanBasis:
    """The left cyclic module generated by g, with the KL elements as the
    spanning multipliers: generators kl(z) * g for all z."""
    gens = {z: kl.kl_element(z) * g for z in kl.els}
    return SpanBasis(gens, kl, coords=coords)


def rank_over_fraction_field(basis: SpanBasis) -> int:
    return basis.rank()


def membership(target: HeckeElt, basis: SpanBasis) -> Verdict:
    return basis.membership(target)


# -- the cyclic-module questions -------------------------------------------------


def equals_lm(w: Perm, kl: KLCache) -> tuple[bool, dict]:
    """Does the cyclic module of kl(w) contain every kl(u) with u >=_L w?
    (Containment the other way holds always and is not tested.)"""
    lm = lm_set(w, kl)
    sub = cyclic_submodule(kl.kl_element(w), kl, coords="kl")
    details: dict = {"w": format_perm(w), "lm_size": len(lm), "rank": sub.rank()}
    if sub.rank() < len(lm):
        for u in lm:
            if not sub.solvable_over_fractions(kl.kl_element(u)):
                details["failure"] = format_perm(u)
                details["failure_reason"] = "fraction-field rank"
                break
        return False, details
    for u in lm:
        verdict = sub.membership(kl.kl_element(u))
        if not verdict.member:
            details["failure"] = format_perm(u)
            details["failure_reason"] = verdict.witness["reason"]
            return False, details
    return True, details


def equals_ln_dual(w: Perm, kl: KLCache) -> tuple[bool, dict]:
    """Does the cyclic module of dual(w) contain every dual(u) with u <=_L w?"""
    ln = ln_set(w, kl)
    sub = cyclic_submodule(kl.dual_kl_element(w), kl, coords="dualkl")
    details: dict = {"w": format_perm(w), "ln_size": len(ln), "rank": sub.rank()}
    if sub.rank() < len(ln):
        for u in ln:
            if not sub.solvable_over_fractions(kl.dual_kl_element(u)):
                details["failure"] = format_perm(u)
                details["failure_reason"] = "fraction-field rank"
                break
        return False, details
    for u in ln:
        verdict = sub.membership(kl.dual_kl_element(u))
        if not verdict.member:
            details["failure"] = format_perm(u)
            details["failure_reason"] = verdict.witness["reason"]
            return False, details
    return True, details


def quasi_idempotent_check(w: Perm, kl: KLCache) -> LaurentPoly | None:
    """The scalar a with kl(w)^2 = a * kl(w), when one exists."""
    row = kl.kl_product(w, w)
    if set(row) == {w}:
        return row[w]
    return None


def parabolic_quasi_idempotent_scalar(J, n: int) -> LaurentPoly:
    """The expected scalar for the longest parabolic element: the sum of
    v^(l(w0') - 2 l(x)) over the parabolic subgroup."""
    from .permutations import parabolic_elements

    w0j = parabolic_longest(J, n)
    lw = length(w0j)
    total = ZERO
    for x in parabolic_elements(J, n):
        total = total + LaurentPoly.term(1, lw - 2 * length(x))
    return total


def cor3345_hypothesis(w: Perm, kl: KLCache) -> bool:
    """Is {x : x >=_L w} exactly the set of length-additive left multiples
    {aw : l(aw) = l(a) + l(w)}?"""
    coideal = set(lm_set(w, kl))
    lw = length(w)
    winv = None
    additive = set()
    for y in kl.els:
        a = compose(y, _inverse_cached(w))
        if length(a) + lw == length(y):
            additive.add(y)
    return coideal == additive


def _inverse_cached(w: Perm) -> Perm:
    from .permutations import inverse

    return inverse(w)


def cor3345_survey(n: int, kl: KLCache) -> dict:
    """All w passing the coideal-generation hypothesis, against the parabolic
    longest elements; reported, never asserted."""
    passing = [w for w in kl.els if cor3345_hypothesis(w, kl)]
    parabolic = sorted(
        {parabolic_longest({i + 1 for i in range(n - 1) if bits >> i & 1}, n) for bits in range(1 << (n - 1))},
    )
    return {
        "n": n,
        "passing": [format_perm(w) for w in passing],
        "parabolic_longest": [format_perm(w) for w in sorted(parabolic)],
        "coincide": sorted(passing) == sorted(parabolic),
    }
