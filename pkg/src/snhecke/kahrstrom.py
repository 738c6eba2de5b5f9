"""Decision procedures for the combinatorial Kahrstrom conditions and
exhaustive scanners for their structural properties and open conjectures.

The graded condition for w asks for distinct x, y with
dual(w) * kl(x) = dual(w) * kl(y) != 0; the ungraded condition asks the
same after evaluating v to 1.  Products are compared in dual-KL
coordinates (a canonical form), and the search runs over the x with
nonzero product, which by the vanishing criterion are exactly those with
x^-1 <=_L w.  Scanners distinguish proved statements (a failure is a bug
and lands in `violations`) from open conjectures (a failure is a finding
and lands in `counterexamples`).
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field

from .algebra import Coords, HeckeElt, KLCache
from .cells import cells, ln_set, lm_set, rn_set
from .laurent import ZERO, LaurentPoly
from .permutations import (
    Perm,
    compose,
    element_index,
    format_perm,
    inverse,
    length,
    longest_element,
    parabolic_blocks,
    parabolic_elements,
    parabolic_longest,
    reduced_word,
    sort_key,
)
from .submodules import SpanBasis
from .intlinalg import solve_left


def _pair_key(pair: tuple[Perm, Perm]) -> tuple:
    x, y = pair
    return (length(x) + length(y), sort_key(x), sort_key(y))


def _coords_key(coords: Coords) -> tuple:
    return tuple(sorted((w, p.key()) for w, p in coords.items()))


def _specialized(coords: Coords) -> dict[Perm, int]:
    out = {}
    for w, p in coords.items():
        c = p.at_one()
        if c:
            out[w] = c
    return out


def valid_left_factors(w: Perm, kl: KLCache) -> tuple[Perm, ...]:
    """The x with dual(w) * kl(x) != 0: exactly those with x^-1 <=_L w."""
    allowed = set(ln_set(w, kl))
    return tuple(x for x in kl.els if inverse(x) in allowed)


@dataclass(frozen=True)
class KhVerdict:
    w: Perm
    graded: bool | None
    ungraded: bool | None
    graded_witnesses: tuple[tuple[Perm, Perm], ...] = ()
    ungraded_witnesses: tuple[tuple[Perm, Perm], ...] = ()


def _collision_pairs(products: dict[Perm, object]) -> tuple[tuple[Perm, Perm], ...]:
    groups: dict[object, list[Perm]] = {}
    for x, key in products.items():
        groups.setdefault(key, []).append(x)
    pairs = []
    for members in groups.values():
        if len(members) < 2:
            continue
        members.sort(key=sort_key)
        for i in range(len(members)):
            for j in range(i + 1, len(members)):
                pairs.append((members[i], members[j]))
    return tuple(sorted(pairs, key=_pair_key))


def kh_scan(w: Perm, kl: KLCache, mode: str = "both") -> KhVerdict:
    """Search for collisions dual(w)*kl(x) = dual(w)*kl(y) != 0 among the
    nonvanishing left factors; deterministic witness order (total length,
    then the fixed order)."""
    xs = valid_left_factors(w, kl)
    graded = ungraded = None
    gw: tuple = ()
    uw: tuple = ()
    if mode in ("graded", "both"):
        products = {x: _coords_key(kl.mixed_product(w, x)) for x in xs}
        gw = _collision_pairs(products)
        graded = bool(gw)
    if mode in ("ungraded", "both"):
        products = {
            x: tuple(sorted(_specialized(kl.mixed_product(w, x)).items())) for x in xs
        }
        uw = _collision_pairs(products)
        ungraded = bool(uw)
    return KhVerdict(w=w, graded=graded, ungraded=ungraded,
                     graded_witnesses=gw, ungraded_witnesses=uw)


def kh_graded(w: Perm, kl: KLCache) -> KhVerdict:
    return kh_scan(w, kl, mode="graded")


def kh_ungraded(w: Perm, kl: KLCache) -> KhVerdict:
    return kh_scan(w, kl, mode="ungraded")


def kh_reference(w: Perm, kl: KLCache, graded: bool) -> tuple[tuple[Perm, Perm], ...]:
    """Unpruned reference search over all ordered pairs; only for validating
    the nonvanishing prune on small ranks."""
    pairs = []
    els = kl.els
    for i, x in enumerate(els):
        px = kl.mixed_product(w, x)
        if not px:
            continue
        for y in els[i + 1 :]:
            py = kl.mixed_product(w, y)
            if not py:
                continue
            if graded:
                if px == py:
                    pairs.append((x, y))
            else:
                if _specialized(px) == _specialized(py):
                    pairs.append((x, y))
    return tuple(sorted(pairs, key=_pair_key))


def kh_table(n: int, kl: KLCache, mode: str = "both") -> dict[Perm, KhVerdict]:
    return {w: kh_scan(w, kl, mode) for w in kl.els}


# -- necessary conditions (proved; a failure is a bug) --------------------------


def check_necessary_conditions(n: int, kl: KLCache, sample: int | None = None,
                               seed: int = 0) -> dict:
    """Equal nonzero products force cell equivalence: dual(z)*kl(x) =
    dual(z)*kl(y) != 0 implies x ~_L y (graded and at v=1), and
    kl-side-swapped dual(x)*kl(z) = dual(y)*kl(z) != 0 implies x ~_R y.
    Exhaustive over triples, or seeded random sampling when `sample` is set.
    """
    els = kl.els
    left_cell = {}
    right_cell = {}
    for cls in cells(n, "left", kl).classes:
        for w in cls:
            left_cell[w] = cls
    for cls in cells(n, "right", kl).classes:
        for w in cls:
            right_cell[w] = cls
    violations = []
    checked = 0

    def check_triple(z: Perm, x: Perm, y: Perm) -> None:
        nonlocal checked
        checked += 1
        if x == y:
            return
        px, py = kl.mixed_product(z, x), kl.mixed_product(z, y)
        if px and px == py and left_cell[x] is not left_cell[y]:
            violations.append(("same_left_factor", format_perm(z), format_perm(x), format_perm(y)))
        if px and _specialized(px) == _specialized(py) and py and left_cell[x] is not left_cell[y]:
            violations.append(("same_left_factor_v1", format_perm(z), format_perm(x), format_perm(y)))
        qx, qy = kl.mixed_product(x, z), kl.mixed_product(y, z)
        if qx and qx == qy and right_cell[x] is not right_cell[y]:
            violations.append(("same_right_factor", format_perm(z), format_perm(x), format_perm(y)))
        if qx and qy and _specialized(qx) == _specialized(qy) and right_cell[x] is not right_cell[y]:
            violations.append(("same_right_factor_v1", format_perm(z), format_perm(x), format_perm(y)))

    if sample is None:
        for z in els:
            for i, x in enumerate(els):
                for y in els[i + 1 :]:
                    check_triple(z, x, y)
    else:
        rng = random.Random(seed)
        for _ in range(sample):
            z = rng.choice(els)
            x = rng.choice(els)
            y = rng.choice(els)
            if x != y:
                check_triple(z, x, y)
    return {"name": "necessary-conditions", "n": n, "checked": checked,
            "violations": violations, "counterexamples": []}


# -- left cell invariance of the conditions (open; weak form proved) -----------


def scan_left_cell_invariance(n: int, kl: KLCache, graded: bool = True) -> dict:
    """For every collision witness (w, x, y) and every w' in the left cell
    of w, test the transported equality with the same x and y (an open
    conjecture: counterexamples are findings).  For graded witnesses the
    proved weak form is asserted: dual-KL coordinates of
    dual(w')*(kl(x) - kl(y)) vanish at every a with a ~_R w' and are
    supported on a <=_R w'."""
    left_cells = cells(n, "left", kl).classes
    cell_of = {}
    for cls in left_cells:
        for w in cls:
            cell_of[w] = cls
    right_reach = {w: set(rn_set(w, kl)) for w in kl.els}
    right_cell_of = {}
    for cls in cells(n, "right", kl).classes:
        for w in cls:
            right_cell_of[w] = set(cls)
    counterexamples = []
    violations = []
    witnesses_checked = 0
    transports_checked = 0
    for w in kl.els:
        verdict = kh_scan(w, kl, "graded" if graded else "ungraded")
        pairs = verdict.graded_witnesses if graded else verdict.ungraded_witnesses
        for x, y in pairs:
            witnesses_checked += 1
            for wp in cell_of[w]:
                if wp == w:
                    continue
                transports_checked += 1
                pa, pb = kl.mixed_product(wp, x), kl.mixed_product(wp, y)
                if graded:
                    equal = pa == pb
                else:
                    equal = _specialized(pa) == _specialized(pb)
                if not equal:
                    counterexamples.append(
                        ("transport", format_perm(w), format_perm(x), format_perm(y), format_perm(wp))
                    )
                if graded:
                    diff: Coords = dict(pa)
                    for a, p in pb.items():
                        s = diff.get(a, ZERO) - p
                        if s:
                            diff[a] = s
                        elif a in diff:
                            del diff[a]
                    for a in diff:
                        if a in right_cell_of[wp]:
                            violations.append(
                                ("weak_form_cell_coordinate", format_perm(wp), format_perm(a))
                            )
                        if wp not in right_reach[a]:
                            violations.append(
                                ("weak_form_support_bound", format_perm(wp), format_perm(a))
                            )
    return {
        "name": "left-cell-invariance" + ("-graded" if graded else "-ungraded"),
        "n": n,
        "witnesses": witnesses_checked,
        "transports": transports_checked,
        "violations": violations,
        "counterexamples": counterexamples,
    }


def scan_witness_variation(n: int, kl: KLCache, graded: bool = True) -> dict:
    """For every collision witness (w, x, y), vary the pair to any (x', y')
    with x ~_R x', y ~_R y', x' ~_L y' and test the conjectured equality.
    The proved weak form is asserted: dual(w)*(kl(x') - kl(y')) lies in the
    span of the products dual(w)*kl(a) over a >_R x and a >_R y."""
    right_cell = {}
    for cls in cells(n, "right", kl).classes:
        for w in cls:
            right_cell[w] = cls
    left_cell = {}
    for cls in cells(n, "left", kl).classes:
        for w in cls:
            left_cell[w] = cls
    counterexamples = []
    violations = []
    checked = 0
    for w in kl.els:
        verdict = kh_scan(w, kl, "graded" if graded else "ungraded")
        pairs = verdict.graded_witnesses if graded else verdict.ungraded_witnesses
        for x, y in pairs:
            strictly_above = [
                a
                for a in kl.els
                if a not in right_cell[x] and a in lm_right(x, kl)
                and a not in right_cell[y] and a in lm_right(y, kl)
            ]
            for xp in right_cell[x]:
                for yp in right_cell[y]:
                    if (xp, yp) == (x, y) or xp == yp:
                        continue
                    if left_cell[xp] is not left_cell[yp]:
                        continue
                    checked += 1
                    pa, pb = kl.mixed_product(w, xp), kl.mixed_product(w, yp)
                    equal = pa == pb if graded else _specialized(pa) == _specialized(pb)
                    if not equal:
                        counterexamples.append(
                            ("variation", format_perm(w), format_perm(x), format_perm(y),
                             format_perm(xp), format_perm(yp))
                        )
                    if not _weak_variation_holds(w, xp, yp, strictly_above, kl, graded):
                        violations.append(
                            ("weak_form_span", format_perm(w), format_perm(xp), format_perm(yp))
                        )
    return {
        "name": "witness-variation" + ("-graded" if graded else "-ungraded"),
        "n": n,
        "checked": checked,
        "violations": violations,
        "counterexamples": counterexamples,
    }


def lm_right(x: Perm, kl: KLCache) -> set[Perm]:
    """{a : a >=_R x} (cached on the KLCache)."""
    cache = getattr(kl, "_rm_sets", None)
    if cache is None:
        cache = kl._rm_sets = {}
    if x not in cache:
        idx = element_index(kl.n)
        from .cells import _reach

        mask = _reach(kl, "right")[idx[x]]
        cache[x] = {u for i, u in enumerate(kl.els) if mask >> i & 1}
    return cache[x]


def _weak_variation_holds(w: Perm, xp: Perm, yp: Perm, above: list[Perm],
                          kl: KLCache, graded: bool) -> bool:
    target = kl.dual_kl_element(w) * (kl.kl_element(xp) - kl.kl_element(yp))
    if graded:
        gens = {a: kl.dual_kl_element(w) * kl.kl_element(a) for a in above}
        span = SpanBasis(gens, kl, coords="dualkl")
        return span.membership(target).member
    cols = sorted(kl.els)
    rows = []
    for a in above:
        coords = _specialized(kl.mixed_product(w, a))
        rows.append([coords.get(u, 0) for u in cols])
    tcoords = _specialized(kl.to_dual_kl_coords(target))
    tvec = [tcoords.get(u, 0) for u in cols]
    if not rows:
        return not any(tvec)
    return solve_left(rows, tvec) is not None


# -- parabolic induction ---------------------------------------------------------


def embed_block_element(w_small: Perm, offset: int, n: int) -> Perm:
    """Embed a permutation of {1..m} as a permutation of {1..n} acting on
    the window offset+1 .. offset+m."""
    m = len(w_small)
    out = list(range(1, n + 1))
    for i in range(m):
        out[offset + i] = offset + w_small[i]
    return tuple(out)


def restrict_block_element(w: Perm, a: int, b: int) -> Perm:
    """Extract the action of w on the window a..b as a permutation of 1..(b-a+1)."""
    return tuple(w[i] - (a - 1) for i in range(a - 1, b))


def parabolic_dual_kl(w: Perm, J, kl: KLCache) -> HeckeElt:
    """The dual-KL element of w taken inside the parabolic subalgebra of W_J,
    computed with the parabolic longest element in place of the long element."""
    w0j = parabolic_longest(J, kl.n)
    base = kl.kl_element(compose(w, w0j)).beta()
    cur = base.coords
    from .algebra import _rmul_simple

    for i in reduced_word(w0j):
        cur = _rmul_simple(cur, i)
    return HeckeElt(kl.n, cur)


def kl_restriction_check(J, n: int, kl: KLCache) -> list:
    """Sanity check (proved): KL polynomials restricted to a parabolic factor
    agree with those of the factors computed standalone and multiplied."""
    blocks = parabolic_blocks(J, n)
    factor_caches = [KLCache(b - a + 1) for a, b in blocks]
    bad = []
    wj = parabolic_elements(J, n)
    for x in wj:
        for y in wj:
            expected = None
            prod = None
            for (a, b), fkl in zip(blocks, factor_caches):
                hxy = fkl.h(restrict_block_element(x, a, b), restrict_block_element(y, a, b))
                prod = hxy if prod is None else prod * hxy
            if kl.h(x, y) != prod:
                bad.append((format_perm(x), format_perm(y), str(kl.h(x, y)), str(prod)))
    return bad


def parabolic_induction_report(J, n: int, kl: KLCache, graded: bool = True) -> dict:
    """Per element w of the parabolic W_J: the collision condition computed
    inside the parabolic subalgebra (condition a) must agree with the big
    group's condition for w * w0' * w0 (condition b).  A mismatch is a
    violation of a proved statement."""
    J = set(J)
    w0j = parabolic_longest(J, n)
    w0 = longest_element(n)
    wj = parabolic_elements(J, n)
    violations = []
    rows = []
    restriction_bad = kl_restriction_check(J, n, kl)
    if restriction_bad:
        violations.append(("kl_restriction", restriction_bad[:3]))
    dual_in_parabolic = {w: parabolic_dual_kl(w, J, kl) for w in wj}
    kl_elements = {x: kl.kl_element(x) for x in wj}
    for w in wj:
        products = {}
        dw = dual_in_parabolic[w]
        for x in wj:
            p = dw * kl_elements[x]
            if not p:
                continue
            if graded:
                products[x] = tuple(sorted((u, c.key()) for u, c in p.coords.items()))
            else:
                sp = p.specialize()
                if not sp:
                    continue
                products[x] = tuple(sorted(sp.coords.items()))
        cond_a = bool(_collision_pairs(products))
        m = compose(compose(w, w0j), w0)
        verdict = kh_scan(m, kl, "graded" if graded else "ungraded")
        cond_b = verdict.graded if graded else verdict.ungraded
        rows.append({
            "w": format_perm(w),
            "induced": format_perm(m),
            "inside_parabolic": cond_a,
            "in_big_group": bool(cond_b),
        })
        if cond_a != bool(cond_b):
            violations.append(("equivalence", format_perm(w), cond_a, bool(cond_b)))
    return {
        "name": "parabolic-induction" + ("-graded" if graded else "-ungraded"),
        "n": n,
        "J": sorted(J),
        "rows": rows,
        "violations": violations,
        "counterexamples": [],
    }
