"""KL preorders, cells, the a-function, and coideal index sets.

The left preorder is generated by the simple products: there is an edge
x -> z whenever the KL element of z appears in kl(s) * kl(x) for a simple
reflection s, which by the simple-product rule means either sx < x and
z = x, or sx > x and mu(x, z) != 0 with sz < z.  Right edges mirror this
with right descents.  Reachability closures are kept as bitsets over the
fixed total order, one per element.
"""

from __future__ import annotations

from dataclasses import dataclass

from .algebra import KLCache
from .laurent import ZERO
from .permutations import (
    Perm,
    format_perm,
    left_descents,
    length,
    parabolic_longest,
    right_descents,
    sort_key,
)
from .tableaux import involutions_by_tableau, rs, shape_of

ORDERS = ("left", "right", "two_sided")


def _edges(kl: KLCache, order: str) -> list[set[int]]:
    idx = {w: i for i, w in enumerate(kl.els)}
    n = kl.n
    adj: list[set[int]] = [{i} for i in range(len(kl.els))]
    for x in kl.els:
        xi = idx[x]
        if order in ("left", "two_sided"):
            ldesc = left_descents(x)
            for s in range(1, n):
                if s in ldesc:
                    continue
                for z, _m in kl.mu_neighbors(x).items():
                    if s in left_descents(z):
                        adj[xi].add(idx[z])
        if order in ("right", "two_sided"):
            rdesc = right_descents(x)
            for s in range(1, n):
                if s in rdesc:
                    continue
                for z, _m in kl.mu_neighbors(x).items():
                    if s in right_descents(z):
                        adj[xi].add(idx[z])
    return adj


def _closure(adj: list[set[int]]) -> list[int]:
    """Transitive closure as bitmasks: bit j of reach[i] iff i reaches j."""
    m = len(adj)
    masks = [0] * m
    for i in range(m):
        seen = 1 << i
        stack = [i]
        while stack:
            u = stack.pop()
            for vtx in adj[u]:
                b = 1 << vtx
                if not seen & b:
                    seen |= b
                    stack.append(vtx)
        masks[i] = seen
    return masks


def _reach(kl: KLCache, order: str) -> list[int]:
    cache = getattr(kl, "_cell_reach", None)
    if cache is None:
        cache = kl._cell_reach = {}
    if order not in cache:
        if order not in ORDERS:
            raise ValueError(f"unknown order {order!r}")
        cache[order] = _closure(_edges(kl, order))
    return cache[order]


def left_leq(x: Perm, y: Perm, kl: KLCache) -> bool:
    """x <=_L y: the KL element of y appears in some kl(w) * kl(x)."""
    idx = {w: i for i, w in enumerate(kl.els)}
    return bool(_reach(kl, "left")[idx[x]] >> idx[y] & 1)


def right_leq(x: Perm, y: Perm, kl: KLCache) -> bool:
    idx = {w: i for i, w in enumerate(kl.els)}
    return bool(_reach(kl, "right")[idx[x]] >> idx[y] & 1)


def twosided_leq(x: Perm, y: Perm, kl: KLCache) -> bool:
    idx = {w: i for i, w in enumerate(kl.els)}
    return bool(_reach(kl, "two_sided")[idx[x]] >> idx[y] & 1)


def lm_set(w: Perm, kl: KLCache) -> tuple[Perm, ...]:
    """{u : u >=_L w}, the index set of the left coideal span."""
    idx = {u: i for i, u in enumerate(kl.els)}
    mask = _reach(kl, "left")[idx[w]]
    return tuple(u for i, u in enumerate(kl.els) if mask >> i & 1)


def ln_set(w: Perm, kl: KLCache) -> tuple[Perm, ...]:
    """{u : u <=_L w}."""
    idx = {u: i for i, u in enumerate(kl.els)}
    reach = _reach(kl, "left")
    wi = idx[w]
    return tuple(u for i, u in enumerate(kl.els) if reach[i] >> wi & 1)


def rn_set(w: Perm, kl: KLCache) -> tuple[Perm, ...]:
    """{u : u <=_R w}."""
    idx = {u: i for i, u in enumerate(kl.els)}
    reach = _reach(kl, "right")
    wi = idx[w]
    return tuple(u for i, u in enumerate(kl.els) if reach[i] >> wi & 1)


@dataclass(frozen=True)
class CellDecomposition:
    order: str
    classes: tuple[tuple[Perm, ...], ...]
    leq: frozenset[tuple[int, int]]  # class i <= class j (reflexive)

    def class_of(self, w: Perm) -> int:
        for i, cls in enumerate(self.classes):
            if w in cls:
                return i
        raise ValueError(f"{format_perm(w)} not in any class")

    def hasse(self) -> tuple[tuple[int, int], ...]:
        """Covers of the strict class order (transitive reduction)."""
        strict = {(i, j) for i, j in self.leq if i != j}
        covers = []
        for i, j in sorted(strict):
            if not any((i, k) in strict and (k, j) in strict for k in range(len(self.classes))):
                covers.append((i, j))
        return tuple(covers)


def cells(n: int, order: str, kl: KLCache) -> CellDecomposition:
    """Strongly connected components of the preorder graph with the induced
    partial order on classes."""
    reach = _reach(kl, order)
    els = kl.els
    m = len(els)
    seen = [False] * m
    raw_classes: list[list[int]] = []
    for i in range(m):
        if seen[i]:
            continue
        cls = [j for j in range(m) if reach[i] >> j & 1 and reach[j] >> i & 1]
        for j in cls:
            seen[j] = True
        raw_classes.append(cls)
    classes = tuple(
        tuple(els[j] for j in sorted(cls))
        for cls in sorted(raw_classes, key=lambda c: min(c))
    )
    leq = set()
    reps = [min(cls) for cls in sorted((sorted(c) for c in raw_classes), key=min)]
    for i, ri in enumerate(reps):
        for j, rj in enumerate(reps):
            if reach[ri] >> rj & 1:
                leq.add((i, j))
    return CellDecomposition(order=order, classes=classes, leq=frozenset(leq))


def cells_sorted_for_report(dec: CellDecomposition) -> tuple[tuple[Perm, ...], ...]:
    """Cells ordered by (shape descending-lex, least recording tableau)."""

    def cell_key(cls: tuple[Perm, ...]):
        shp = shape_of(cls[0])
        q = min(rs(w)[1] for w in cls)
        return (tuple(-p for p in shp), q)

    return tuple(sorted(dec.classes, key=cell_key))


# -- brute-force reference (for validation) -------------------------------


def preorder_reach_full(kl: KLCache, order: str) -> list[int]:
    """Reachability generated by products against every KL element, not just
    the simple ones; used to validate the simple-edge construction."""
    els = kl.els
    idx = {w: i for i, w in enumerate(els)}
    adj: list[set[int]] = [{i} for i in range(len(els))]
    for x in els:
        xi = idx[x]
        for w in els:
            if order in ("left", "two_sided"):
                for z in kl.kl_product(w, x):
                    adj[xi].add(idx[z])
            if order in ("right", "two_sided"):
                for z in kl.kl_product(x, w):
                    adj[xi].add(idx[z])
    if order == "two_sided":
        # support of a triple product: positivity of the structure constants
        # rules out cancellation, so supports of cached pairwise products
        # compose exactly
        for x in els:
            xi = idx[x]
            for w2 in els:
                for u in kl.kl_product(x, w2):
                    for w1 in els:
                        for z in kl.kl_product(w1, u):
                            adj[xi].add(idx[z])
    return _closure(adj)


# -- a-function -------------------------------------------------------------


def a_table(kl: KLCache) -> dict[Perm, int]:
    """a(w) = max over x, y of deg gamma_{x,y}^w, via the full product scan."""
    cached = getattr(kl, "_a_table", None)
    if cached is not None:
        return cached
    table: dict[Perm, int] = {}
    for x in kl.els:
        for y in kl.els:
            for w, poly in kl.kl_product(x, y).items():
                d = poly.degree
                if table.get(w, -1) < d:
                    table[w] = d
    kl._a_table = table
    return table


def a_function(w: Perm, kl: KLCache) -> int:
    return a_table(kl)[w]


def afunction_property_report(n: int, kl: KLCache) -> dict:
    """Exhaustive check of the listed a-function properties; the monotonicity
    statements are implemented with a increasing along the preorders (the
    stated inequalities carry a typo), and that resolution is flagged here.
    """
    table = a_table(kl)
    els = kl.els
    idx = {w: i for i, w in enumerate(els)}
    report: dict = {
        "n": n,
        "note": "monotonicity read as: x <= y in a KL preorder implies a(x) <= a(y)",
        "properties": {},
    }

    def record(name: str, failures: list) -> None:
        report["properties"][name] = {
            "passed": not failures,
            "failures": failures[:5],
            "failure_count": len(failures),
        }

    for order in ORDERS:
        reach = _reach(kl, order)
        bad = []
        for x in els:
            for y in els:
                if reach[idx[x]] >> idx[y] & 1 and table[x] > table[y]:
                    bad.append((format_perm(x), format_perm(y), table[x], table[y]))
        record(f"monotone_{order}", bad)
        strict_bad = []
        for x in els:
            for y in els:
                xi, yi = idx[x], idx[y]
                if reach[xi] >> yi & 1 and not reach[yi] >> xi & 1:
                    if not table[x] < table[y]:
                        strict_bad.append((format_perm(x), format_perm(y)))
        record(f"strict_monotone_{order}", strict_bad)

    record("a_leq_length", [(format_perm(w), table[w], length(w)) for w in els if table[w] > length(w)])

    bad = []
    for bits in range(1 << (n - 1)):
        J = {i + 1 for i in range(n - 1) if bits >> i & 1}
        w0j = parabolic_longest(J, n)
        if table[w0j] != length(w0j):
            bad.append((sorted(J), format_perm(w0j), table[w0j], length(w0j)))
    record("parabolic_longest_a_equals_length", bad)

    reach_j = _reach(kl, "two_sided")
    bad = []
    for x in els:
        for y in els:
            row = kl.kl_product(x, y)
            for w, poly in row.items():
                if poly.degree == table[w]:
                    xi, wi = idx[x], idx[w]
                    if not (reach_j[xi] >> wi & 1 and reach_j[wi] >> xi & 1):
                        bad.append((format_perm(x), format_perm(y), format_perm(w)))
    record("degree_attaining_implies_two_sided_equivalence", bad)

    bad = []
    dec = cells(n, "two_sided", kl)
    for cls in dec.classes:
        vals = {table[w] for w in cls}
        if len(vals) != 1:
            bad.append(tuple(format_perm(w) for w in cls))
    record("constant_on_two_sided_cells", bad)

    report["passed"] = all(p["passed"] for p in report["properties"].values())
    return report


# -- emitters ---------------------------------------------------------------


def cells_json(dec: CellDecomposition) -> dict:
    return {
        "version": 1,
        "order": dec.order,
        "classes": [[format_perm(w) for w in cls] for cls in dec.classes],
        "hasse": [list(edge) for edge in dec.hasse()],
    }


def involution_hasse_edges(kl: KLCache) -> tuple[tuple[tuple, tuple], ...]:
    """Hasse diagram of <=_L restricted to involutions, with nodes labeled by
    their tableaux (P = Q); edges point from the smaller to the larger."""
    n = kl.n
    by_tab = involutions_by_tableau(n)
    idx = {w: i for i, w in enumerate(kl.els)}
    reach = _reach(kl, "left")
    tabs = sorted(by_tab)
    leq = {}
    for t1 in tabs:
        for t2 in tabs:
            leq[(t1, t2)] = bool(reach[idx[by_tab[t1]]] >> idx[by_tab[t2]] & 1)
    edges = []
    for t1 in tabs:
        for t2 in tabs:
            if t1 == t2 or not leq[(t1, t2)] or leq[(t2, t1)]:
                continue
            if any(
                leq[(t1, mid)] and leq[(mid, t2)] and not leq[(mid, t1)] and not leq[(t2, mid)]
                for mid in tabs
                if mid not in (t1, t2)
            ):
                continue
            edges.append((t1, t2))
    return tuple(sorted(edges))


def involution_hasse_dot(kl: KLCache) -> str:
    """DOT source for the involution Hasse diagram, nodes named by tableau rows."""

    def node(t) -> str:
        return "T" + "_".join("".join(str(x) for x in row) for row in t)

    def label(t) -> str:
        return "|".join(" ".join(str(x) for x in row) for row in t)

    lines = ["graph involution_left_order {"]
    tabs = sorted({t for edge in involution_hasse_edges(kl) for t in edge})
    for t in tabs:
        lines.append(f'  {node(t)} [label="{label(t)}"];')
    for t1, t2 in involution_hasse_edges(kl):
        lines.append(f"  {node(t1)} -- {node(t2)};")
    lines.append("}")
    return "\n".join(lines)
