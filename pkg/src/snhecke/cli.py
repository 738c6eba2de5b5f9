"""Command-line entry point: compute, verify, scan, emit, cache.

Subcommands: klbasis, mult, structconsts, cells, hasse, afunc, cyclic,
kahrstrom, verify.  JSON outputs carry "version": 1; the kahrstrom and
verify subcommands exit 0 when all asserted checks pass, 2 when an open
conjecture acquires a counterexample, and 1 on an assertion failure.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time

from . import kahrstrom as kh_mod
from . import submodules as sub_mod
from .cells import (
    a_table,
    afunction_property_report,
    cells as cell_decomposition,
    cells_json,
    involution_hasse_dot,
)
from .algebra import HeckeElt, KLCache, render_coords, render_elt
from .laurent import LaurentPoly
from .permutations import (
    compose,
    elements,
    format_perm,
    longest_element,
    parabolic_longest,
    parse_perm,
    sort_key,
)

EXIT_OK = 0
EXIT_ASSERTION = 1
EXIT_COUNTEREXAMPLE = 2

DEFAULT_CACHE_DIR = os.path.join(os.path.expanduser("~"), ".cache", "snhecke")


def _cache_dir(args) -> str | None:
    if args.cache_dir:
        return args.cache_dir
    return os.environ.get("HECKE_CACHE_DIR", DEFAULT_CACHE_DIR)


def load_cache(n: int, cache_dir: str | None) -> KLCache:
    """Load the per-rank KL cache file, building and persisting on a miss."""
    if not cache_dir:
        return KLCache(n)
    path = os.path.join(cache_dir, f"kl-cache-s{n}.json")
    if os.path.exists(path):
        try:
            return KLCache.load(path)
        except (ValueError, KeyError, json.JSONDecodeError):
            pass  # fall through and rebuild a corrupt cache
    kl = KLCache(n)
    os.makedirs(cache_dir, exist_ok=True)
    tmp = path + ".tmp"
    kl.save(tmp)
    os.replace(tmp, path)
    return kl


def _check_rank(args) -> None:
    if args.n < 1:
        raise SystemExit("rank must be at least 1")
    if args.n > 6 and not args.allow_large:
        raise SystemExit(
            f"rank {args.n} exceeds the desk-scale bound 6; pass --allow-large to override"
        )


def _emit(args, payload: dict) -> None:
    if args.format == "json":
        print(json.dumps(payload, indent=2))
    else:
        for line in payload.get("lines", ()):
            print(line)


def _coords_json(coords) -> dict:
    """Coordinates as JSON, keyed by one-line forms in descending fixed order."""
    return {
        format_perm(w): coords[w].to_json_dict()
        for w in sorted(coords, key=sort_key, reverse=True)
    }


# -- subcommands -----------------------------------------------------------


def cmd_klbasis(args) -> int:
    kl = load_cache(args.n, _cache_dir(args))
    ws = [parse_perm(args.w, args.n)] if args.w else list(kl.els)
    lines = []
    data = {}
    for w in ws:
        name = format_perm(w)
        kl_s = render_elt(kl.kl_element(w))
        dual_s = render_elt(kl.dual_kl_element(w))
        tilt_s = render_elt(kl.tilting_element(w))
        lines.append(f"KL[{name}] = {kl_s}")
        lines.append(f"dKL[{name}] = {dual_s}")
        lines.append(f"T[{name}] = {tilt_s}")
        data[name] = {
            "kl": _coords_json(kl.kl_element(w).coords),
            "dual": _coords_json(kl.dual_kl_element(w).coords),
            "tilting": _coords_json(kl.tilting_element(w).coords),
        }
    _emit(args, {"version": 1, "n": args.n, "elements": data, "lines": lines})
    return EXIT_OK


def _basis_element(kl: KLCache, basis: str, w) -> HeckeElt:
    if basis == "standard":
        return HeckeElt.standard(w)
    if basis == "kl":
        return kl.kl_element(w)
    if basis == "dualkl":
        return kl.dual_kl_element(w)
    if basis == "tilting":
        return kl.tilting_element(w)
    raise SystemExit(f"unknown basis {basis!r}")


def _coords_in(kl: KLCache, basis: str, elt: HeckeElt):
    if basis == "standard":
        return elt.coords
    if basis == "kl":
        return kl.to_kl_coords(elt)
    if basis == "dualkl":
        return kl.to_dual_kl_coords(elt)
    if basis == "tilting":
        return kl.to_tilting_coords(elt)
    raise SystemExit(f"unknown basis {basis!r}")


_BASIS_LABEL = {"standard": "H", "kl": "KL", "dualkl": "dKL", "tilting": "T"}


def cmd_mult(args) -> int:
    kl = load_cache(args.n, _cache_dir(args))
    x = parse_perm(args.x, args.n)
    y = parse_perm(args.y, args.n)
    prod = _basis_element(kl, args.basis, x) * _basis_element(kl, args.basis, y)
    out_basis = args.out_basis or args.basis
    coords = _coords_in(kl, out_basis, prod)
    label = _BASIS_LABEL[out_basis]
    line = (
        f"{_BASIS_LABEL[args.basis]}[{format_perm(x)}] * "
        f"{_BASIS_LABEL[args.basis]}[{format_perm(y)}] = {render_coords(coords, label)}"
    )
    _emit(args, {
        "version": 1,
        "n": args.n,
        "basis": args.basis,
        "out_basis": out_basis,
        "x": format_perm(x),
        "y": format_perm(y),
        "product": _coords_json(coords),
        "lines": [line],
    })
    return EXIT_OK


def cmd_structconsts(args) -> int:
    kl = load_cache(args.n, _cache_dir(args))
    els = list(kl.els)
    dual = args.basis == "dualkl"
    tables = {}
    lines = []
    for w in els:
        grid = {}
        for x in els:
            for y in els:
                c = kl.gamma_hat(x, y, w) if dual else kl.gamma(x, y, w)
                if c:
                    grid.setdefault(format_perm(x), {})[format_perm(y)] = c.to_json_dict()
        tables[format_perm(w)] = grid
    sym = "gamma_hat" if dual else "gamma"
    for w in els:
        lines.append(f"{sym}(x, y -> {format_perm(w)}):")
        header = "x\\y".rjust(6) + " | " + " | ".join(format_perm(y).rjust(8) for y in els)
        lines.append(header)
        for x in els:
            cells_row = []
            for y in els:
                c = kl.gamma_hat(x, y, w) if dual else kl.gamma(x, y, w)
                cells_row.append(str(c).rjust(8))
            lines.append(format_perm(x).rjust(6) + " | " + " | ".join(cells_row))
        lines.append("")
    _emit(args, {"version": 1, "n": args.n, "basis": args.basis, "tables": tables, "lines": lines})
    return EXIT_OK


def cmd_cells(args) -> int:
    kl = load_cache(args.n, _cache_dir(args))
    dec = cell_decomposition(args.n, args.order, kl)
    payload = cells_json(dec)
    payload["lines"] = [
        f"{args.order} cells of S_{args.n}: {len(dec.classes)} classes",
        *(
            f"  {{{', '.join(format_perm(w) for w in cls)}}}"
            for cls in dec.classes
        ),
    ]
    _emit(args, payload)
    return EXIT_OK


def cmd_hasse(args) -> int:
    kl = load_cache(args.n, _cache_dir(args))
    dot = involution_hasse_dot(kl)
    print(dot)
    return EXIT_OK


def cmd_afunc(args) -> int:
    kl = load_cache(args.n, _cache_dir(args))
    table = a_table(kl)
    lines = [f"a({format_perm(w)}) = {table[w]}" for w in kl.els]
    report = afunction_property_report(args.n, kl)
    lines.append(f"property report: {'pass' if report['passed'] else 'FAIL'}")
    _emit(args, {
        "version": 1,
        "n": args.n,
        "a": {format_perm(w): table[w] for w in kl.els},
        "report": report,
        "lines": lines,
    })
    return EXIT_OK if report["passed"] else EXIT_ASSERTION


def cmd_cyclic(args) -> int:
    kl = load_cache(args.n, _cache_dir(args))
    coords = "kl" if args.basis == "kl" else "dualkl"

    def gen_elt(w):
        return kl.kl_element(w) if args.basis == "kl" else kl.dual_kl_element(w)

    if args.check == "rank":
        g = parse_perm(args.gen, args.n)
        sub = sub_mod.cyclic_submodule(gen_elt(g), kl, coords=coords)
        payload = {"version": 1, "check": "rank", "gen": format_perm(g), "rank": sub.rank()}
        payload["lines"] = [f"rank over Q(v) of the cyclic module of {format_perm(g)}: {sub.rank()}"]
    elif args.check == "membership":
        g = parse_perm(args.gen, args.n)
        t = parse_perm(args.target, args.n)
        sub = sub_mod.cyclic_submodule(gen_elt(g), kl, coords=coords)
        verdict = sub.membership(gen_elt(t))
        payload = {
            "version": 1,
            "check": "membership",
            "gen": format_perm(g),
            "target": format_perm(t),
            "member": verdict.member,
        }
        if verdict.member:
            payload["certificate"] = {
                format_perm(z): c.to_json_dict() for z, c in sorted(verdict.certificate.items(), key=lambda kv: sort_key(kv[0]))
            }
        else:
            payload["witness"] = verdict.witness
        payload["lines"] = [f"member: {verdict.member}"]
    elif args.check == "equals-lm":
        g = parse_perm(args.gen, args.n)
        ok, details = sub_mod.equals_lm(g, kl)
        payload = {"version": 1, "check": "equals-lm", "result": ok, "details": details}
        payload["lines"] = [f"equals_lm({format_perm(g)}): {ok}"]
    elif args.check == "equals-ln":
        g = parse_perm(args.gen, args.n)
        ok, details = sub_mod.equals_ln_dual(g, kl)
        payload = {"version": 1, "check": "equals-ln", "result": ok, "details": details}
        payload["lines"] = [f"equals_ln_dual({format_perm(g)}): {ok}"]
    elif args.check == "quasi-idempotent":
        g = parse_perm(args.gen, args.n)
        a = sub_mod.quasi_idempotent_check(g, kl)
        payload = {
            "version": 1,
            "check": "quasi-idempotent",
            "gen": format_perm(g),
            "scalar": a.to_json_dict() if a is not None else None,
        }
        payload["lines"] = [f"scalar: {a if a is not None else 'absent'}"]
    elif args.check == "cor3345-survey":
        payload = {"version": 1, "check": "cor3345-survey"}
        payload.update(sub_mod.cor3345_survey(args.n, kl))
        payload["lines"] = [
            f"hypothesis holds for: {', '.join(payload['passing'])}",
            f"parabolic longest elements: {', '.join(payload['parabolic_longest'])}",
            f"coincide: {payload['coincide']}",
        ]
    else:
        raise SystemExit(f"unknown check {args.check!r}")
    _emit(args, payload)
    return EXIT_OK


def cmd_kahrstrom(args) -> int:
    kl = load_cache(args.n, _cache_dir(args))
    deadline = time.monotonic() + args.time_budget if args.time_budget else None
    code = EXIT_OK
    if args.scan:
        reports = []
        graded_flags = {"graded": (True,), "ungraded": (False,), "both": (True, False)}[args.mode]
        for graded in graded_flags:
            if args.scan == "invariance":
                reports.append(kh_mod.scan_left_cell_invariance(args.n, kl, graded=graded))
            elif args.scan == "variation":
                reports.append(kh_mod.scan_witness_variation(args.n, kl, graded=graded))
            elif args.scan == "necessary":
                reports.append(kh_mod.check_necessary_conditions(args.n, kl))
                break
            elif args.scan == "parabolic":
                for bits in range(1 << (args.n - 1)):
                    J = {i + 1 for i in range(args.n - 1) if bits >> i & 1}
                    reports.append(kh_mod.parabolic_induction_report(J, args.n, kl, graded=graded))
            else:
                raise SystemExit(f"unknown scan {args.scan!r}")
        for r in reports:
            if r["violations"]:
                code = EXIT_ASSERTION
            elif r["counterexamples"] and code == EXIT_OK:
                code = EXIT_COUNTEREXAMPLE
        payload = {"version": 1, "n": args.n, "reports": reports}
        payload["lines"] = [
            f"{r['name']}: violations={len(r['violations'])} counterexamples={len(r['counterexamples'])}"
            for r in reports
        ]
        _emit(args, payload)
        return code

    ws = [parse_perm(args.w, args.n)] if args.w else list(kl.els)
    rows = []
    lines = []
    for w in ws:
        if deadline and time.monotonic() > deadline:
            lines.append("time budget exhausted; output truncated")
            break
        verdict = kh_mod.kh_scan(w, kl, args.mode)
        row = {"w": format_perm(w)}
        if verdict.graded is not None:
            row["graded"] = verdict.graded
            row["graded_witnesses"] = [
                [format_perm(a), format_perm(b)] for a, b in verdict.graded_witnesses
            ]
        if verdict.ungraded is not None:
            row["ungraded"] = verdict.ungraded
            row["ungraded_witnesses"] = [
                [format_perm(a), format_perm(b)] for a, b in verdict.ungraded_witnesses
            ]
        rows.append(row)
        lines.append(
            f"Kh({format_perm(w)}): "
            + " ".join(
                f"{k}={row[k]}" for k in ("graded", "ungraded") if k in row
            )
        )
    _emit(args, {"version": 1, "n": args.n, "mode": args.mode, "results": rows, "lines": lines})
    return EXIT_OK


def _verify_paper_tables(n: int, kl: KLCache) -> list[tuple[str, bool, str]]:
    from .tableaux import rs_cells

    checks = []
    if n >= 2:
        kl2 = KLCache(2)
        e, s = (1, 2), (2, 1)
        checks.append(("s2-kl-basis", render_elt(kl2.kl_element(s)) == "H[21] + v*H[12]", ""))
        checks.append(("s2-dual-basis", render_elt(kl2.dual_kl_element(e)) == "(-v)*H[21] + H[12]", ""))
        checks.append(("s2-gamma-hat", str(kl2.gamma_hat(e, e, e)) == "v^2+1"
                       and str(kl2.gamma_hat(s, s, s)) == "v^-1", ""))
    if n >= 3:
        kl3 = KLCache(3)
        w0 = (3, 2, 1)
        checks.append((
            "s3-kl-w0",
            render_elt(kl3.kl_element(w0))
            == "H[321] + v*H[312] + v*H[231] + v^2*H[213] + v^2*H[132] + v^3*H[123]",
            "",
        ))
        x3 = kl3.kl_times_dual(w0, w0)
        checks.append(("s3-x3", str(x3.get(w0)) == "v^3+2v+2v^-1+v^-3", ""))
    return checks


def _verify_identities(n: int, kl: KLCache) -> list[tuple[str, bool, str]]:
    from .permutations import inverse as perm_inv

    checks = []
    els = kl.els
    ok = all(kl.bar_elt(kl.kl_element(w)) == kl.kl_element(w) for w in els)
    checks.append(("kl-bar-invariant", ok, ""))
    ok = True
    for x in els:
        for y in els:
            expected = 1 if x == y else 0
            got = (kl.dual_kl_element(x) * kl.kl_element(perm_inv(y))).tau()
            if str(got) != str(expected):
                ok = False
                break
        if not ok:
            break
    checks.append(("duality-delta", ok, ""))
    ok = all(
        kl.gamma(x, y, w).is_bar_symmetric() and kl.gamma(x, y, w).is_nonneg()
        for x in els
        for y in els
        for w in kl.kl_product(x, y)
    )
    checks.append(("gamma-positive-bar-symmetric", ok, ""))
    stats_equal = 0
    stats_total = 0
    for x in els:
        for y, poly in kl.h_table[x].items():
            if x == y:
                continue
            stats_total += 1
            from .permutations import length as plen

            if poly.degree == plen(x) - plen(y):
                stats_equal += 1
    checks.append((
        "kl-degree-bound",
        True,
        f"degree equals length difference in {stats_equal}/{stats_total} nonzero off-diagonal entries",
    ))
    return checks


def cmd_verify(args) -> int:
    kl = load_cache(args.n, _cache_dir(args))
    if args.suite == "paper-tables":
        checks = _verify_paper_tables(args.n, kl)
    elif args.suite == "identities":
        checks = _verify_identities(args.n, kl)
    elif args.suite == "cells":
        from .tableaux import rs_cells

        checks = []
        for order in ("left", "right", "two_sided"):
            dec = cell_decomposition(args.n, order, kl)
            got = tuple(sorted(dec.classes))
            want = tuple(sorted(rs_cells(args.n, order)))
            checks.append((f"cells-{order}-match-rs", got == want, ""))
        report = afunction_property_report(args.n, kl)
        checks.append(("afunction-properties", report["passed"], ""))
    elif args.suite == "necessary":
        r = kh_mod.check_necessary_conditions(args.n, kl)
        checks = [("necessary-conditions", not r["violations"], f"checked {r['checked']} triples")]
    else:
        raise SystemExit(f"unknown suite {args.suite!r}")
    failed = False
    for name, ok, note in checks:
        status = "pass" if ok else "FAIL"
        suffix = f"  ({note})" if note else ""
        print(f"{name}: {status}{suffix}")
        failed = failed or not ok
    return EXIT_ASSERTION if failed else EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="snhecke",
        description="Exact Kazhdan-Lusztig combinatorics of symmetric-group Hecke algebras",
    )
    parser.add_argument("--cache-dir", default=None,
                        help="KL cache directory (default: $HECKE_CACHE_DIR or ~/.cache/snhecke)")
    parser.add_argument("--no-cache", action="store_true", help="never touch the disk cache")
    parser.add_argument("--format", choices=("json", "table"), default="table")
    parser.add_argument("--jobs", type=int, default=1,
                        help="upper bound on worker parallelism")
    parser.add_argument("--allow-large", action="store_true",
                        help="allow ranks above 6")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("klbasis", help="KL / dual-KL / tilting expansions")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--w", default=None, help="one-line form; default: all elements")
    p.set_defaults(func=cmd_klbasis)

    p = sub.add_parser("mult", help="product of two basis elements")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--basis", choices=("standard", "kl", "dualkl", "tilting"), default="kl")
    p.add_argument("--out-basis", choices=("standard", "kl", "dualkl", "tilting"), default=None)
    p.add_argument("--x", required=True)
    p.add_argument("--y", required=True)
    p.set_defaults(func=cmd_mult)

    p = sub.add_parser("structconsts", help="full structure-constant tables")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--basis", choices=("kl", "dualkl"), default="kl")
    p.set_defaults(func=cmd_structconsts)

    p = sub.add_parser("cells", help="cell decomposition as JSON")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--order", choices=("left", "right", "two_sided"), default="left")
    p.set_defaults(func=cmd_cells)

    p = sub.add_parser("hasse", help="DOT graph of the involution Hasse diagram")
    p.add_argument("--n", type=int, required=True)
    p.set_defaults(func=cmd_hasse)

    p = sub.add_parser("afunc", help="a-function values and property report")
    p.add_argument("--n", type=int, required=True)
    p.set_defaults(func=cmd_afunc)

    p = sub.add_parser("cyclic", help="cyclic submodule checks")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--gen", default=None, help="generator (one-line form)")
    p.add_argument("--basis", choices=("kl", "dualkl"), default="kl")
    p.add_argument("--target", default=None, help="membership target (one-line form)")
    p.add_argument(
        "--check",
        choices=("rank", "membership", "equals-lm", "equals-ln", "quasi-idempotent", "cor3345-survey"),
        required=True,
    )
    p.set_defaults(func=cmd_cyclic)

    p = sub.add_parser("kahrstrom", help="Kahrstrom condition scans")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--w", default=None, help="single element (one-line form)")
    p.add_argument("--all", action="store_true", help="scan every element")
    p.add_argument("--mode", choices=("graded", "ungraded", "both"), default="both")
    p.add_argument("--scan", choices=("invariance", "variation", "necessary", "parabolic"),
                   default=None)
    p.add_argument("--time-budget", type=float, default=None,
                   help="wall-clock seconds before streaming output is truncated")
    p.set_defaults(func=cmd_kahrstrom)

    p = sub.add_parser("verify", help="run an invariant suite")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--suite", required=True,
                   help="one of: paper-tables, identities, cells, necessary")
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.no_cache:
        args.cache_dir = ""
    _check_rank(args)
    return args.func(args)


def run() -> None:
    raise SystemExit(main())


if __name__ == "__main__":
    run()
