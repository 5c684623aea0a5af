"""Command-line interface.

Subcommands: table, verify, homology, cycle-order, verify-sequence,
collapse.  Exit codes: 0 success, 1 check failure, 2 usage error,
3 resource budget exceeded.

Resource guard: the largest boundary matrix a command would touch is
estimated from the closed-form count of s-edge matchings of K_n; work
above --max-nnz (or past --timeout) is skipped and reported as explicit
gaps with exit code 3, so nothing heavy ever runs by accident.  --big
lifts the default budget for the n = 11, 12 extended rows.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
import time
from pathlib import Path

from . import cache as cache_mod
from . import homology as hom
from .chains import parse_chain
from .complexes import MatchingComplex, delete_zero_cell, matching_complex
from .collapse import collapse_to_dimension, replay
from .graphs import (
    complete_bipartite,
    complete_graph,
    near_matching_deleted_graph,
    parse_edge_list,
)
from .homology import GroupDescriptor, class_order, homology, normalize_ring

DEFAULT_MAX_NNZ = 50_000
DEFAULT_TIMEOUT = 300.0
EXIT_OK, EXIT_CHECK_FAILED, EXIT_USAGE, EXIT_BUDGET = 0, 1, 2, 3


class UsageError(Exception):
    pass


class BudgetExceeded(Exception):
    pass


def matchings_count(n: int, s: int) -> int:
    """Number of s-edge matchings of the complete graph on n vertices."""
    if s < 0 or 2 * s > n:
        return 0
    return math.factorial(n) // (math.factorial(s) * (2 ** s) * math.factorial(n - 2 * s))


def estimate_max_nnz(n: int) -> int:
    """Largest boundary-matrix nnz across the dimensions of M_n."""
    return max((matchings_count(n, s) * s for s in range(1, n // 2 + 1)), default=0)


class Budget:
    def __init__(self, max_nnz: int, timeout: float):
        self.max_nnz = max_nnz
        self.deadline = time.monotonic() + timeout

    def admit_n(self, n: int) -> bool:
        return estimate_max_nnz(n) <= self.max_nnz and time.monotonic() < self.deadline


def ring_arg(text: str):
    try:
        return normalize_ring(text)
    except ValueError as ex:
        raise argparse.ArgumentTypeError(str(ex))


def ring_label(ring) -> str:
    return ring if isinstance(ring, str) else f"Zp:{ring}"


def build_complex(spec: str) -> MatchingComplex:
    """Complex specs: mn:N | mne:N | kab:A,B | gk:K | file:PATH."""
    kind, _, arg = spec.partition(":")
    try:
        if kind == "mn":
            return matching_complex(complete_graph(int(arg)))
        if kind == "mne":
            return delete_zero_cell(matching_complex(complete_graph(int(arg))), (1, 2))
        if kind == "kab":
            a, b = (int(x) for x in arg.split(","))
            return matching_complex(complete_bipartite(a, b))
        if kind == "gk":
            return matching_complex(near_matching_deleted_graph(int(arg)))
        if kind == "file":
            return matching_complex(parse_edge_list(Path(arg).read_text()))
    except (ValueError, OSError) as ex:
        raise UsageError(f"bad complex spec {spec!r}: {ex}")
    raise UsageError(f"unknown complex spec kind {kind!r}")


def homology_record(k: MatchingComplex, d: int, ring) -> dict:
    group = homology(k, d, ring)
    return {
        "complex_id": k.content_key()[:16],
        "degree": d,
        "ring": ring_label(ring),
        "free_rank": group.free_rank,
        "torsion": list(group.torsion),
        "group": str(group),
        "wall_ms": 0.0,
    }


# ---------------------------------------------------------------------
# table
# ---------------------------------------------------------------------


def cmd_table(args) -> int:
    ring = args.ring
    budget = Budget(args.max_nnz, args.timeout)
    rows, gaps = [], []
    for n in range(2 if args.which == "mn-e" else 1, args.max_n + 1):
        if not budget.admit_n(n):
            gaps.append(n)
            continue
        if args.which == "mn":
            k = matching_complex(complete_graph(n))
        else:
            k = delete_zero_cell(matching_complex(complete_graph(n)), (1, 2))
        records = [homology_record(k, d, ring) for d in range(-1, max(k.dim, 0) + 1)]
        rows.append({"n": n, "records": records})
    table = {"which": args.which, "ring": ring_label(ring),
             "max_n": args.max_n, "gaps": gaps, "rows": rows}

    text = format_table(table, args.format)
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)
    if args.figure:
        from .report import render_table_figure

        render_table_figure(table, args.figure)
    if gaps:
        print(f"budget exceeded for n in {gaps}; rerun with --big", file=sys.stderr)
        return EXIT_BUDGET
    return EXIT_OK


def format_table(table: dict, fmt: str) -> str:
    if fmt == "json":
        return json.dumps(table, sort_keys=True, indent=2) + "\n"
    lines = []
    if fmt == "csv":
        lines.append("n,degree,group,free_rank,torsion")
        for row in table["rows"]:
            for rec in row["records"]:
                if rec["free_rank"] or rec["torsion"]:
                    tor = ";".join(map(str, rec["torsion"]))
                    lines.append(f"{row['n']},{rec['degree']},{rec['group']},"
                                 f"{rec['free_rank']},{tor}")
        return "\n".join(lines) + "\n"
    # text: one row per n, nonzero degrees only
    head = "homology of " + ("M_n" if table["which"] == "mn" else "M_n - e")
    lines.append(f"{head} over {table['ring']}")
    for row in table["rows"]:
        cells = [f"d={rec['degree']}: {rec['group']}"
                 for rec in row["records"] if rec["free_rank"] or rec["torsion"]]
        lines.append(f"n={row['n']:>2}   " + ("   ".join(cells) if cells else "0"))
    if table["gaps"]:
        lines.append("skipped (budget): " + ", ".join(map(str, table["gaps"])))
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------
# verify suites
# ---------------------------------------------------------------------


def _suite_bouc() -> list[dict]:
    from .cycles import gamma
    from .homology import class_order

    checks = []
    for r in (2, 3):
        n = 3 * r + 1
        k = matching_complex(complete_graph(n))
        g = homology(k, r - 1, "Z")
        checks.append({"name": f"H_{r - 1}(M_{n}) = Z_3",
                       "ok": g == GroupDescriptor(0, (3,)), "detail": str(g)})
        order = class_order(k, gamma(r))
        checks.append({"name": f"order(gamma_{3 * r}) in M_{n} = 3",
                       "ok": order == 3, "detail": order})
    from .verification import psi_image_matrix, hexagon_projection_matrix, int_det

    det_psi = int_det(psi_image_matrix())
    checks.append({"name": "|det psi-images| = 3", "ok": abs(det_psi) == 3,
                   "detail": det_psi})
    det_hex = int_det(hexagon_projection_matrix())
    checks.append({"name": "|det hexagon projections| = 2",
                   "ok": abs(det_hex) == 2, "detail": det_hex})
    return checks


def _suite_torsion() -> list[dict]:
    from .cycles import gamma, theta
    from .verification import near_matching_ranks

    checks = []
    ranks = near_matching_ranks(4)
    expected = [1, 3, 7, 19]
    for k, (got, want) in enumerate(zip(ranks, expected), start=1):
        checks.append({"name": f"free rank H_{k - 1}(M(G_{k})) = {want}",
                       "ok": got == want, "detail": got})
    # transported torsion class: P_3 generator wedged with shifted gamma_6
    from .chains import edge_chain

    z = edge_chain(1, 2) - edge_chain(1, 3)
    cls = theta(z, gamma(2), 3)
    m10 = matching_complex(complete_graph(10))
    order = class_order(m10, cls)
    checks.append({"name": "order(theta_1 class) in M_10 = 3",
                   "ok": order == 3, "detail": order})
    for n, d, p in ((7, 1, 3), (9, 2, 3), (8, 2, 2), (6, 1, 5)):
        k = matching_complex(complete_graph(n))
        ok = hom.uct_dimension_check(k, d, p)
        checks.append({"name": f"UCT n={n} d={d} p={p}", "ok": ok})
    return checks


def _suite_sequences(big: bool) -> list[dict]:
    from .sequences import verify_exactness
    from .verification import random_pair_fixtures

    checks = []
    ns = (6, 7, 8) if big else (6, 7)
    for kind in ("012", "034", "0356", "0e2", "0235"):
        for n in ns:
            rep = verify_exactness(kind, n, rings=["Z"])
            checks.append({"name": f"seq {kind} n={n} exact (Q, GF 2/3/5/7)",
                           "ok": rep["all_exact"]})
    for i, rep in enumerate(random_pair_fixtures(5, seed=7)):
        checks.append({"name": f"pair LES self-test #{i}", "ok": rep["all_exact"]})
    return checks


def _suite_collapse() -> list[dict]:
    from .verification import collapse_fixture_graphs

    checks = []
    for name, g in collapse_fixture_graphs(n_random=6, seed=11):
        k = matching_complex(g)
        target = g.n // 2 - 2
        trace = collapse_to_dimension(k, target)
        ok = trace is not None and replay(k, trace)
        if ok and not trace.final.is_void:
            ok = trace.final.dim <= target
        if ok:
            before = hom.homology_groups(k)
            after = hom.homology_groups(trace.final) if not trace.final.is_void else {}
            degrees = set(before) | set(after)
            ok = all(before.get(d, hom.ZERO_GROUP) == after.get(d, hom.ZERO_GROUP)
                     for d in degrees)
        checks.append({"name": f"collapse {name} to dim <= {target}", "ok": bool(ok)})
    return checks


def _suite_inequalities(big: bool) -> list[dict]:
    from .sequences import beta_dim, inequality_report

    n_max = 10 if big else 8
    rep = inequality_report(n_max)
    checks = [{"name": f"recursion inequalities hold for n <= {n_max}",
               "ok": rep["all_ok"], "detail": rep["violations"][:3]}]
    for n, d, want in ((3, 0, 2), (6, 1, 16), (9, 2, 50)):
        if n <= n_max or n <= 9:
            got = beta_dim(n, d)
            checks.append({"name": f"dim_GF3 H_{d}(M_{n}) = {want}",
                           "ok": got == want, "detail": got})
    return checks


SUITES = {
    "bouc": lambda args: _suite_bouc(),
    "torsion": lambda args: _suite_torsion(),
    "sequences": lambda args: _suite_sequences(args.big),
    "collapse": lambda args: _suite_collapse(),
    "inequalities": lambda args: _suite_inequalities(args.big),
}


def cmd_verify(args) -> int:
    names = list(SUITES) if args.suite == "all" else [args.suite]
    suites = []
    all_ok = True
    for name in names:
        checks = SUITES[name](args)
        ok = all(c["ok"] for c in checks)
        all_ok = all_ok and ok
        suites.append({"suite": name, "ok": ok, "checks": checks})
        for c in checks:
            print(f"[{'PASS' if c['ok'] else 'FAIL'}] {name}: {c['name']}")
    report = {"suites": suites, "all_ok": all_ok}
    if args.json:
        Path(args.json).write_text(json.dumps(report, sort_keys=True, indent=2,
                                              default=str) + "\n")
    print(f"verify: {'all checks passed' if all_ok else 'FAILURES present'}")
    return EXIT_OK if all_ok else EXIT_CHECK_FAILED


# ---------------------------------------------------------------------
# other commands
# ---------------------------------------------------------------------


def cmd_homology(args) -> int:
    k = build_complex(args.complex)
    if estimate_max_nnz(k.graph.n) > args.max_nnz:
        print("budget exceeded; rerun with --big", file=sys.stderr)
        return EXIT_BUDGET
    rec = homology_record(k, args.degree, args.ring)
    print(json.dumps(rec, sort_keys=True))
    return EXIT_OK


def cmd_cycle_order(args) -> int:
    k = build_complex(args.complex)
    try:
        chain = parse_chain(Path(args.chain).read_text())
    except (ValueError, OSError) as ex:
        raise UsageError(f"bad chain file: {ex}")
    try:
        order = class_order(k, chain)
    except ValueError as ex:
        raise UsageError(str(ex))
    print("infinite" if order is None else order)
    return EXIT_OK


def cmd_verify_sequence(args) -> int:
    from .sequences import verify_exactness, verify_exactness_integral

    degrees = None
    if args.degrees:
        lo, _, hi = args.degrees.partition(":")
        degrees = range(int(lo), int(hi) + 1)
    rings = [ring_label(args.ring)] if args.ring else ["Z"]
    rep = verify_exactness(args.kind, args.n, rings=rings, degrees=degrees)
    if args.exact_z:
        rep["integral"] = verify_exactness_integral(args.kind, args.n, degrees)
        rep["all_exact"] = rep["all_exact"] and rep["integral"]["all_exact"]
    text = json.dumps(rep, sort_keys=True, indent=2) + "\n"
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK if rep["all_exact"] else EXIT_CHECK_FAILED


def cmd_collapse(args) -> int:
    k = build_complex(args.complex)
    target = args.target if args.target is not None else k.graph.n // 2 - 2
    trace = collapse_to_dimension(k, target)
    if trace is None:
        print("collapse stalled (not a disproof)")
        return EXIT_CHECK_FAILED
    final_dim = trace.final.dim if not trace.final.is_void else None
    print(f"collapsed in {len(trace.steps)} steps; final dimension "
          f"{'void' if final_dim is None else final_dim} (target {target})")
    if args.trace_out:
        trace.save(args.trace_out)
    return EXIT_OK


# ---------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------


def make_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="matchhom",
        description="Exact homology of matching complexes.",
    )
    parser.add_argument("--cache-dir", help="result cache directory "
                        f"(or ${cache_mod.CACHE_ENV_VAR})")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("table", help="homology table for M_n or M_n - e")
    p.add_argument("--max-n", type=int, required=True)
    p.add_argument("--ring", type=ring_arg, default="Z")
    p.add_argument("--which", choices=["mn", "mn-e"], default="mn")
    p.add_argument("--format", choices=["text", "csv", "json"], default="text")
    p.add_argument("--out", help="write the table to a file instead of stdout")
    p.add_argument("--figure", help="also render the table as a figure (png/pdf)")
    _budget_flags(p)
    p.set_defaults(fn=cmd_table)

    p = sub.add_parser("verify", help="run a verification suite")
    p.add_argument("--suite", choices=[*SUITES, "all"], default="all")
    p.add_argument("--json", help="write the JSON report here")
    _budget_flags(p)
    p.set_defaults(fn=cmd_verify)

    p = sub.add_parser("homology", help="one homology group")
    p.add_argument("--complex", required=True,
                   help="mn:N | mne:N | kab:A,B | gk:K | file:PATH")
    p.add_argument("--degree", type=int, required=True)
    p.add_argument("--ring", type=ring_arg, default="Z")
    _budget_flags(p)
    p.set_defaults(fn=cmd_homology)

    p = sub.add_parser("cycle-order", help="order of a cycle's homology class")
    p.add_argument("--complex", required=True)
    p.add_argument("--chain", required=True, help="chain file (coeff  u v | u v ...)")
    _budget_flags(p)
    p.set_defaults(fn=cmd_cycle_order)

    p = sub.add_parser("verify-sequence", help="exactness report for one sequence")
    p.add_argument("--kind", choices=["012", "034", "0356", "0e2", "0235"],
                   required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--ring", type=ring_arg, default=None,
                   help="Z certifies via Q and GF(2,3,5,7)")
    p.add_argument("--degrees", help="inclusive degree range lo:hi")
    p.add_argument("--exact-z", action="store_true",
                   help="also run the integral lattice comparison (slow)")
    p.add_argument("--out", help="write the JSON report here")
    _budget_flags(p)
    p.set_defaults(fn=cmd_verify_sequence)

    p = sub.add_parser("collapse", help="greedy elementary collapse")
    p.add_argument("--complex", required=True)
    p.add_argument("--target", type=int, default=None,
                   help="target dimension (default: vertices/2 - 2)")
    p.add_argument("--trace-out", help="write the trace JSON here")
    _budget_flags(p)
    p.set_defaults(fn=cmd_collapse)
    return parser


def _budget_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--max-nnz", type=int, default=DEFAULT_MAX_NNZ,
                   help="largest boundary-matrix nnz admitted")
    p.add_argument("--timeout", type=float, default=DEFAULT_TIMEOUT,
                   help="soft wall-clock limit in seconds")
    p.add_argument("--big", action="store_true",
                   help="lift the budget for the extended n = 11, 12 rows")


def main(argv=None) -> int:
    parser = make_parser()
    args = parser.parse_args(argv)
    if args.big:
        args.max_nnz = max(args.max_nnz, 1_000_000_000)
        args.timeout = max(args.timeout, 24 * 3600.0)
    cache_dir = args.cache_dir
    cache = (cache_mod.ResultCache(cache_dir) if cache_dir
             else cache_mod.ResultCache.from_env())
    if cache is not None:
        hom.attach_disk_cache(cache)
    try:
        return args.fn(args)
    except UsageError as ex:
        print(f"error: {ex}", file=sys.stderr)
        return EXIT_USAGE
    except BudgetExceeded as ex:
        print(f"budget exceeded: {ex}", file=sys.stderr)
        return EXIT_BUDGET


if __name__ == "__main__":
    sys.exit(main())
