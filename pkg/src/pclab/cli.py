"""Command-line entry point: ``pclab``.

Exit codes: 0 verified or hypothesisNotMet, 2 REFUTED, 3 a cap was hit,
4 bad input (including usage errors).
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import sys

import numpy as np

from . import catalog as cat
from .core.expr import evaluate
from .core.group import DEFAULT_MAX_ORDER, normalizer
from .errors import CapExceeded, PclabError, SizeCapExceeded
from .fusion import DEFAULT_SUBGROUP_CAP, LEVELS, controls_p_fusion
from . import series as ser
from .sylow import is_p_nilpotent, is_p_soluble, opp_tower, sylow_subgroup, upper_p_series
from . import verify as V

EXIT_INPUT = 4
EXIT_CAP = 3


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INPUT, f"{self.prog}: error: {message}\n")


def _emit(obj) -> None:
    print(json.dumps(obj, indent=2, sort_keys=True))


def _group(args):
    return evaluate(cat.resolve(args.expr), max_order=args.max_order)


# -- subcommands -----------------------------------------------------------


def cmd_eval(args) -> int:
    G = _group(args)
    orders, counts = np.unique(G.element_orders, return_counts=True)
    _emit({"expr": G.expr, "order": G.order, "generators": len(G.generators),
           "abelian": G.is_abelian(), "exponent": int(np.lcm.reduce(orders)),
           "primes": {str(p): e for p, e in sorted(G.prime_factors.items())},
           "elementOrders": {str(o): int(c) for o, c in zip(orders, counts)}})
    return 0


def cmd_series(args) -> int:
    G = _group(args)
    if args.kind == "zeta":
        s = ser.zeta_series(G)
    elif args.kind == "omega":
        s = ser.omega_series(G, args.p)
    elif args.kind == "lambda":
        s = ser.lambda_series(G, args.p, args.k)
    else:
        s = ser.m_series(G, args.p)
    _emit(s.to_json())
    return 0


def cmd_cores(args) -> int:
    G = _group(args)
    out = opp_tower(G, args.p).to_json()
    out["p_soluble"] = is_p_soluble(G, args.p)
    out["upper_p_series"] = [t.order for t in upper_p_series(G, args.p)]
    pn = is_p_nilpotent(G, args.p)
    out["complement_order"] = pn.complement.order if pn.yes else None
    _emit(out)
    return 0


def cmd_fusion(args) -> int:
    G = _group(args)
    if not args.normalizer:
        raise ValueError("only --normalizer is supported as the controlling subgroup")
    N = normalizer(G, sylow_subgroup(G, args.p))
    v = controls_p_fusion(N, G, args.p, args.level, args.max_subgroups)
    _emit({"normalizerOrder": N.order, **v.to_json()})
    return 0


def _report_for(args, G):
    t, p = args.theorem, args.p
    if t == "A":
        return V.verify_thm_a(G, p, args.k or 6)
    if t in ("B", "C"):
        i, k = args.i, args.k
        if k is None:
            sel = V.thm_c_parameters(G, p)
            i, k = sel if sel else (i or 1, p - 1)
        i = i or 1
        if t == "B":
            return V.verify_thm_b(G, p, i, k, args.j or 1)
        return V.verify_thm_c(G, p, i, k)
    if t == "D":
        return V.verify_y_avoidance(G, p, args.m_max, args.max_subgroups)
    if t == "E":
        return V.verify_thm_e(G, p, args.max_subgroups)
    return V.verify_prop_suite(G, p, args.k, args.seed)


def _csv(report) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["theorem", "kind", "name", "holds", "status"])
    rows = [("hypothesis", h) for h in report.hypotheses]
    rows += [("conclusion", report.conclusion)]
    rows += [("side", c) for c in report.side_checks]
    for kind, c in rows:
        w.writerow([report.theorem, kind, c.name, c.holds, report.status])
    for it in report.items:
        w.writerow([it.theorem, "item", it.conclusion.name, it.conclusion.holds, it.status])
    return buf.getvalue().rstrip("\n")


def _text(report) -> str:
    lines = [f"{report.theorem} on {report.group_expr}: {report.status} ({report.timing_ms} ms)"]
    for h in report.hypotheses:
        lines.append(f"  hypothesis {h.name}: {h.holds}")
    lines.append(f"  conclusion {report.conclusion.name}: {report.conclusion.holds}")
    for c in report.side_checks:
        lines.append(f"  side {c.name}: {c.holds}" + (f" ({c.note})" if c.note else ""))
    for it in report.items:
        lines.append(f"  item {it.theorem} {it.parameters}: {it.status}")
    lines += [f"  note: {n}" for n in report.notes]
    return "\n".join(lines)


def cmd_verify(args) -> int:
    G = _group(args)
    report = _report_for(args, G)
    if args.format == "json":
        out = report.to_json()
        out["canonicalHash"] = report.canonical_hash()
        _emit(out)
    elif args.format == "csv":
        print(_csv(report))
    else:
        print(_text(report))
    return report.exit_code


def cmd_catalog(args) -> int:
    if args.action == "list":
        for e in cat.catalog():
            print(f"{e.name}\t{e.expr}\t{','.join(e.tags)}")
        return 0
    if args.action == "build":
        if not args.name:
            raise ValueError("catalog build needs an entry name")
        entry = cat.get(args.name) if args.name in {e.name for e in cat.catalog()} else None
        if entry is None:
            raise ValueError(f"no catalog entry named {args.name!r}")
        G = entry.build(args.max_order)
        if args.out:
            from .core.snapshot import save
            save(G, args.out)
        checks = cat.verify_entry(entry, args.max_order, G)
        _emit({**entry.to_json(), "order": G.order, "checks": [c.to_json() for c in checks]})
        return 0 if all(c.ok for c in checks) else 2
    result = V.verify_all(args.seed, args.jobs, args.include_heavy, args.max_order)
    if args.format == "json":
        _emit(result.to_json())
    else:
        for e in sorted(result.entries, key=lambda e: e["name"]):
            mark = "ok" if e["ok"] else "MISMATCH"
            print(f"{e['name']}\t{mark}\t{','.join(e['statuses']) or '-'}\t{e['hash'][:16]}")
        print(f"aggregate {result.aggregate_hash}")
    return result.exit_code


# -- parser ----------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--max-order", type=int, default=DEFAULT_MAX_ORDER)
    common.add_argument("--max-subgroups", type=int, default=DEFAULT_SUBGROUP_CAP)
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--jobs", type=int, default=1)

    parser = _Parser(prog="pclab", description="p-central group computations and checks")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("eval", parents=[common], help="build a group and summarise it")
    p.add_argument("expr")
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("series", parents=[common], help="print a subgroup series")
    p.add_argument("--kind", choices=["omega", "zeta", "lambda", "M"], required=True)
    p.add_argument("--p", type=int)
    p.add_argument("--k", type=int, default=1)
    p.add_argument("expr")
    p.set_defaults(func=cmd_series)

    p = sub.add_parser("cores", parents=[common], help="O_p', O_p and the sandwich tower")
    p.add_argument("--p", type=int, required=True)
    p.add_argument("expr")
    p.set_defaults(func=cmd_cores)

    p = sub.add_parser("fusion", parents=[common], help="fusion control by N_G(P)")
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--normalizer", action="store_true")
    p.add_argument("--level", choices=LEVELS, default="cyclic")
    p.add_argument("expr")
    p.set_defaults(func=cmd_fusion)

    p = sub.add_parser("verify", parents=[common], help="check a theorem on a group")
    p.add_argument("--theorem", choices=["A", "B", "C", "D", "E", "props"], required=True)
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--i", type=int)
    p.add_argument("--k", type=int)
    p.add_argument("--j", type=int)
    p.add_argument("--m-max", type=int, default=3)
    p.add_argument("--format", choices=["json", "csv", "text"], default="json")
    p.add_argument("expr")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("catalog", parents=[common], help="the fixture catalog")
    p.add_argument("action", choices=["list", "build", "verify-all"])
    p.add_argument("name", nargs="?")
    p.add_argument("--out", help="write a binary snapshot (build only)")
    p.add_argument("--include-heavy", action="store_true")
    p.add_argument("--format", choices=["json", "text"], default="text")
    p.set_defaults(func=cmd_catalog)
    return parser


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as exc:  # usage errors and --help
        return exc.code if isinstance(exc.code, int) else EXIT_INPUT
    if args.command == "series" and args.kind != "zeta" and args.p is None:
        print("pclab: error: --p is required for this series", file=sys.stderr)
        return EXIT_INPUT
    try:
        return args.func(args)
    except (SizeCapExceeded, CapExceeded) as exc:
        print(f"pclab: cap exceeded: {exc}", file=sys.stderr)
        return EXIT_CAP
    except (PclabError, ValueError, KeyError) as exc:
        print(f"pclab: error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
