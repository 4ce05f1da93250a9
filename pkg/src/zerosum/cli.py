"""Command-line entry point: ``zerosum <command> ...``.

Exit codes: 0 success or witness found, 1 failed verification or broken
assumption, 2 usage error, 3 proven that no witness exists, 4 resource cap.
"""

from __future__ import annotations

import argparse
import csv
import json
import logging
import random
import sys

from . import constructions, induction, lifting, ntheory
from .cache import ResultCache
from .errors import (
    AssumptionViolationError,
    ConfigurationError,
    InternalContradictionError,
    ResourceCapError,
    ValidationError,
)
from .groups import Group
from .registry import Registry, self_check
from .sequences import Sequence, random_sequence
from .solver import (
    Certificate,
    compute_davenport,
    compute_s_exact,
    find_fixed_length_zero_sum,
    verify_certificate,
)

EXIT_OK, EXIT_INVALID, EXIT_USAGE, EXIT_NONE, EXIT_CAP = 0, 1, 2, 3, 4

log = logging.getLogger("zerosum")


def _emit(obj, out):
    out.write(json.dumps(obj, sort_keys=True, indent=2) + "\n")


def _read_json(path: str):
    if path == "-":
        return json.load(sys.stdin)
    with open(path) as fh:
        return json.load(fh)


def _group(args, text: str) -> Group:
    return Group.parse(text)


def _check_order(args, G: Group):
    if G.order > args.max_group_order:
        raise ResourceCapError(f"|G| = {G.order} exceeds --max-group-order {args.max_group_order}")


# -- commands -----------------------------------------------------------------


def cmd_find(args, ctx, out):
    S = Sequence.from_json(_read_json(args.input))
    cert = find_fixed_length_zero_sum(S, args.L)
    if cert is None:
        _emit({"found": False, "base": S.to_json(), "target_length": args.L}, out)
        return EXIT_NONE
    _emit(cert.to_json(), out)
    return EXIT_OK


def cmd_constant(args, ctx, out):
    G = _group(args, args.group)
    reg = ctx["registry"]
    if args.L is None:
        rec = reg.davenport(G)
    else:
        rec = reg.predict(G, args.L)
        if args.compute and not rec.exact:
            _check_order(args, G)
            res = compute_s_exact(G, args.L, cap=args.max_group_order)
            ctx["cache"].put("s", G.descriptor, args.L, res.value, source="compute_s_exact")
            rec = reg.predict(G, args.L)
    _emit(rec.to_json(), out)
    return EXIT_OK


def cmd_davenport(args, ctx, out):
    G = _group(args, args.group)
    if G.order > args.max_group_order:
        rec = ctx["registry"].davenport(G)
        if rec.exact:
            _emit({"group": G.descriptor, "value": rec.value, "exact": True, "method": "registry",
                   "record": rec.to_json()}, out)
            return EXIT_OK
        _check_order(args, G)
    res = compute_davenport(G, cap=args.max_group_order)
    ctx["cache"].put("D", G.descriptor, None, res.value, source="compute_davenport")
    _emit(res.to_json() | {"method": "search"}, out)
    return EXIT_OK


def cmd_s(args, ctx, out):
    G = _group(args, args.group)
    _check_order(args, G)
    res = compute_s_exact(G, args.L, cap=args.max_group_order)
    ctx["cache"].put("s", G.descriptor, args.L, res.value, source="compute_s_exact")
    _emit(res.to_json(), out)
    return EXIT_OK


def cmd_construct(args, ctx, out):
    if args.kubertin:
        _need(args, "n", "r", "k")
        c = constructions.kubertin_construction(args.n, args.r, args.k)
    elif args.lower:
        _need(args, "group", "k")
        G = _group(args, args.group)
        if args.T:
            T = Sequence.from_json(_read_json(args.T))
        else:
            _check_order(args, G)
            T = compute_davenport(G, cap=args.max_group_order).extremal_example
        c = constructions.general_construction(G, args.k, T)
    elif args.cap:
        _need(args, "r")
        c = constructions.Construction(constructions.doubled_cap_sequence(args.r), 3)
    else:
        _need(args, "group")
        c = constructions.egz_extremal_construction(_group(args, args.group))
    if args.verify:
        ok = c.verify()
        _emit(c.to_json(verified=ok), out)
        return EXIT_OK if ok else EXIT_INVALID
    _emit(c.to_json(), out)
    return EXIT_OK


def cmd_verify(args, ctx, out):
    data = _read_json(args.input)
    if "claim" in data:
        S = Sequence.from_json(data)
        L = int(data["claim"]["no_zero_sum_of_length"])
        ok = find_fixed_length_zero_sum(S, L) is None
        reason = "no zero-sum subsequence of that length" if ok else "a zero-sum subsequence of that length exists"
    else:
        res = verify_certificate(Certificate.from_json(data))
        ok, reason = res.ok, res.reason
    _emit({"ok": ok, "reason": reason}, out)
    return EXIT_OK if ok else EXIT_INVALID


def cmd_lift(args, ctx, out):
    plan = lifting.LiftingPlan(args.n, args.p, args.m, args.r, args.k)
    if args.input:
        S = Sequence.from_json(_read_json(args.input))
        s_quot = args.s_quot
    else:
        s_quot = args.s_quot
        if s_quot is None:
            s_quot, _, _ = lifting.quotient_constant(args.n, args.r, ctx["registry"], args.c)
        S = random_sequence(plan.group, plan.min_length(s_quot), ctx["rng"])
    cert = lifting.lift_zero_sum(S, plan, s_quot=s_quot, registry=ctx["registry"], c=args.c)
    _emit(cert.to_json(), out)
    return EXIT_OK if verify_certificate(cert) else EXIT_INVALID


def cmd_peel(args, ctx, out):
    if args.input:
        S = Sequence.from_json(_read_json(args.input))
    else:
        need = induction.registry_precondition(args.q, args.r, args.k, ctx["registry"])
        S = random_sequence(Group.cyclic_power(args.q, args.r), need.lo, ctx["rng"])
    cert = induction.peel_find(S, args.k, base_k=args.base_k, registry=ctx["registry"])
    _emit(cert.to_json(), out)
    return EXIT_OK if verify_certificate(cert) else EXIT_INVALID


def cmd_bound(args, ctx, out):
    _emit(lifting.evaluate_bound(args.n, args.r, args.k, c=args.c, registry=ctx["registry"]), out)
    return EXIT_OK


def cmd_ntheory(args, ctx, out):
    f = ntheory.factorize(args.n)
    res = {
        "n": args.n,
        "M": ntheory.largest_prime_power_divisor(args.n),
        "P": ntheory.largest_prime_divisor(args.n),
        "omega": f.omega,
        "factors": f.to_json(),
    }
    if args.r is not None:
        res["r"] = args.r
        res["p_n_r"] = ntheory.p_n_r(args.n, args.r)
    _emit(res, out)
    return EXIT_OK


def cmd_census(args, ctx, out):
    if args.y is None and args.A is None:
        raise ValidationError("census needs --y or --A")
    tables = ntheory.m_tables(max(args.x), budget=args.budget)
    rows = []
    for x in args.x:
        if args.y is not None:
            rows.append(ntheory.census_E(x, args.y, tables=tables))
        else:
            rows.append(ntheory.census_table([x], args.A, args.eps, tables=tables)[0])
    w = csv.writer(out, lineterminator="\n")
    w.writerow(["x", "y", "count_E", "exponent", "ratio"])
    for row in rows:
        w.writerow([row.x, repr(row.y), row.count_E,
                    "" if row.exponent is None else repr(row.exponent),
                    "" if row.ratio is None else repr(row.ratio)])
    return EXIT_OK


def cmd_selfcheck(args, ctx, out):
    report = self_check(ctx["registry"], ctx["cache"], deep=args.deep)
    _emit(report.to_json(), out)
    return EXIT_OK if report.ok else EXIT_INVALID


def _need(args, *names):
    missing = [f"--{n.replace('_', '-')}" for n in names if getattr(args, n) is None]
    if missing:
        raise ValidationError(f"missing {', '.join(missing)}")


# -- parser -------------------------------------------------------------------


def _global_options(parser: argparse.ArgumentParser, suppress: bool):
    def d(value):
        return argparse.SUPPRESS if suppress else value

    parser.add_argument("--cache", default=d(None), help="JSON-lines result cache (default: $ZS_CACHE)")
    parser.add_argument("--registry", default=d(None), help="alternative registry data file")
    parser.add_argument("--threads", type=int, default=d(1),
                        help="accepted for compatibility; searches run in one thread")
    parser.add_argument("--seed", type=int, default=d(0), help="seed for random inputs when --input is omitted")
    parser.add_argument("--max-group-order", type=int, default=d(64), help="largest group searched exhaustively")
    parser.add_argument("--c", type=float, default=d(1.0), help="Alon-Dubiner constant (unknown; heuristic)")
    parser.add_argument("-v", "--verbose", action="store_true", default=d(False))


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="zerosum", description="Exact zero-sum constants with certificates.")
    _global_options(p, suppress=False)
    common = argparse.ArgumentParser(add_help=False)
    _global_options(common, suppress=True)
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("find", parents=[common], help="zero-sum subsequence of a given length")
    s.add_argument("--input", required=True, help="sequence JSON file, or - for stdin")
    s.add_argument("--L", type=int, required=True)
    s.set_defaults(func=cmd_find)

    s = sub.add_parser("constant", parents=[common], help="best known statement about D(G) or s_L(G)")
    s.add_argument("--group", required=True, help='descriptor like "3^4" or "2,4"')
    s.add_argument("--L", type=int, help="target length; omit for D(G)")
    s.add_argument("--compute", action="store_true", help="run the exact search if no exact value is known")
    s.set_defaults(func=cmd_constant)

    s = sub.add_parser("davenport", parents=[common], help="exact D(G) by search")
    s.add_argument("--group", required=True)
    s.set_defaults(func=cmd_davenport)

    s = sub.add_parser("s", parents=[common], help="exact s_L(G) by search")
    s.add_argument("--group", required=True)
    s.add_argument("--L", type=int, required=True)
    s.set_defaults(func=cmd_s)

    s = sub.add_parser("construct", parents=[common], help="lower-bound constructions")
    mode = s.add_mutually_exclusive_group()
    mode.add_argument("--kubertin", action="store_true", help="0^[kn-1] e_1^[n-1] ... e_r^[n-1] over C_n^r")
    mode.add_argument("--lower", action="store_true", help="T 0^[k exp(G) - 1] for zero-sum free T")
    mode.add_argument("--cap", action="store_true", help="doubled maximum cap over C_3^r")
    mode.add_argument("--egz", action="store_true", help="stored extremal EGZ example for --group")
    s.add_argument("--n", type=int)
    s.add_argument("--r", type=int)
    s.add_argument("--k", type=int)
    s.add_argument("--group")
    s.add_argument("--T", help="zero-sum free sequence JSON for --lower (default: from the D(G) search)")
    s.add_argument("--verify", action="store_true")
    s.set_defaults(func=cmd_construct)

    s = sub.add_parser("verify", parents=[common], help="check a certificate or a construction claim")
    s.add_argument("--input", required=True)
    s.set_defaults(func=cmd_verify)

    s = sub.add_parser("lift", parents=[common], help="zero-sum subsequence over C_{n p^m}^r via quotient lifting")
    for name in ("n", "p", "m", "r", "k"):
        s.add_argument(f"--{name}", type=int, required=True)
    s.add_argument("--input", help="sequence JSON; random at the minimal length if omitted")
    s.add_argument("--s-quot", type=int, help="upper bound for s(C_n^r) (default: registry or search)")
    s.set_defaults(func=cmd_lift)

    s = sub.add_parser("peel", parents=[common], help="zero-sum subsequence over C_q^r by peel-off induction")
    for name in ("q", "r", "k"):
        s.add_argument(f"--{name}", type=int, required=True)
    s.add_argument("--base-k", type=int)
    s.add_argument("--input", help="sequence JSON; random at the registry length if omitted")
    s.set_defaults(func=cmd_peel)

    s = sub.add_parser("bound", parents=[common], help="lifting upper bound for s_{kn}(C_n^r)")
    for name in ("n", "r", "k"):
        s.add_argument(f"--{name}", type=int, required=True)
    s.set_defaults(func=cmd_bound)

    s = sub.add_parser("ntheory", parents=[common], help="M(n), P(n), omega(n), p(n, r)")
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--r", type=int)
    s.set_defaults(func=cmd_ntheory)

    s = sub.add_parser("census", parents=[common], help="CSV of |{n <= x : M(n) <= y}|")
    s.add_argument("--x", type=int, action="append", required=True, help="repeatable")
    s.add_argument("--y", type=float)
    s.add_argument("--A", type=float, help="use y = (ln x)^A")
    s.add_argument("--eps", type=float, default=0.1)
    s.add_argument("--budget", type=int, default=ntheory.DEFAULT_SIEVE_BUDGET)
    s.set_defaults(func=cmd_census)

    s = sub.add_parser("selfcheck", parents=[common], help="compare registry statements with solver values")
    s.add_argument("--deep", action="store_true", help="include searches that take minutes")
    s.set_defaults(func=cmd_selfcheck)
    return p


def main(argv=None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING, stream=sys.stderr)
    cache = ResultCache.from_env(args.cache)
    ctx = {
        "cache": cache,
        "registry": Registry.load(args.registry, cache=cache),
        "rng": random.Random(args.seed),
    }
    try:
        return args.func(args, ctx, out)
    except ResourceCapError as exc:
        _emit({"error": "resource_cap", "message": str(exc), "partial_lower_bound": exc.partial_lower_bound}, out)
        return EXIT_CAP
    except (InternalContradictionError, AssumptionViolationError) as exc:
        print(f"zerosum: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except (ValidationError, ConfigurationError, ValueError, OSError) as exc:
        print(f"zerosum: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
