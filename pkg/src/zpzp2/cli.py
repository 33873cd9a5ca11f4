"""Command line front end.

Subcommands: gray (images and the additivity sweep), coeffs (carry
polynomial data), construct (rank / pair targets to code-spec + plan
files), analyze (rank and kernel report for a code-spec file), verify
(the named-check campaign).  Exit codes: 0 success, 1 verification
failure, 2 usage or input error.  Progress goes to stderr, data to
stdout.
"""

from __future__ import annotations

import argparse
import json
import sys
import time

import numpy as np

from . import __version__
from .backend import backend_name
from .campaign import CampaignConfig, report_csv, report_json, run_campaign
from .code import DEFAULT_CAP, CodeType, load_code, save_code
from .construct import (
    ConstructionError,
    admissible_pair_rbar_range,
    admissible_rank_range,
    assemble_Sr,
    assemble_Srk,
    realize,
    save_plan,
)
from .gray import CarryPolynomial, GrayMap, carry_direct, coeff_support, span_power_degrees
from .ring import check_prime
from .span_kernel import analyze


def _type_arg(text: str):
    parts = text.split(",")
    if len(parts) != 5:
        raise argparse.ArgumentTypeError("expected five integers a,b,g,d,k")
    try:
        return tuple(int(x) for x in parts)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc))


def _pair_arg(text: str):
    parts = text.split(",")
    if len(parts) != 2:
        raise argparse.ArgumentTypeError("expected two integers kbar,rbar")
    try:
        return tuple(int(x) for x in parts)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc))


def _primes_arg(text: str):
    try:
        return tuple(int(x) for x in text.split(","))
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc))


def _emit(text: str, out: str | None) -> None:
    if out:
        with open(out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def cmd_gray(args) -> int:
    p = check_prime(args.p)
    g = GrayMap(p)
    did_something = False
    if args.u is not None:
        print(" ".join(str(int(x)) for x in g.phi(args.u)))
        did_something = True
    if args.coeffs:
        print(CarryPolynomial(p).term_string())
        did_something = True
    if args.check_identity:
        p2 = p * p
        u = np.repeat(np.arange(p2), p2)
        v = np.tile(np.arange(p2), p2)
        lhs = g.table[(u + v) % p2]
        rhs = (g.table[u] + g.table[v] + g.table[carry_direct(u, v, p)]) % p
        violations = int((lhs != rhs).any(axis=1).sum())
        print(f"checked {p2 * p2} pairs: {violations} violations")
        did_something = True
        if violations:
            return 1
    if not did_something:
        print("gray: nothing to do (pass --u, --coeffs or --check-identity)", file=sys.stderr)
        return 2
    return 0


def cmd_coeffs(args) -> int:
    p = check_prime(args.p)
    poly = CarryPolynomial(p)
    data = {
        "p": p,
        "terms": {f"{a},{b}": int(c) for (a, b), c in sorted(poly.terms.items())},
        "polynomial": poly.term_string(),
        "support": [list(t) for t in sorted(coeff_support(p))],
        "degrees": list(span_power_degrees(p)),
    }
    _emit(json.dumps(data, indent=2, sort_keys=True) + "\n", args.out)
    return 0


def _plan_path(out: str) -> str:
    if out.endswith(".json"):
        return out[: -len(".json")] + ".plan.json"
    return out + ".plan.json"


def cmd_construct(args) -> int:
    p = check_prime(args.p)
    ty = CodeType(p, *args.type)
    base = ty.gamma + 2 * ty.delta
    if args.rank is None and args.pair is None:
        ranks = admissible_rank_range(ty)
        pair_ranges = {}
        for kbar in range(ty.delta + 1):
            rng = admissible_pair_rbar_range(ty, kbar)
            pair_ranges[str(kbar)] = [rng.start, rng.stop - 1] if len(rng) else []
        data = {
            "type": list(ty.as_tuple()),
            "rank_range": [ranks.start, ranks.stop - 1],
            "pair_rbar_ranges": pair_ranges,
        }
        _emit(json.dumps(data, indent=2, sort_keys=True) + "\n", args.out)
        return 0
    if args.rank is not None and args.pair is not None:
        print("construct: pass only one of --rank / --pair", file=sys.stderr)
        return 2
    try:
        if args.rank is not None:
            plan = assemble_Sr(ty, args.rank - base)
        else:
            plan = assemble_Srk(ty, *args.pair)
    except ConstructionError as exc:
        ranks = admissible_rank_range(ty)
        print(f"construct: {exc}", file=sys.stderr)
        print(
            f"admissible ranks: {ranks.start}..{ranks.stop - 1}; "
            f"pair rbar caps by kbar: "
            + ", ".join(
                f"{k}->{admissible_pair_rbar_range(ty, k).stop - 1}"
                for k in range(1, ty.delta + 1)
            ),
            file=sys.stderr,
        )
        return 2
    code = realize(ty, plan)
    if args.out:
        save_code(code, args.out)
        save_plan(plan, _plan_path(args.out))
        print(
            json.dumps({"code": args.out, "plan": _plan_path(args.out)}, sort_keys=True)
        )
    else:
        sys.stdout.write(json.dumps(code.to_dict(), indent=2, sort_keys=True) + "\n")
    return 0


def cmd_analyze(args) -> int:
    try:
        code = load_code(args.spec)
    except (OSError, ValueError, KeyError, TypeError, json.JSONDecodeError) as exc:
        print(f"analyze: cannot load {args.spec}: {exc}", file=sys.stderr)
        return 2
    report = analyze(code, cap=args.cap)
    _emit(json.dumps(report, indent=2, sort_keys=True) + "\n", args.out)
    return 0


def cmd_verify(args) -> int:
    config = CampaignConfig(
        primes=args.p, seed=args.seed, cap=args.cap, jobs=args.jobs
    )
    t0 = time.time()
    print(f"backend: {backend_name()}", file=sys.stderr)

    def progress(i, n, rec):
        print(f"[{i:2d}/{n}] {rec['check']}: {rec['status']}", file=sys.stderr)

    report = run_campaign(config, progress=progress)
    text = report_json(report) if args.format == "json" else report_csv(report)
    _emit(text, args.out)
    summ = report["summary"]
    print(
        f"{summ['passed']} passed, {summ['failed']} failed, "
        f"{summ['skipped']} skipped in {time.time() - t0:.1f}s",
        file=sys.stderr,
    )
    return 0 if summ["failed"] == 0 else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="zpzp2",
        description="Rank and kernel analysis for Z_p x Z_p^2 additive codes",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    g = sub.add_parser("gray", help="Gray images, carry table, additivity sweep")
    g.add_argument("--p", type=int, required=True)
    g.add_argument("--u", type=int, help="element of Z_{p^2} to map")
    g.add_argument("--coeffs", action="store_true", help="print the carry polynomial")
    g.add_argument(
        "--check-identity", action="store_true", help="exhaustive additivity sweep"
    )
    g.set_defaults(func=cmd_gray)

    c = sub.add_parser("coeffs", help="carry polynomial data as JSON")
    c.add_argument("--p", type=int, required=True)
    c.add_argument("--out")
    c.set_defaults(func=cmd_coeffs)

    b = sub.add_parser("construct", help="build a code hitting a rank or pair target")
    b.add_argument("--p", type=int, required=True)
    b.add_argument("--type", type=_type_arg, required=True, metavar="a,b,g,d,k")
    b.add_argument("--rank", type=int, help="absolute rank target")
    b.add_argument(
        "--pair", type=_pair_arg, metavar="KBAR,RBAR",
        help="kernel and rank offsets (kbar, rbar)",
    )
    b.add_argument("--out", help="code-spec path; the plan lands beside it")
    b.set_defaults(func=cmd_construct)

    a = sub.add_parser("analyze", help="rank/kernel report for a code-spec file")
    a.add_argument("spec")
    a.add_argument("--cap", type=int, default=DEFAULT_CAP)
    a.add_argument("--out")
    a.set_defaults(func=cmd_analyze)

    v = sub.add_parser("verify", help="run the named-check campaign")
    v.add_argument("--p", type=_primes_arg, default=(3, 5, 7, 11, 13), metavar="P1,P2,...")
    v.add_argument("--seed", type=int, default=0)
    v.add_argument("--cap", type=int, default=DEFAULT_CAP)
    v.add_argument("--jobs", type=int, default=1)
    v.add_argument("--out")
    v.add_argument("--format", choices=("json", "csv"), default="json")
    v.set_defaults(func=cmd_verify)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, TypeError) as exc:
        print(f"zpzp2: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
