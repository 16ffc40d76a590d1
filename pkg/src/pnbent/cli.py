"""Command-line entry point.

Exit codes: 0 success, 1 verdict false or a finding, 2 usage error, 3 input error.
"""
from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import duals as dualmod
from .errors import (CompletenessError, DimensionError, DualVerificationError, InvalidParameterError,
                     NotAGroupError, ParseError, TooLargeError, UnsupportedStructureError, WrongKindError)
from .groups import format_tag, group_from_spec, is_abelian, order_statistics, save_group
from .nonlinearity import bent_auto, parse_function_table, pn_oracle
from .search import SearchJob, format_report, parse_criteria, run_search, summary_line
from .selftest import CATALOGUE, run_selftest

EXIT_OK, EXIT_FINDING, EXIT_USAGE, EXIT_INPUT = 0, 1, 2, 3

_USAGE_ERRORS = (InvalidParameterError, TooLargeError)
_INPUT_ERRORS = (ParseError, NotAGroupError, DimensionError, DualVerificationError,
                 UnsupportedStructureError, CompletenessError, WrongKindError, OSError)


def _bool(v: bool) -> str:
    return "true" if v else "false"


def _is_dual_file(spec: str) -> bool:
    if not spec.startswith("file:"):
        return False
    for raw in Path(spec[5:]).read_text().splitlines():
        line = raw.split("#", 1)[0].strip()
        if line:
            return line.split()[0] == "dual"
    return False


def cmd_group(args) -> int:
    g = group_from_spec(args.spec)
    print(f"order {g.order} abelian {_bool(is_abelian(g))}")
    print(f"name {g.name} structure {format_tag(g.structure_tag)}")
    stats = " ".join(f"{k}:{v}" for k, v in order_statistics(g).items())
    print(f"element orders {stats}")
    if g.relabel is not None:
        print("relabelled " + " ".join(str(v) for v in g.relabel))
    if args.out:
        save_group(g, args.out)
    return EXIT_OK


def cmd_dual(args) -> int:
    if _is_dual_file(args.spec):
        g, d = dualmod.load_dual_standalone(args.spec[5:], args.tau)
    else:
        g = group_from_spec(args.spec)
        d = dualmod.dual_for(g, args.dual_file, args.tau)
    print(f"group {g.name} order {g.order} kind {d.kind}")
    print("dims " + ",".join(str(k) for k in d.dims))
    code = EXIT_OK
    if args.verify:
        report = dualmod.verify_dual(g, d, args.tau)
        print(report.format())
        print(f"verification {'passed' if report.passed else 'failed'}")
        if not report.passed:
            code = EXIT_FINDING
    if args.out:
        dualmod.save_dual(d, args.out)
    return code


def _describe(v) -> str:
    line = f"{v.method}: is_pn={_bool(v.is_pn)} max_residual={v.max_residual:.3e}"
    if v.failing_alpha is not None:
        line += f" failing_alpha={v.failing_alpha}"
    if v.witness is not None:
        line += f" witness={v.witness.where} residual={v.witness.residual:.3e}"
    return line


def cmd_check(args) -> int:
    G = group_from_spec(args.g)
    H = group_from_spec(args.h)
    f = parse_function_table(Path(args.fn_file).read_text(), G, H)
    verdicts = []
    if args.method in ("oracle", "both"):
        verdicts.append(pn_oracle(f))
    if args.method in ("bent", "both"):
        dG = dualmod.dual_for(G, args.g_dual, args.tau)
        dH = dualmod.dual_for(H, args.h_dual, args.tau)
        verdicts.append(bent_auto(f, dG, dH, args.tau))
    for v in verdicts:
        print(_describe(v))
    is_pn = verdicts[0].is_pn
    if args.method == "both":
        agree = verdicts[0].is_pn == verdicts[1].is_pn
        print(f"PN: {_bool(is_pn)}, agreement: {'yes' if agree else 'no'}")
        if not agree:
            return EXIT_FINDING
    else:
        print(f"PN: {_bool(is_pn)}")
    return EXIT_OK if is_pn else EXIT_FINDING


def _partition(text: str) -> tuple[int, int]:
    try:
        k, n = (int(v) for v in text.split("/"))
    except ValueError:
        raise InvalidParameterError(f"partition must look like k/n, got {text!r}") from None
    return k, n


def cmd_search(args) -> int:
    job = SearchJob(
        domain=args.g, codomain=args.h, mode=args.mode, sample_count=args.samples, seed=args.seed,
        criteria=parse_criteria(args.criteria), partition=_partition(args.partition),
        domain_dual=args.g_dual, codomain_dual=args.h_dual, tau=args.tau)
    report = run_search(job, workers=args.workers)
    if args.out:
        Path(args.out).write_text(format_report(report))
    print(summary_line(report))
    if "norm_condition" in job.criteria:
        print(f"norm_only {report.norm_only}")
    print(f"wall_time {report.wall_time:.2f}s", file=sys.stderr)
    return EXIT_FINDING if report.disagreement_count else EXIT_OK


def cmd_selftest(args) -> int:
    outcomes = run_selftest(args.group or CATALOGUE, args.tau)
    for o in outcomes:
        print(o.line())
    failed = sum(not o.passed for o in outcomes)
    print(f"{len(outcomes) - failed} passed, {failed} failed")
    return EXIT_FINDING if failed else EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--tau", type=float, default=None,
                        help="absolute tolerance for complex comparisons (default 1e-9*max(1,|G|))")
    parser = argparse.ArgumentParser(prog="pnbent", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("group", parents=[common], help="build and validate a group")
    p.add_argument("spec")
    p.add_argument("--out")
    p.set_defaults(func=cmd_group)

    p = sub.add_parser("dual", parents=[common], help="build or load a dual and verify it")
    p.add_argument("spec", help="group spec, or file:<path> of a dual-table file")
    p.add_argument("--dual-file", help="load the dual for SPEC from this file")
    p.add_argument("--verify", action="store_true")
    p.add_argument("--out")
    p.set_defaults(func=cmd_dual)

    p = sub.add_parser("check", parents=[common], help="verdict for one function table")
    p.add_argument("fn_file")
    p.add_argument("--g", required=True)
    p.add_argument("--h", required=True)
    p.add_argument("--method", choices=("oracle", "bent", "both"), default="both")
    p.add_argument("--g-dual")
    p.add_argument("--h-dual")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("search", parents=[common], help="sweep function tables G -> H")
    p.add_argument("--g", required=True)
    p.add_argument("--h", required=True)
    p.add_argument("--mode", choices=("exhaustive", "random"), default="exhaustive")
    p.add_argument("--samples", type=int, default=1000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--criteria", default="both",
                   help="comma list of oracle,bent_auto,norm_condition (aliases: both, bent, all)")
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--partition", default="0/1", help="shard k/n of the counter space")
    p.add_argument("--g-dual")
    p.add_argument("--h-dual")
    p.add_argument("--out")
    p.set_defaults(func=cmd_search)

    p = sub.add_parser("selftest", parents=[common], help="run the harmonic-analysis invariant suite")
    p.add_argument("--group", action="append", help="restrict to this group spec (repeatable)")
    p.set_defaults(func=cmd_selftest)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except _USAGE_ERRORS as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except _INPUT_ERRORS as exc:
        print(f"error: {exc}", file=sys.stderr)
        witness = getattr(exc, "witness", None)
        if witness is not None:
            print(f"witness: {witness}", file=sys.stderr)
        report = getattr(exc, "report", None)
        if report is not None:
            print(report.format(), file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
