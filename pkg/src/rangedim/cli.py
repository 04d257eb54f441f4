"""Command line interface.

Verbs: ``feasible``, ``construct``, ``analyze``, ``sweep``.  Each prints one
prose line (suppressed by ``--quiet``) followed by a JSON document.

Exit codes: 0 success, 1 usage error, 2 infeasible, 3 I/O failure,
4 invalid state file, 5 sweep failures.
"""

from __future__ import annotations

import argparse
import json
import sys

from .bipartite import DEFAULT_PROD_TOL, is_uncorrelated, rank_triple
from .constructions import (
    INF,
    Kind,
    classify_triple,
    classify_triple_extended,
    construct_witness,
    parse_extended_dim,
)
from .errors import DomainError, InfeasibleError, SizingError, ValidationError
from .linalg import DEFAULT_RANK_TOL
from .statefile import load_state, save_state
from .verification import analyze_state, sweep_theorem

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_INFEASIBLE = 2
EXIT_IO = 3
EXIT_BAD_STATE = 4
EXIT_SWEEP_FAILED = 5


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _emit(sentence: str, doc: dict, quiet: bool) -> None:
    if not quiet:
        print(sentence)
    print(json.dumps(doc, indent=2, sort_keys=True))


def _yn(flag: bool) -> str:
    return "yes" if flag else "no"


def cmd_feasible(args) -> int:
    try:
        dims = [parse_extended_dim(t) for t in args.dims]
    except DomainError as exc:
        raise UsageError(str(exc)) from None
    shown = ["inf" if d == INF else d for d in dims]
    if INF in dims:
        verdict = classify_triple_extended(*dims)
        doc = {"triple": shown, "exists": verdict.exists, "reasons": list(verdict.reasons)}
        sentence = f"{tuple(shown)}: exists {_yn(verdict.exists)}"
        exists = verdict.exists
    else:
        cls = classify_triple(*dims)
        doc = {
            "triple": shown,
            "exists": cls.exists,
            "correlated_exists": cls.correlated_exists,
            "uncorrelated_exists": cls.uncorrelated_exists,
            "reasons": list(cls.reasons),
        }
        sentence = (f"{tuple(shown)}: exists {_yn(cls.exists)}, correlated {_yn(cls.correlated_exists)}, "
                    f"uncorrelated {_yn(cls.uncorrelated_exists)}")
        exists = cls.exists
    _emit(sentence, doc, args.quiet)
    return EXIT_OK if exists else EXIT_INFEASIBLE


def cmd_construct(args) -> int:
    triple = (args.d1, args.d2, args.d3)
    if min(triple) < 1:
        raise UsageError(f"dimensions must be >= 1, got {triple}")
    try:
        rho = construct_witness(*triple, Kind(args.kind), args.seed)
    except InfeasibleError as exc:
        doc = {"triple": list(triple), "kind": args.kind, "error": "infeasible", "reasons": exc.reasons}
        _emit(f"no {args.kind} state has ranks {triple}: {', '.join(exc.reasons)}", doc, args.quiet)
        return EXIT_INFEASIBLE
    except SizingError as exc:
        raise UsageError(str(exc)) from None
    try:
        save_state(rho, args.out)
    except OSError as exc:
        print(f"error: cannot write {args.out}: {exc}", file=sys.stderr)
        return EXIT_IO
    ranks = rank_triple(rho)
    verdict = is_uncorrelated(rho)
    doc = {
        "triple": list(triple),
        "kind": args.kind,
        "seed": args.seed,
        "ranks": list(ranks),
        "correlated": not verdict.uncorrelated,
        "residual": verdict.residual,
        "out": str(args.out),
    }
    status = "uncorrelated" if verdict.uncorrelated else "correlated"
    _emit(f"wrote {status} state with ranks {tuple(ranks)} to {args.out}", doc, args.quiet)
    return EXIT_OK


def cmd_analyze(args) -> int:
    try:
        rho = load_state(args.path)
    except ValidationError as exc:
        print(f"error: invalid state file ({exc.invariant}): {exc.detail}", file=sys.stderr)
        return EXIT_BAD_STATE
    except (OSError, UnicodeDecodeError) as exc:
        print(f"error: cannot read {args.path}: {exc}", file=sys.stderr)
        return EXIT_BAD_STATE
    report = analyze_state(rho, args.rank_tol, args.prod_tol)
    status = "correlated" if report.correlated else "uncorrelated"
    if report.ambiguous:
        status += " (ambiguous)"
    necessity = "holds" if report.necessity.all_ok else "FAILS"
    sentence = f"ranks {tuple(report.ranks)}, {status}, necessity chain {necessity}"
    _emit(sentence, report.to_dict(), args.quiet)
    return EXIT_OK


def cmd_sweep(args) -> int:
    try:
        report = sweep_theorem(args.max_dim, args.samples, args.seed, args.rank_tol, args.prod_tol,
                               workers=args.workers)
    except SizingError as exc:
        raise UsageError(str(exc)) from None
    sentence = (f"{report.triples_checked} triples ({report.feasible_count} feasible), "
                f"{report.samples_checked} samples, {len(report.failures)} failures")
    _emit(sentence, report.to_dict(), args.quiet)
    return EXIT_OK if report.ok else EXIT_SWEEP_FAILED


def _nonneg_int(text: str) -> int:
    value = int(text)
    if value < 0:
        raise argparse.ArgumentTypeError("must be >= 0")
    return value


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--quiet", action="store_true", help="omit the prose line")
    parser = _Parser(prog="rangedim", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("feasible", parents=[common], help="classify a rank triple")
    p.add_argument("dims", nargs=3, metavar="D", help="natural number or 'inf'")
    p.set_defaults(func=cmd_feasible)

    p = sub.add_parser("construct", parents=[common], help="build and save a witness state")
    for name in ("d1", "d2", "d3"):
        p.add_argument(name, type=int)
    p.add_argument("--kind", choices=[k.value for k in Kind], default="any")
    p.add_argument("--seed", type=_nonneg_int, default=0)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_construct)

    p = sub.add_parser("analyze", parents=[common], help="report ranks and correlation of a saved state")
    p.add_argument("path")
    p.add_argument("--rank-tol", type=float, default=DEFAULT_RANK_TOL)
    p.add_argument("--prod-tol", type=float, default=DEFAULT_PROD_TOL)
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("sweep", parents=[common], help="check the theorem on every small triple")
    p.add_argument("--max-dim", type=int, default=3)
    p.add_argument("--samples", type=_nonneg_int, default=100)
    p.add_argument("--seed", type=_nonneg_int, default=0)
    p.add_argument("--rank-tol", type=float, default=DEFAULT_RANK_TOL)
    p.add_argument("--prod-tol", type=float, default=DEFAULT_PROD_TOL)
    p.add_argument("--workers", type=int, default=1)
    p.set_defaults(func=cmd_sweep)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return args.func(args)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
