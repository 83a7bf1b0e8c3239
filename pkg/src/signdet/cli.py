"""``signdet`` command line: detsign, jacobian, coredet and graph subcommands.

Exit codes: 0 success, 1 input or parse error, 2 non-square input to a
square-only analysis, 3 oracle mismatch.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from .bigraph import DEFAULT_LIMIT, build_graph, to_dot
from .coredet import (
    cf_determinant,
    cf_determinant_oracle,
    core_determinant,
    core_determinant_oracle,
    coredet_report,
)
from .detsign import detsign_report
from .errors import LimitExceeded, NotSquare, SignDetError, TooLarge
from .jacobian import jacobian_report
from .matrix_core import RationalMatrix, parse_matrix, sign_pattern_of
from .symexpand import det_expansion, sign_counts

EXIT_INPUT = 1
EXIT_NOT_SQUARE = 2
EXIT_ORACLE = 3


class _Fail(Exception):
    def __init__(self, code: int, message: str):
        super().__init__(message)
        self.code = code


def _limit(args) -> int:
    if args.limit is not None:
        return args.limit
    env = os.environ.get("SIGNDET_LIMIT")
    if env:
        try:
            return int(env)
        except ValueError:
            raise _Fail(EXIT_INPUT, f"SIGNDET_LIMIT must be an integer, got {env!r}")
    return DEFAULT_LIMIT


def _load(args) -> RationalMatrix:
    try:
        text = sys.stdin.read() if args.matrix == "-" else Path(args.matrix).read_text()
    except OSError as exc:
        raise _Fail(EXIT_INPUT, f"cannot read {args.matrix}: {exc.strerror or exc}")
    fmt = args.format
    if fmt is None:
        fmt = "json" if args.matrix.endswith(".json") else "csv"
    try:
        return parse_matrix(text, fmt)
    except SignDetError as exc:
        raise _Fail(EXIT_INPUT, f"{args.matrix}: {exc}")


def _emit(obj, args) -> None:
    if args.pretty:
        print(json.dumps(obj, indent=2))
    else:
        print(json.dumps(obj, separators=(",", ":")))


def _oracle_note(msg: str) -> None:
    print(f"oracle: {msg}", file=sys.stderr)


def cmd_detsign(args) -> int:
    M = _load(args)
    if M.nrows != M.ncols:
        raise _Fail(EXIT_NOT_SQUARE, f"detsign needs a square matrix, got {M.nrows}x{M.ncols}")
    P = sign_pattern_of(M)
    report = detsign_report(P, _limit(args))
    _emit(report, args)
    if args.oracle:
        try:
            truth = sign_counts(det_expansion(P)).to_dict()
        except TooLarge as exc:
            _oracle_note(f"skipped ({exc})")
            return 0
        got = {k: report[k] for k in truth}
        if got != truth:
            _oracle_note(f"mismatch: graph {got} vs expansion {truth}")
            return EXIT_ORACLE
    return 0


def cmd_jacobian(args) -> int:
    _emit(jacobian_report(_load(args)), args)
    return 0


def cmd_coredet(args) -> int:
    S = _load(args)
    limit = _limit(args)
    try:
        report = coredet_report(
            S, cfd=args.cfd, zero_one=args.zero_one, bounds=args.bounds,
            limit=limit, exhaustive_cap=args.exhaustive_cap,
        )
    except LimitExceeded as exc:
        raise _Fail(EXIT_INPUT, str(exc))
    _emit(report, args)
    if args.oracle:
        checks = [("cd", core_determinant, core_determinant_oracle)]
        if args.cfd:
            checks.append(("cfd", cf_determinant, cf_determinant_oracle))
        for name, fast, slow in checks:
            try:
                expected = slow(S)
            except TooLarge as exc:
                _oracle_note(f"{name} skipped ({exc})")
                continue
            if fast(S) != expected:
                _oracle_note(f"{name} mismatch with the t-expansion")
                return EXIT_ORACLE
    return 0


def cmd_graph(args) -> int:
    G = build_graph(_load(args))
    dot = to_dot(G)
    if args.dot is None:
        sys.stdout.write(dot)
        return 0
    try:
        Path(args.dot).write_text(dot)
    except OSError as exc:
        raise _Fail(EXIT_INPUT, f"cannot write {args.dot}: {exc.strerror or exc}")
    edges = G.edges
    neg = sum(1 for _, _, s in edges if s < 0)
    _emit(
        {
            "dot": args.dot,
            "rows": G.n_rows,
            "cols": G.n_cols,
            "edges": len(edges),
            "negative": neg,
            "positive": len(edges) - neg,
        },
        args,
    )
    return 0


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("matrix", help="matrix file (CSV or JSON); '-' reads stdin")
    common.add_argument("--format", choices=("csv", "json"), help="input format (default: from the file suffix)")
    common.add_argument("--limit", type=int, help="enumeration cap (default: $SIGNDET_LIMIT or 10**6)")
    out = common.add_mutually_exclusive_group()
    out.add_argument("--pretty", action="store_true", help="indented JSON")
    out.add_argument("--json", dest="pretty", action="store_false", help="compact JSON (default)")

    parser = argparse.ArgumentParser(prog="signdet", description="Sign counts of determinant expansions.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("detsign", parents=[common], help="term and anomalous-sign counts of a square matrix")
    p.add_argument("--oracle", action="store_true", help="cross-check against the permutation expansion")
    p.set_defaults(func=cmd_detsign)

    p = sub.add_parser("jacobian", parents=[common], help="reaction form and sign pattern of S U")
    p.set_defaults(func=cmd_jacobian)

    p = sub.add_parser("coredet", parents=[common], help="core determinant of S U")
    p.add_argument("--cfd", action="store_true", help="also expand det(S U - I)")
    p.add_argument("--zero-one", action="store_true", help="run the zero-one anomalous sign algorithm")
    p.add_argument("--bounds", action="store_true", help="bounds on the number of anomalous signs")
    p.add_argument("--oracle", action="store_true", help="cross-check against the t-expansion of det(S U - t I)")
    p.add_argument("--exhaustive-cap", type=int, default=20000, help="submatrices checked for genericity")
    p.set_defaults(func=cmd_coredet)

    p = sub.add_parser("graph", parents=[common], help="signed bipartite graph as DOT")
    p.add_argument("--dot", metavar="OUT", help="write DOT here and print a summary (default: DOT to stdout)")
    p.set_defaults(func=cmd_graph)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except _Fail as exc:
        print(f"signdet: {exc}", file=sys.stderr)
        return exc.code
    except NotSquare as exc:
        print(f"signdet: {exc}", file=sys.stderr)
        return EXIT_NOT_SQUARE


if __name__ == "__main__":
    sys.exit(main())
