"""Command line: gen, solve, verify, oracle, bench.

Exit codes: 0 success, 1 bad input or usage, 2 certificate rejected.
"""
from __future__ import annotations

import argparse
import csv
import json
import sys

from .augment import RoundStats
from .bench import KINDS, rows_to_csv, run_bench
from .oracle import max_transversal_exact
from .square import (
    InfeasibleBeta,
    SquareFormatError,
    compute_profile,
    gen_cyclic_latin,
    gen_random_bounded,
    gen_random_equi,
    read_square,
    write_square,
)
from .solver import SolverParams, solve
from .transversal import OutOfRange, check_certificate, load_transversal, transversal_to_json


class UsageError(Exception):
    pass


def _csv_list(conv):
    def parse(text):
        try:
            return [conv(x) for x in text.split(",") if x.strip()]
        except ValueError as e:
            raise argparse.ArgumentTypeError(str(e)) from e
    return parse


def _load(path):
    try:
        return read_square(path)
    except OSError as e:
        raise UsageError(f"cannot read {path}: {e.strerror}") from e
    except SquareFormatError as e:
        raise UsageError(f"{path}: {type(e).__name__}: {e}") from e


def cmd_gen(args) -> int:
    if args.kind == "bounded" and args.beta is None:
        raise UsageError("--beta is required for --kind bounded")
    if args.kind != "bounded" and args.beta is not None:
        raise UsageError("--beta only applies to --kind bounded")
    if args.n < 1:
        raise UsageError("--n must be positive")
    if args.kind == "cyclic":
        sq = gen_cyclic_latin(args.n)
    elif args.kind == "equi":
        sq = gen_random_equi(args.n, args.seed)
    else:
        try:
            sq = gen_random_bounded(args.n, args.beta, args.seed)
        except InfeasibleBeta as e:
            raise UsageError(f"InfeasibleBeta: {e}") from e
    write_square(sq, args.out)
    p = compute_profile(sq)
    print(f"n={sq.n} symbols={p.distinct_symbols} max_count={p.max_count} "
          f"beta={p.beta} is_equi={str(p.is_equi).lower()}")
    return 0


def cmd_solve(args) -> int:
    sq = _load(args.input)
    try:
        params = SolverParams(epsilon=args.epsilon, mode=args.mode, debug_asserts=args.debug)
    except ValueError as e:
        raise UsageError(str(e)) from e
    res = solve(sq, params)
    text = res.to_json(sq)
    if args.json_out:
        with open(args.json_out, "w") as f:
            f.write(text)
    else:
        sys.stdout.write(text)
    if args.rounds_csv:
        with open(args.rounds_csv, "w", newline="") as f:
            w = csv.writer(f, lineterminator="\n")
            w.writerow(RoundStats.FIELDS)
            for st in res.per_round:
                w.writerow(st.row())
    return 0


def cmd_verify(args) -> int:
    sq = _load(args.square)
    try:
        with open(args.transversal) as f:
            entries = load_transversal(f.read())
    except OSError as e:
        raise UsageError(f"cannot read {args.transversal}: {e.strerror}") from e
    except (ValueError, KeyError, TypeError) as e:
        raise UsageError(f"{args.transversal}: malformed certificate: {e}") from e
    try:
        bad = check_certificate(sq, entries)
    except OutOfRange as e:
        print(f"FAIL out-of-range: {e}")
        return 2
    if bad is not None:
        print(f"FAIL {bad.describe()}")
        return 2
    if args.min_size is not None and len(entries) < args.min_size:
        print(f"FAIL size-shortfall: {len(entries)} < {args.min_size}")
        return 2
    print(f"OK transversal of size {len(entries)}")
    return 0


def cmd_oracle(args) -> int:
    sq = _load(args.input)
    res = max_transversal_exact(sq, args.node_budget)
    out = {
        "n": sq.n,
        "max_size": res.max_size,
        "exact": not res.exhausted,
        "nodes_explored": res.nodes_explored,
        "transversal": transversal_to_json(sq, res.witness),
    }
    print(json.dumps(out, indent=2))
    return 0


def cmd_bench(args) -> int:
    for kind in args.kinds:
        if kind not in KINDS:
            raise UsageError(f"unknown kind {kind!r}")
    if "bounded" in args.kinds and not args.beta_list:
        raise UsageError("--beta-list is required for kind bounded")
    if args.trials < 0 or any(n < 1 for n in args.n_list):
        raise UsageError("--trials must be >= 0 and every n positive")
    try:
        SolverParams(epsilon=args.epsilon)
        rows = run_bench(args.n_list, args.kinds, args.beta_list or [], args.trials, args.seed,
                         args.epsilon, timing=not args.no_timing, jobs=args.jobs)
    except InfeasibleBeta as e:
        raise UsageError(f"InfeasibleBeta: {e}") from e
    except ValueError as e:
        raise UsageError(str(e)) from e
    with open(args.csv_out, "w", newline="") as f:
        f.write(rows_to_csv(rows))
    print(f"wrote {len(rows)} rows to {args.csv_out}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="equisquare", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen", help="generate a square as CSV")
    p.add_argument("--kind", choices=KINDS, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--beta", type=float)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("solve", help="find a large transversal")
    p.add_argument("--input", required=True)
    p.add_argument("--epsilon", type=float, default=0.25)
    p.add_argument("--mode", choices=("paper", "practical"), default="practical")
    p.add_argument("--debug", action="store_true", help="check every internal invariant")
    p.add_argument("--json-out")
    p.add_argument("--rounds-csv", help="write per-round statistics here")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("verify", help="check a transversal certificate")
    p.add_argument("--square", required=True)
    p.add_argument("--transversal", required=True)
    p.add_argument("--min-size", type=int)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("oracle", help="exact maximum transversal (small n)")
    p.add_argument("--input", required=True)
    p.add_argument("--node-budget", type=int)
    p.set_defaults(func=cmd_oracle)

    p = sub.add_parser("bench", help="solver vs greedy over generated instances")
    p.add_argument("--n-list", type=_csv_list(int), required=True)
    p.add_argument("--kinds", type=_csv_list(str), default=["equi"])
    p.add_argument("--beta-list", type=_csv_list(float), default=[])
    p.add_argument("--trials", type=int, default=1)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--epsilon", type=float, default=0.25)
    p.add_argument("--csv-out", required=True)
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--no-timing", action="store_true",
                   help="leave wall_time_ms empty so the CSV is byte-reproducible")
    p.set_defaults(func=cmd_bench)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return 0 if e.code == 0 else 1
    try:
        return args.func(args)
    except UsageError as e:
        print(f"error: {e}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
