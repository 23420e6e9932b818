"""Command-line entry point.

Exit codes: 0 success, 1 configuration error, 2 numerical failure,
3 validation failure.
"""

from __future__ import annotations

import argparse
import logging
import sys
import time
from pathlib import Path

from ..asymptotics import NoCriticalPointError
from ..specfn import DomainError
from . import experiments as ex
from .summary import write_outputs

EXIT_OK = 0
EXIT_CONFIG = 1
EXIT_NUMERICAL = 2
EXIT_VALIDATION = 3

log = logging.getLogger("gammapolymer")


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_CONFIG, f"{self.prog}: error: {message}\n")


def _floats(text: str) -> list[float]:
    try:
        return [float(x) for x in text.split(",") if x.strip()]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from exc


def _ints(text: str) -> list[int]:
    try:
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from exc


def _grid(text: str) -> list[float]:
    """``lo:hi:step`` or a comma list."""
    if ":" in text:
        try:
            lo, hi, step = (float(x) for x in text.split(":"))
        except ValueError as exc:
            raise argparse.ArgumentTypeError(f"expected lo:hi:step, got {text!r}") from exc
        if step <= 0 or hi < lo:
            raise argparse.ArgumentTypeError("need step > 0 and hi >= lo")
        count = int(round((hi - lo) / step)) + 1
        return [round(lo + k * step, 12) for k in range(count)]
    return _floats(text)


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=1, help="base seed (u64)")
    common.add_argument("--threads", type=int, default=1)
    common.add_argument("--out", type=Path, default=Path("out"), help="output directory")
    common.add_argument("--replicas", type=int, default=None)
    common.add_argument("--json", action="store_true", help="print the summary JSON to stdout")
    common.add_argument("--tag", default=None, help="file-name stamp instead of a UTC timestamp")
    common.add_argument("-v", "--verbose", action="store_true")

    parser = _Parser(prog="gammapolymer", description="Gamma polymer experiments.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("constants", parents=[common], help="saddle-point constants over a grid")
    p.add_argument("--c", type=_floats, default=[2.0, 4.0])
    p.add_argument("--gamma", type=_floats, default=[1e-3, 1e-2, 0.1, 0.2, 0.5, 1.0])

    p = sub.add_parser("verify-identities", parents=[common], help="gRSK and DP identity checks")
    p.add_argument("--max-h", type=int, default=6)
    p.add_argument("--max-n", type=int, default=3)
    p.add_argument("--count", type=int, default=200)

    p = sub.add_parser("laplace-check", parents=[common], help="Laplace transform, MC vs determinants")
    p.add_argument("--n", type=int, default=2)
    p.add_argument("--h", type=int, default=3)
    p.add_argument("--gamma", type=float, default=0.5)
    p.add_argument("--eps", type=float, default=0.01)
    p.add_argument("--s", type=_floats, default=[0.5, 1.0, 2.0])
    p.add_argument("--order", type=int, default=48)

    p = sub.add_parser("lln", parents=[common], help="zero-temperature law of large numbers")
    p.add_argument("--alpha", type=float, default=2.0)
    p.add_argument("--n", type=_ints, default=[250, 500, 1000])
    p.add_argument("--tolerance", type=float, default=0.02)

    p = sub.add_parser("lue-compare", parents=[common], help="FPP vs LUE smallest eigenvalue")
    p.add_argument("--m", type=int, default=3)
    p.add_argument("--n", type=int, default=3)
    p.add_argument("--alpha", type=float, default=0.01, help="KS significance level")

    p = sub.add_parser("tw", parents=[common], help="Tracy-Widom fluctuations of ln Z")
    p.add_argument("--alpha", type=float, default=1.0)
    p.add_argument("--gamma", type=_floats, default=[0.2, 0.5])
    p.add_argument("--n", type=_ints, default=[50, 100, 200])
    p.add_argument("--r", type=_grid, default=_grid("-6:4:0.25"))
    p.add_argument("--rows", choices=["alpha", "h"], default="alpha",
                   help="rows m = ceil(alpha n) or m = ceil((1+alpha) n) - n + 1")
    p.add_argument("--ks-cap", type=float, default=0.1)

    p = sub.add_parser("tw-table", parents=[common], help="tabulate F_GUE")
    p.add_argument("--r", type=_grid, default=_grid("-15:10:0.25"))
    p.add_argument("--M", type=float, default=12.0)
    p.add_argument("--order", type=int, default=48)
    return parser


_DEFAULT_REPLICAS = {"laplace-check": 1_000_000, "lln": 100, "lue-compare": 100_000, "tw": 10_000}


def _dispatch(args):
    replicas = args.replicas if args.replicas is not None else _DEFAULT_REPLICAS.get(args.command)
    if args.command == "constants":
        return ex.run_constants(args.c, args.gamma)
    if args.command == "verify-identities":
        return ex.run_verify_identities(args.seed, args.max_h, args.max_n, args.count, args.threads)
    if args.command == "laplace-check":
        return ex.run_laplace_check(args.n, args.h, args.gamma, args.eps, args.s, replicas, args.seed,
                                    args.threads, args.order)
    if args.command == "lln":
        return ex.run_lln(args.alpha, args.n, replicas, args.seed, args.threads, args.tolerance)
    if args.command == "lue-compare":
        return ex.run_lue_compare(args.m, args.n, replicas, args.seed, args.threads, args.alpha)
    if args.command == "tw":
        return ex.run_tw(args.alpha, args.gamma, args.n, replicas, args.r, args.seed, args.threads,
                         args.rows, args.ks_cap)
    if args.command == "tw-table":
        return ex.run_tw_table(args.r, args.M, args.order)
    raise ex.ConfigError(f"unknown command {args.command!r}")


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(message)s")
    if args.threads < 1:
        print("gammapolymer: error: --threads must be >= 1", file=sys.stderr)
        return EXIT_CONFIG
    start = time.perf_counter()
    try:
        summary, tables = _dispatch(args)
    except ex.ConfigError as exc:
        print(f"gammapolymer: configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except NoCriticalPointError as exc:
        print(f"gammapolymer: validation failure: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except (ArithmeticError, DomainError) as exc:
        print(f"gammapolymer: numerical failure: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    elapsed = time.perf_counter() - start
    written = write_outputs(args.out, summary, tables, args.tag,
                            timing={"wall_seconds": elapsed, "threads": args.threads})
    log.info("wrote %s", ", ".join(written.values()))
    if args.json:
        print(summary.to_json())
    for name, ok in summary.checks.items():
        log.info("%s %s", "PASS" if ok else "FAIL", name)
    if not summary.passed:
        failed = [k for k, v in summary.checks.items() if not v]
        print(f"gammapolymer: validation failure: {', '.join(failed)}", file=sys.stderr)
        return EXIT_VALIDATION
    return EXIT_OK


if __name__ == "__main__":
    raise SystemExit(main())
