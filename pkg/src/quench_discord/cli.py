"""Command-line entry point ``quench-discord``.

Exit codes: 0 success, 1 validation or usage error, 2 when the fraction of
failed grid points exceeds ``--max-failures``.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import __version__
from .io import ConfigError, csv_text, parse_config, write_outputs
from .model import ParameterError, QuenchParams
from .sweep import SpecError, TimeMode, run_sweep
from .validation import format_oracle_table, oracle_table, run_invariants, trend_ok

EXIT_OK, EXIT_INVALID, EXIT_FAILURES = 0, 1, 2

SUBCOMMAND_KIND = {"timeseries": "time_series", "sweep": None, "contour": "grid2d"}


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    """argparse exits with status 2 on usage errors; here 2 means something else."""

    def error(self, message: str):
        raise UsageError(f"{self.prog}: {message}\nfix: run '{self.prog} --help' for the accepted flags")


def _positive_int(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text}")
    return value


def _fraction(text: str) -> float:
    value = float(text)
    if not 0.0 <= value <= 1.0:
        raise argparse.ArgumentTypeError(f"expected a fraction in [0, 1], got {text}")
    return value


def _time_mode(text: str) -> str:
    try:
        TimeMode.parse(text)
    except SpecError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None
    return text


def _quench(text: str) -> tuple[float, float]:
    try:
        a, b = text.split(":")
        return float(a), float(b)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected J0:J1, e.g. 1:2, got {text!r}") from None


def _float_list(text: str) -> tuple[float, ...]:
    try:
        return tuple(float(x) for x in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from None


def _int_list(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(x) for x in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="quench-discord", description="Quantum discord after a quench of the XY chain.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    for name, help_text in (
        ("timeseries", "discord versus time"),
        ("sweep", "any sweep kind named in the config"),
        ("contour", "2D parameter grid"),
    ):
        p = sub.add_parser(name, help=help_text)
        p.add_argument("--config", required=True, type=Path, help="key: value sweep document")
        p.add_argument("--out", type=Path, help="output prefix; writes PREFIX.csv and PREFIX.meta.json")
        p.add_argument("--threads", type=_positive_int, default=1)
        p.add_argument("--n-sites", type=int, help="override N")
        p.add_argument("--time-mode", type=_time_mode, help="at:T | asymptotic | window:T,D,S")
        p.add_argument("--max-failures", type=_fraction, default=0.001,
                       help="largest tolerated fraction of failed points (default 0.001)")

    p = sub.add_parser("oracle-check", help="compare with exact diagonalisation for N = 4..10")
    p.add_argument("--gamma", type=float, default=1.0)
    p.add_argument("--quench", type=_quench, default=(1.0, 2.0), help="J0:J1 (default 1:2)")
    p.add_argument("--field", type=_quench, default=(1.0, 1.0), help="h0:h1 (default 1:1)")
    p.add_argument("--kT", type=float, default=0.0)
    p.add_argument("--times", type=_float_list, default=(0.5, 1.0, 2.0))
    p.add_argument("--sizes", type=_int_list, default=(4, 6, 8, 10))
    p.add_argument("--method", choices=("exact", "antiperiodic", "paper"), default="exact",
                   help="analytic method the trend check applies to")

    p = sub.add_parser("props", help="run the invariant suite")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--n-sites", type=int, default=200)
    return parser


def _run_sweep(args) -> int:
    try:
        text = args.config.read_text()
    except OSError as exc:
        print(f"error: cannot read config {args.config}: {exc.strerror or exc}", file=sys.stderr)
        return EXIT_INVALID
    try:
        spec = parse_config(text, SUBCOMMAND_KIND[args.command], args.n_sites, args.time_mode)
    except ConfigError as exc:
        print(f"error: {args.config}: {exc}", file=sys.stderr)
        return EXIT_INVALID
    result = run_sweep(spec, threads=args.threads)
    if args.out is None:
        sys.stdout.write(csv_text(result))
    else:
        csv_path, meta_path = write_outputs(result, args.out)
        print(f"wrote {csv_path} and {meta_path}", file=sys.stderr)
    if result.failure_fraction > args.max_failures:
        print(
            f"error: {result.n_failed} of {result.n_points} points failed "
            f"({result.failure_fraction:.2%} > {args.max_failures:.2%})",
            file=sys.stderr,
        )
        return EXIT_FAILURES
    return EXIT_OK


def _run_oracle(args) -> int:
    try:
        base = QuenchParams(
            J0=args.quench[0], J1=args.quench[1], h0=args.field[0], h1=args.field[1],
            gamma=args.gamma, kT=args.kT, N=4,
        )
        for N in args.sizes:
            base.replace(N=N)
            if N > 10:
                raise ParameterError(f"sizes must be <= 10 for exact diagonalisation, got {N}")
    except ParameterError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    rows = oracle_table(base, args.times, args.sizes)
    print(format_oracle_table(rows))
    ok = trend_ok(rows, args.method)
    print(f"trend ({args.method}, N >= 6 non-increasing): {'PASS' if ok else 'FAIL'}")
    return EXIT_OK if ok else EXIT_INVALID


def _run_props(args) -> int:
    try:
        QuenchParams(N=args.n_sites)
    except ParameterError as exc:
        print(f"error: --n-sites: {exc}", file=sys.stderr)
        return EXIT_INVALID
    checks = run_invariants(seed=args.seed, N=args.n_sites)
    for c in checks:
        print(f"{'PASS' if c.passed else 'FAIL'}  {c.name}" + (f"  ({c.detail})" if c.detail else ""))
    return EXIT_OK if all(c.passed for c in checks) else EXIT_INVALID


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as exc:
        print(exc, file=sys.stderr)
        return EXIT_INVALID
    if args.command in SUBCOMMAND_KIND:
        return _run_sweep(args)
    if args.command == "oracle-check":
        return _run_oracle(args)
    return _run_props(args)


if __name__ == "__main__":
    sys.exit(main())
