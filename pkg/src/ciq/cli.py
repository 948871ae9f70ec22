"""
``ciq`` command line.

Exit codes: 0 when the report passes, 1 when a verification fails, 2 on
usage, configuration or input-file errors.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys

from ciq.errors import FormatError
from ciq.report import RunConfig, run_basis_check, run_decompose, run_verify

EXIT_PASS, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


def _odd_points(text: str) -> int:
    try:
        n = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}")
    if n < 3:
        raise argparse.ArgumentTypeError("n_points must be >= 3")
    if n % 2 == 0:
        raise argparse.ArgumentTypeError("n_points must be odd")
    return n


def _positive(text: str) -> float:
    try:
        x = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}")
    if not x > 0:
        raise argparse.ArgumentTypeError(f"must be positive: {text}")
    return x


def _unsigned(text: str) -> int:
    n = int(text)
    if n < 0:
        raise argparse.ArgumentTypeError("seed must be unsigned")
    return n


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="ciq", description="Lattice bracket identification checks.")
    sub = p.add_subparsers(dest="command", required=True)

    v = sub.add_parser("verify", help="identify and check brackets for a field theory")
    v.add_argument("scenario", choices=["kg", "maxwell"])
    v.add_argument("--n", type=_odd_points, required=True, help="points per axis (odd)")
    v.add_argument("--spacing", type=_positive, default=1.0)
    v.add_argument("--mass", type=_positive, default=None, help="kg only")
    v.add_argument("--tol", type=_positive, default=1e-9)
    v.add_argument("--times", type=float, nargs="+", default=[0.1, 1.0])
    v.add_argument("--trials", type=int, default=8)
    v.add_argument("--seed", type=_unsigned, default=0)
    v.add_argument("--out", default=None, help="JSON report path")

    d = sub.add_parser("decompose", help="Helmholtz split of a CIQF vector field")
    d.add_argument("--in", dest="input", required=True)
    d.add_argument("--out-transverse", required=True)
    d.add_argument("--out-longitudinal", required=True)

    b = sub.add_parser("basis", help="check the polarization basis")
    b.add_argument("--n", type=_odd_points, required=True)
    b.add_argument("--out", default=None)
    return p


def main(argv=None) -> int:
    logging.basicConfig(level=logging.WARNING, format="ciq: %(message)s")
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_PASS

    if args.command == "verify":
        if args.scenario == "maxwell" and args.mass is not None:
            logging.warning("--mass is ignored for maxwell")
        try:
            cfg = RunConfig(
                scenario=args.scenario,
                n_points=args.n,
                spacing=args.spacing,
                mass=args.mass if (args.mass and args.scenario == "kg") else 1.0,
                tolerance=args.tol,
                covariance_times=list(args.times),
                trials=args.trials,
                seed=args.seed,
                output_path=args.out,
            )
        except ValueError as exc:
            print(f"ciq: error: {exc}", file=sys.stderr)
            return EXIT_USAGE
        report = run_verify(cfg)
        print(json.dumps(report.to_json(), indent=2, sort_keys=True))
        return EXIT_PASS if report.passed else EXIT_FAIL

    if args.command == "basis":
        report = run_basis_check(args.n, args.out)
        print(json.dumps(report.to_json(), indent=2, sort_keys=True))
        return EXIT_PASS if report.passed else EXIT_FAIL

    try:
        run_decompose(args.input, args.out_transverse, args.out_longitudinal)
    except (FormatError, OSError) as exc:
        print(f"ciq: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    return EXIT_PASS


if __name__ == "__main__":
    sys.exit(main())
