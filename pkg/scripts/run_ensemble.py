#!/usr/bin/env python3
"""Residual sweep over random coefficient ensembles.

Prints the machine-readable summary to stdout and a small per-period table
to stderr.  Typical use:

    python scripts/run_ensemble.py --periods 2,4,6,8 --samples 500 --radius 0.95
"""

import argparse
import sys

from cmvtrace.cli import EnsembleSpec, sweep_summary, to_json


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--periods", default="2,4,6,8", help="comma-separated even periods")
    ap.add_argument("--samples", type=int, default=200, help="words per period")
    ap.add_argument("--radius", type=float, default=0.9, help="coefficient disk radius")
    ap.add_argument("--seed", type=int, default=42)
    ap.add_argument("--tol", type=float, default=1e-8, help="pass/fail threshold")
    args = ap.parse_args()

    spec = EnsembleSpec(
        periods=tuple(int(x) for x in args.periods.split(",") if x.strip()),
        samples_per_period=args.samples,
        radius_max=args.radius,
        base_seed=args.seed,
    )
    summary = sweep_summary(spec, tolerance=args.tol)

    print(f"{'period':>7} {'samples':>8} {'max residual':>14} {'worst':>6}", file=sys.stderr)
    for row in summary["periods"]:
        print(
            f"{row['period']:>7} {row['samples']:>8} {row['max_residual']:>14.3e}"
            f" {row['worst_sample']:>6}",
            file=sys.stderr,
        )
    print(
        f"overall max residual {summary['max_residual']:.3e}"
        f" ({'pass' if summary['pass'] else 'FAIL'} at {args.tol:g})",
        file=sys.stderr,
    )

    sys.stdout.write(to_json(summary))
    return 0 if summary["pass"] else 1


if __name__ == "__main__":
    sys.exit(main())
