"""Command-line front end.

    hsrsim run spec.yaml --out results/

reads an experiment spec, runs the selected figure recipes, and prints one
line per CSV written.  Exit codes separate the failure families so shell
scripts can tell a typo from a crashed run:

    0  success
    1  runtime failure while executing the experiment
    2  spec file missing
    3  spec file unreadable (YAML syntax)
    4  spec file readable but invalid (named key + constraint)
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import replace

from .admission import SchemeKind
from .experiments import (ExperimentSpec, SpecSyntaxError,
                          SpecValidationError, parse_spec, run_experiment,
                          _parse_seeds)

EXIT_OK = 0
EXIT_RUNTIME = 1
EXIT_MISSING = 2
EXIT_SYNTAX = 3
EXIT_INVALID = 4


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="hsrsim",
        description="Two-hop rail link simulator: experiment sweeps to CSV.")
    sub = parser.add_subparsers(dest="command", required=True)

    run_p = sub.add_parser("run", help="execute an experiment spec")
    run_p.add_argument("spec", help="YAML experiment spec (may be empty)")
    run_p.add_argument("--out", help="output directory (overrides spec)")
    run_p.add_argument("--seeds",
                       help="comma list or range a..b (overrides spec)")
    run_p.add_argument("--speeds",
                       help="comma list of speeds in km/h (overrides spec)")
    run_p.add_argument("--scheme",
                       choices=[s.value for s in SchemeKind],
                       help="run a single admission scheme as a generic "
                            "sweep instead of the figure recipes")
    run_p.add_argument("--allocator", choices=["exact", "greedy"],
                       help="power allocator used inside the simulator")
    run_p.add_argument("--workers", type=int, default=None,
                       help="worker threads (default: automatic)")
    run_p.add_argument("--quiet", action="store_true",
                       help="suppress the per-file summary lines")
    return parser


def _apply_overrides(spec: ExperimentSpec, args) -> ExperimentSpec:
    updates = {}
    if args.out:
        updates["out_dir"] = args.out
    if args.seeds:
        value = ([v.strip() for v in args.seeds.split(",")]
                 if "," in args.seeds else args.seeds)
        if isinstance(value, str) and ".." not in value:
            value = [value]
        updates["seeds"] = _parse_seeds(value)
    if args.speeds:
        try:
            updates["speeds_kmh"] = tuple(
                float(v) for v in args.speeds.split(","))
        except ValueError:
            raise SpecValidationError(
                "--speeds entries must be numbers separated by commas")
    if args.scheme:
        updates["schemes"] = (SchemeKind(args.scheme),)
        updates["figures"] = ()
    if args.allocator:
        updates["scenario"] = replace(spec.scenario, allocator=args.allocator)
    return replace(spec, **updates) if updates else spec


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        spec = parse_spec(args.spec)
        spec = _apply_overrides(spec, args)
    except FileNotFoundError as exc:
        print(f"hsrsim: {exc}", file=sys.stderr)
        return EXIT_MISSING
    except SpecSyntaxError as exc:
        print(f"hsrsim: {exc}", file=sys.stderr)
        return EXIT_SYNTAX
    except SpecValidationError as exc:
        print(f"hsrsim: {exc}", file=sys.stderr)
        return EXIT_INVALID

    try:
        result = run_experiment(spec, max_workers=args.workers)
    except Exception as exc:
        print(f"hsrsim: run failed: {exc}", file=sys.stderr)
        return EXIT_RUNTIME

    if not args.quiet:
        for line in result.summary_lines():
            print(line)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
