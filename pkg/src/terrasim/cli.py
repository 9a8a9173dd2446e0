"""Command line entry point: ``terrasim run | check | print-defaults``."""
from __future__ import annotations

import argparse
import json
import logging
import sys

from .engine import StabilityFailure, run_simulation
from .output import DirectorySink, OutputError
from .scenario import ScenarioError, default_document, load_scenario_file

EXIT_OK = 0
EXIT_INVALID = 2
EXIT_IO = 3


def _load(path: str):
    try:
        return load_scenario_file(path)
    except OSError as exc:
        print(f"error: cannot read scenario {path}: {exc}", file=sys.stderr)
        raise SystemExit(EXIT_IO)
    except ScenarioError as exc:
        print(f"error: {exc}", file=sys.stderr)
        raise SystemExit(EXIT_INVALID)


def cmd_print_defaults(args) -> int:
    print(json.dumps(default_document(), indent=2))
    return EXIT_OK


def cmd_check(args) -> int:
    scenario = _load(args.scenario)
    report = scenario.stability()
    print(report)
    return EXIT_OK if report.ok else EXIT_INVALID


def cmd_run(args) -> int:
    scenario = _load(args.scenario)
    if args.days is not None:
        if args.days < 1:
            print("error: days must be ≥ 1", file=sys.stderr)
            return EXIT_INVALID
        scenario.days = args.days
    if args.snapshot_every is not None:
        scenario.snapshot_every = args.snapshot_every
    scenario.heatmaps = scenario.heatmaps or args.heatmaps
    scenario.figures = scenario.figures or args.figures
    try:
        sink = DirectorySink(args.out, heatmaps=scenario.heatmaps, figures=scenario.figures)
        state, series = run_simulation(scenario, [sink])
    except StabilityFailure as exc:
        print(f"error: stability check failed\n{exc.report}", file=sys.stderr)
        return EXIT_INVALID
    except OutputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    last = series[-1]
    print(
        f"{len(series)} days done: phi={last.phi:.6g} mass_E={last.mass_E:.6g} "
        f"mass_W={last.mass_W:.6g} mean_i={last.mean_i:.6g}"
    )
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="terrasim", description=__doc__)
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="run a scenario and write outputs")
    run.add_argument("--scenario", required=True)
    run.add_argument("--out", required=True)
    run.add_argument("--days", type=int)
    run.add_argument("--snapshot-every", type=int, dest="snapshot_every")
    run.add_argument("--heatmaps", action="store_true", help="also write PGM frames")
    run.add_argument("--figures", action="store_true", help="also render PNG figures")
    run.set_defaults(func=cmd_run)

    check = sub.add_parser("check", help="validate a scenario and report stability")
    check.add_argument("--scenario", required=True)
    check.set_defaults(func=cmd_check)

    defaults = sub.add_parser("print-defaults", help="print the default scenario")
    defaults.set_defaults(func=cmd_print_defaults)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        level=logging.INFO if args.verbose else logging.WARNING,
        format="%(levelname)s %(name)s: %(message)s",
    )
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
