"""Command-line entry point.

Exit status: 0 on success, 1 for invalid input, 2 when a run diverges.
"""

from __future__ import annotations

import argparse
import sys

from .decision import select_mode
from .errors import FilterDivergenceError, SimulationError, ValidationError
from .simharness import export, load_scenario, load_snapshot, monte_carlo, run_parking, run_scenario
from .simharness.export import FORMATS, ExportError
from .trajectory import SigmoidParams, parking_limits

EXIT_OK, EXIT_INVALID, EXIT_DIVERGED = 0, 1, 2


def _u64(text: str) -> int:
    value = int(text, 0)
    if not 0 <= value < 2**64:
        raise argparse.ArgumentTypeError(f"{text} is not an unsigned 64-bit integer")
    return value


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="mcdas", description="Midvehicle collision avoidance simulator")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("run", help="simulate one scenario and write per-tick records")
    p.add_argument("--scenario", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--format", choices=FORMATS, default="csv")

    p = sub.add_parser("park", help="generate a reverse parallel-parking path")
    p.add_argument("--gap-x", type=float, required=True, help="sensed gap length x_s [m]")
    p.add_argument("--gap-y", type=float, required=True, help="sensed lateral distance y_sp [m]")
    p.add_argument("--x-pd", type=float, default=0.0, help="predefined x margin [m] (default 0)")
    p.add_argument("--width", type=float, default=1.8, help="parking vehicle width [m] (default 1.8)")
    p.add_argument("--a", type=float, default=0.4)
    p.add_argument("--b", type=float, default=50.0)
    p.add_argument("--ymax", type=float, default=3.7)
    p.add_argument("--k", type=float, default=2.0)
    p.add_argument("--dt", type=float, default=0.5)
    p.add_argument("--out", required=True)
    p.add_argument("--format", choices=FORMATS, default="csv")

    p = sub.add_parser("montecarlo", help="run a seeded batch and write the report")
    p.add_argument("--scenario", required=True)
    p.add_argument("--runs", type=int, required=True)
    p.add_argument("--seed", type=_u64, default=None, help="master seed (default: scenario seed)")
    p.add_argument("--out", required=True)
    p.add_argument("--format", choices=FORMATS, default="json")

    p = sub.add_parser("modes", help="print the mode selected for a snapshot file")
    p.add_argument("--snapshot", required=True)
    return parser


def _run(args) -> int:
    records = run_scenario(load_scenario(args.scenario))
    export(records, args.out, args.format)
    print(f"{len(records)} ticks, final mode {records[-1].mode}; wrote {args.out}")
    return EXIT_OK


def _park(args) -> int:
    clearances = parking_limits(args.gap_x, args.x_pd, args.gap_y, args.width)
    params = SigmoidParams(a=args.a, b=args.b, y_max=args.ymax, K=args.k)
    result = run_parking(clearances, params, args.dt)
    export(result.records, args.out, args.format)
    print(f"settling error {result.settling_error:.9g} m over {len(result.records)} samples; wrote {args.out}")
    return EXIT_OK


def _montecarlo(args) -> int:
    report = monte_carlo(load_scenario(args.scenario), args.runs, args.seed)
    export(report, args.out, args.format)
    print(
        f"{report.runs} runs, {len(report.failures)} failed, "
        f"crash-zone hit rate {report.crash_zone_hit_rate:.3f}; wrote {args.out}"
    )
    return EXIT_DIVERGED if report.failures else EXIT_OK


def _modes(args) -> int:
    snap, thresholds = load_snapshot(args.snapshot)
    print(select_mode(snap, thresholds))
    return EXIT_OK


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    handler = {"run": _run, "park": _park, "montecarlo": _montecarlo, "modes": _modes}[args.command]
    try:
        return handler(args)
    except (SimulationError, FilterDivergenceError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DIVERGED
    except (ValidationError, ExportError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
