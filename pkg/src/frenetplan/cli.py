"""Command-line entry point.

    frenetplan run --config <path-or-bundled-name> [--mode baseline|repaired|both]
                   [--seed N] [--out DIR] [--svg]

Exit status: 0 when every executed mode reaches the goal, 1 on config or
I/O errors, 2 when planning finds no feasible candidate, 3 when the tick
limit expires before the goal.
"""

from __future__ import annotations

import argparse
import os
import sys
import time
from typing import List, Optional

from .config import ConfigError, apply_overrides, load_config
from .output import write_summary, write_svg_frames, write_trace_csv, \
    write_trace_json
from .simulate import InfeasibleCorridorError, NoFeasibleCandidate, \
    run_simulation

EXIT_OK = 0
EXIT_CONFIG = 1
EXIT_INFEASIBLE = 2
EXIT_TICK_LIMIT = 3


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="frenetplan",
        description="Corridor trajectory planning over a reference curve.")
    sub = parser.add_subparsers(dest="command", required=True)
    run = sub.add_parser("run", help="execute a scenario and emit traces")
    run.add_argument("--config", required=True,
                     help="YAML config path, or a bundled scenario name "
                          "(straight, u_road, u_road_wide, fig3b)")
    run.add_argument("--mode", choices=("baseline", "repaired", "both"),
                     default=None, help="override the config's mode")
    run.add_argument("--seed", type=int, default=None,
                     help="override the base seed")
    run.add_argument("--out", default=None, help="override the output dir")
    run.add_argument("--svg", action="store_true",
                     help="also write per-tick SVG frames")
    return parser


def _print_summary(traces) -> None:
    for trace in traces:
        status = "goal reached" if trace.goal_reached else "tick limit"
        print("%-9s %s in %d ticks (final station %.3f); "
              "anomalous selected ticks: %d (reversal %d, "
              "self-intersection %d across all candidates)"
              % (trace.mode, status, trace.n_ticks, trace.final_station,
                 trace.anomalous_selected_count,
                 trace.diagnostics_total("reversal"),
                 trace.diagnostics_total("self_intersection")))


def run_command(args) -> int:
    try:
        config = load_config(args.config)
        config = apply_overrides(config, mode=args.mode, seed=args.seed,
                                 out_dir=args.out,
                                 svg=args.svg or None)
    except ConfigError as exc:
        print("config error: %s" % exc, file=sys.stderr)
        return EXIT_CONFIG

    scenario = config.scenario
    scenario.base_seed = config.base_seed
    try:
        polyline = scenario.polyline()
    except ValueError as exc:
        print("config error: scenario: %s" % exc, file=sys.stderr)
        return EXIT_CONFIG

    traces = []
    runtimes = {}
    try:
        for mode in config.modes:
            start = time.perf_counter()
            trace = run_simulation(scenario, use_repair=(mode == "repaired"))
            runtimes[mode] = time.perf_counter() - start
            traces.append(trace)
    except InfeasibleCorridorError as exc:
        print("infeasible corridor: %s" % exc, file=sys.stderr)
        return EXIT_INFEASIBLE
    except NoFeasibleCandidate as exc:
        print("no feasible candidate: %s" % exc, file=sys.stderr)
        return EXIT_INFEASIBLE

    try:
        os.makedirs(config.out_dir, exist_ok=True)
        if config.emit.trace_csv:
            write_trace_csv(os.path.join(config.out_dir, "trace.csv"), traces)
        if config.emit.trace_json:
            write_trace_json(os.path.join(config.out_dir, "trace.json"),
                             traces)
        write_summary(os.path.join(config.out_dir, "summary.json"), traces,
                      runtimes)
        if config.emit.svg_frames:
            for trace in traces:
                subdir = trace.mode if len(traces) > 1 else None
                write_svg_frames(config.out_dir, scenario, polyline, trace,
                                 subdir=subdir)
    except OSError as exc:
        print("output error: %s" % exc, file=sys.stderr)
        return EXIT_CONFIG

    _print_summary(traces)
    if all(trace.goal_reached for trace in traces):
        return EXIT_OK
    return EXIT_TICK_LIMIT


def main(argv: Optional[List[str]] = None) -> int:
    args = _build_parser().parse_args(argv)
    if args.command == "run":
        return run_command(args)
    raise AssertionError("unreachable")  # pragma: no cover


if __name__ == "__main__":
    sys.exit(main())
