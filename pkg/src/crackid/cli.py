"""Command-line interface.

Subcommands::

    crackid solve       --config FILE [--out DIR] [--grid N]
    crackid identify    --config FILE [--seed S] [--events N] [--jobs J] [--out DIR]
    crackid remesh      --config FILE [--seed S] [--jobs J] [--out DIR]
    crackid sweep       --config FILE [--seed S] [--jobs J] [--out DIR]
    crackid sensitivity --config FILE [--seed S] [--jobs J] [--out DIR]
    crackid bench       TARGET [--seed S] [--events N] [--jobs J] [--out DIR]

Results go to files in the output directory (default ``.``); progress (one
line per completed event) goes to standard error. Exit codes: 0 success,
1 configuration/usage error, 2 numerical failure, 3 benchmark comparison
failure.
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import replace
from pathlib import Path

import numpy as np

from . import __version__
from .beam import BeamProblem, CrackSet, DegenerateBeamError, deflection_profile
from .bench import bench_targets, run_bench
from .config import ConfigError, load_config
from .ga import run_events
from .inverse import Scenario
from .oracle import SingularBeamSystemError
from .remesh import iterate_identify
from .report import (
    scenario_report,
    write_csv,
    write_history_csv,
    write_report,
)
from .seeding import derive_seed
from .sensitivity import sensitivity_curve, sweep_measurement_position

EXIT_OK = 0
EXIT_CONFIG = 1
EXIT_NUMERICAL = 2
EXIT_BENCH = 3


def _progress(label):
    def callback(index, result):
        print(f"{label}: event {index + 1} done, fitness {result.best_fitness:.6f}",
              file=sys.stderr)
    return callback


def _load(args):
    config = load_config(args.config)
    ga = config.ga
    if args.seed is not None:
        ga = replace(ga, seed=args.seed)
    if getattr(args, "events", None) is not None:
        ga = replace(ga, events=args.events)
    return replace(config, ga=ga)


def cmd_solve(args) -> int:
    config = _load(args)
    if not config.simulation_mode:
        raise ConfigError("solve requires a simulation-mode configuration (damage.cracks)")
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    problem = BeamProblem(config.boundary, config.true_cracks, config.load)
    grid = [i / (args.grid - 1) for i in range(args.grid)]
    rows = [[x, u] for x, u in zip(grid, deflection_profile(problem, grid))]
    write_csv(out / "deflection.csv", ["position", "deflection"], rows)
    meas = config.clean_measurements()
    write_csv(
        out / "measurements.csv",
        ["position", "deflection"],
        [[m.position, m.value] for m in meas],
    )
    print(f"wrote {out / 'deflection.csv'} and {out / 'measurements.csv'}")
    return EXIT_OK


def cmd_identify(args) -> int:
    config = _load(args)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    scenario = config.build_scenario()
    stats = run_events(
        scenario,
        config.ga,
        reference=config.true_cracks,
        jobs=args.jobs,
        on_event=_progress("identify"),
    )
    report = scenario_report(
        stats, scenario.mesh, config.raw, config.ga.seed, truth=config.true_cracks
    )
    write_report(out / "report.json", report)
    write_history_csv(out / "history.csv", stats)
    print(f"wrote {out / 'report.json'} and {out / 'history.csv'}")
    return EXIT_OK


def cmd_remesh(args) -> int:
    config = _load(args)
    if config.remesh is None:
        raise ConfigError("remesh requires a remesh block in the configuration")
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    scenario = config.build_scenario()
    trace = iterate_identify(scenario, config.remesh, config.ga, jobs=args.jobs)
    rows = []
    for i, step in enumerate(trace):
        for ci, (pos, lam) in enumerate(step.cracks):
            rows.append([i + 1, step.spacing, step.delta_lambda, ci + 1, pos, lam])
    write_csv(
        out / "remesh.csv",
        ["iteration", "position_step", "intensity_step", "crack",
         "mean_position", "mean_intensity"],
        rows,
    )
    final = trace[-1]
    report = scenario_report(
        final.run, _final_mesh(scenario, trace),
        config.raw, config.ga.seed, truth=config.true_cracks,
        extra={"refinement": [
            {"iteration": i + 1, "position_step": s.spacing,
             "intensity_step": s.delta_lambda,
             "cracks": [{"position": p, "intensity": l} for p, l in s.cracks]}
            for i, s in enumerate(trace)
        ]},
    )
    write_report(out / "report.json", report)
    print(f"wrote {out / 'remesh.csv'} and {out / 'report.json'}")
    return EXIT_OK


def _final_mesh(scenario: Scenario, trace):
    """Mesh of the final refinement iteration, replayed deterministically."""
    from .remesh import refine_mesh

    mesh = scenario.mesh
    for step in trace[:-1]:
        mesh = refine_mesh(mesh, step.cracks)
    return mesh


def cmd_sweep(args) -> int:
    config = _load(args)
    if config.sweep is None:
        raise ConfigError("sweep requires a sweep block in the configuration")
    if not config.simulation_mode:
        raise ConfigError("sweep requires a simulation-mode configuration")
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    points = sweep_measurement_position(
        config.boundary, config.load, config.mesh, config.true_cracks,
        config.sweep.fixed_position, config.sweep.varying_positions,
        config.ga, events_per_point=config.sweep.events_per_point, jobs=args.jobs,
    )
    rows = [
        [p.varying_position, p.mean_position, p.std_position,
         p.mean_intensity, p.std_intensity, p.matched_events]
        for p in points
    ]
    write_csv(
        out / "sweep.csv",
        ["varying_position", "mean_position", "std_position",
         "mean_intensity", "std_intensity", "matched_events"],
        rows,
    )
    print(f"wrote {out / 'sweep.csv'}")
    return EXIT_OK


def cmd_sensitivity(args) -> int:
    config = _load(args)
    if config.sensitivity is None:
        raise ConfigError("sensitivity requires a sensitivity block in the configuration")
    if not config.simulation_mode:
        raise ConfigError("sensitivity requires a simulation-mode configuration")
    if config.remesh is None:
        raise ConfigError("sensitivity requires a remesh block (identification pipeline)")
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    curve = sensitivity_curve(
        config.boundary, config.load, config.mesh,
        config.measurement_positions, config.true_cracks,
        config.sensitivity.epsilons, config.sensitivity.realizations,
        config.ga, config.remesh, jobs=args.jobs,
    )
    rows = [
        [p.epsilon, p.eta_position, p.eta_intensity, p.mean_position, p.mean_intensity]
        for p in curve
    ]
    write_csv(
        out / "sensitivity.csv",
        ["epsilon", "eta_position", "eta_intensity", "mean_position", "mean_intensity"],
        rows,
    )
    print(f"wrote {out / 'sensitivity.csv'}")
    return EXIT_OK


def cmd_bench(args) -> int:
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    result = run_bench(args.target, seed=args.seed, events=args.events, jobs=args.jobs)
    path = out / f"bench_{result.target}.csv"
    write_csv(path, result.header, result.rows)
    status = "pass" if result.passed else "FAIL"
    print(f"{result.target}: {status} ({path})")
    return EXIT_OK if result.passed else EXIT_BENCH


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="crackid",
        description="Static crack identification for Euler-Bernoulli beams",
    )
    parser.add_argument("--version", action="version", version=f"crackid {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, events=True):
        p.add_argument("--config", required=True, help="YAML scenario configuration")
        p.add_argument("--seed", type=int, default=None, help="override the master seed")
        if events:
            p.add_argument("--events", type=int, default=None,
                           help="override the number of independent events")
        p.add_argument("--jobs", type=int, default=1,
                       help="worker processes for independent events")
        p.add_argument("--out", default=".", help="output directory")

    p_solve = sub.add_parser("solve", help="evaluate the forward problem to CSV")
    p_solve.add_argument("--config", required=True)
    p_solve.add_argument("--seed", type=int, default=None)
    p_solve.add_argument("--grid", type=int, default=101,
                         help="number of evaluation points on [0, 1]")
    p_solve.add_argument("--out", default=".")
    p_solve.set_defaults(func=cmd_solve)

    p_id = sub.add_parser("identify", help="run the identification pipeline")
    common(p_id)
    p_id.set_defaults(func=cmd_identify)

    p_rm = sub.add_parser("remesh", help="identify with iterative mesh refinement")
    common(p_rm, events=False)
    p_rm.set_defaults(func=cmd_remesh)

    p_sw = sub.add_parser("sweep", help="sweep one measurement position")
    common(p_sw, events=False)
    p_sw.set_defaults(func=cmd_sweep)

    p_se = sub.add_parser("sensitivity", help="noise-amplitude sensitivity study")
    common(p_se, events=False)
    p_se.set_defaults(func=cmd_sensitivity)

    p_be = sub.add_parser("bench", help="reproduce a published table or figure")
    p_be.add_argument("target", choices=bench_targets())
    p_be.add_argument("--seed", type=int, default=None)
    p_be.add_argument("--events", type=int, default=None)
    p_be.add_argument("--jobs", type=int, default=1)
    p_be.add_argument("--out", default=".")
    p_be.set_defaults(func=cmd_bench)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (DegenerateBeamError, SingularBeamSystemError, np.linalg.LinAlgError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL


if __name__ == "__main__":
    sys.exit(main())
