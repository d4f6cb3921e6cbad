"""Command line entry point."""

from __future__ import annotations

import argparse
from collections.abc import Sequence
import dataclasses
import json
import logging
from pathlib import Path
import sys
from typing import Any

import colorlog

from . import const
from .bench import FIGURES_BY_KEY, BenchOptions, run_figure, write_csv
from .colocated import solve_colocated
from .const import (
    AIRFRAME_PRESETS,
    AUDIT_TOL,
    B_LOW_FLOOR,
    BENCH_N_MAX,
    BENCH_SWEEP_N,
    BENCH_WORKERS,
    BHAT_TOL,
    COVER_TOL,
    DOMAIN,
    EXIT_INFEASIBLE,
    EXIT_INPUT_ERROR,
    EXIT_OK,
    EXIT_TOLERANCE,
    EXIT_UNKNOWN,
    H_TOL,
    MAX_ITER,
    REACH_TOL,
)
from .deploy3d import check_feasible_3d, solve_3d
from .linedeploy import check_feasible, solve_line
from .model import (
    InfeasibleError,
    InstanceTooLarge,
    InvalidScenario,
    Placement,
    Scenario3d,
    SolveReport,
    SolverSettings,
    ToleranceError,
    audit,
)
from .oracle import GridSpec, brute_force
from .permheur import solve_kappa
from .schema import ScenarioFile, parse_scenario, serialize

_LOGGER = logging.getLogger(__name__)

_HERE = Path(__file__).parent
STRINGS = json.loads((_HERE / "strings.json").read_text())["cli"]
VERSION = json.loads((_HERE / "manifest.json").read_text())["version"]


def build_parser() -> argparse.ArgumentParser:
    """Return the argument parser for every command."""
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--epsilon", type=float, help="relative error of the grid search")
    common.add_argument("--kappa", type=int, help="reordered UAVs for kappa mode")
    common.add_argument("--out", type=Path, help="write the result here instead of stdout")
    common.add_argument(
        "--airframe", choices=sorted(AIRFRAME_PRESETS), help="energy coefficient preset"
    )
    common.add_argument("--h-tol", type=float, default=H_TOL)
    common.add_argument("--bhat-tol", type=float, default=BHAT_TOL)
    common.add_argument("--reach-tol", type=float, default=REACH_TOL)
    common.add_argument("--cover-tol", type=float, default=COVER_TOL)
    common.add_argument("--audit-tol", type=float, default=AUDIT_TOL)
    common.add_argument("--max-iter", type=int, default=MAX_ITER)
    common.add_argument("--b-low-floor", type=float, default=B_LOW_FLOOR)
    verbosity = common.add_mutually_exclusive_group()
    verbosity.add_argument("-v", "--verbose", action="store_true")
    verbosity.add_argument("-q", "--quiet", action="store_true")

    parser = argparse.ArgumentParser(
        prog=DOMAIN, description="Energy-optimal UAV swarm deployment"
    )
    parser.add_argument("--version", action="version", version=VERSION)
    commands = parser.add_subparsers(dest="command", required=True)

    solve = commands.add_parser("solve", parents=[common], help="solve a scenario file")
    solve.add_argument("scenario", type=Path)
    solve.set_defaults(func=_cmd_solve)

    check = commands.add_parser(
        "check", parents=[common], help="check one target leftover"
    )
    check.add_argument("scenario", type=Path)
    check.add_argument("--leftover", type=float, required=True)
    check.set_defaults(func=_cmd_check)

    oracle = commands.add_parser(
        "oracle", parents=[common], help="exhaustive grid search of a small scenario"
    )
    oracle.add_argument("scenario", type=Path)
    oracle.add_argument("--grid-dx", type=float)
    oracle.add_argument("--grid-dh", type=float)
    oracle.set_defaults(func=_cmd_oracle)

    bench = commands.add_parser("bench", parents=[common], help="write a bench figure")
    bench.add_argument("--figure", choices=["7", "8", "9"], required=True)
    bench.add_argument("--n-max", type=int, default=BENCH_N_MAX)
    bench.add_argument("--seed", type=int, default=0)
    bench.add_argument("--workers", type=int, default=BENCH_WORKERS)
    bench.set_defaults(func=_cmd_bench)

    sweep = commands.add_parser(
        "sweep", parents=[common], help="sweep the two-station fleet split"
    )
    sweep.add_argument("--figure", choices=["10"], default="10")
    sweep.add_argument("--n", type=int, default=BENCH_SWEEP_N)
    sweep.add_argument("--workers", type=int, default=BENCH_WORKERS)
    sweep.set_defaults(func=_cmd_bench, n_max=BENCH_SWEEP_N, seed=0)

    return parser


def main(argv: Sequence[str] | None = None) -> int:
    """Run the command line and return the exit code."""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as err:
        return EXIT_OK if err.code in (0, None) else EXIT_INPUT_ERROR

    _setup_logging(args)
    try:
        return args.func(args)
    except InfeasibleError as err:
        _LOGGER.error(STRINGS["error"]["infeasible"].format(detail=err))
        return EXIT_INFEASIBLE
    except (InvalidScenario, InstanceTooLarge, OSError) as err:
        _LOGGER.error(STRINGS["error"]["invalid_scenario"].format(detail=err))
        return EXIT_INPUT_ERROR
    except ToleranceError as err:
        _LOGGER.error(STRINGS["error"]["tolerance"].format(detail=err))
        return EXIT_TOLERANCE
    except Exception as err:
        _LOGGER.exception(STRINGS["error"]["unknown"].format(detail=err))
        return EXIT_UNKNOWN


def _setup_logging(args: argparse.Namespace) -> None:
    handler = colorlog.StreamHandler()
    handler.setFormatter(
        colorlog.ColoredFormatter(
            "%(log_color)s%(levelname)-8s%(reset)s %(name)s: %(message)s"
        )
    )
    logger = logging.getLogger(DOMAIN)
    logger.handlers = [handler]
    if args.verbose:
        logger.setLevel(logging.DEBUG)
    elif args.quiet:
        logger.setLevel(logging.WARNING)
    else:
        logger.setLevel(logging.INFO)


def _settings(args: argparse.Namespace) -> SolverSettings:
    return SolverSettings(
        h_tol=args.h_tol,
        bhat_tol=args.bhat_tol,
        reach_tol=args.reach_tol,
        cover_tol=args.cover_tol,
        audit_tol=args.audit_tol,
        max_iter=args.max_iter,
        b_low_floor=args.b_low_floor,
    )


def _load(args: argparse.Namespace) -> ScenarioFile:
    scenario_file = parse_scenario(args.scenario.read_text())
    if args.airframe is None:
        return scenario_file
    scenario = scenario_file.scenario
    model = dataclasses.replace(scenario.model, c=AIRFRAME_PRESETS[args.airframe])
    return dataclasses.replace(
        scenario_file, scenario=dataclasses.replace(scenario, model=model)
    )


def _solve(scenario_file: ScenarioFile, args: argparse.Namespace) -> SolveReport:
    settings = _settings(args)
    scenario = scenario_file.scenario
    options = scenario_file.options
    epsilon = options.epsilon if args.epsilon is None else args.epsilon
    kappa = options.kappa if args.kappa is None else args.kappa

    match scenario_file.mode:
        case const.MODE_COLOCATED:
            return solve_colocated(scenario, settings)
        case const.MODE_LINE:
            if len({uav.battery for uav in scenario.uavs}) > 1:
                _LOGGER.warning(STRINGS["warning"]["unequal_batteries"])
                return solve_kappa(scenario, 0, epsilon, settings)
            return solve_line(scenario, epsilon, settings=settings)
        case const.MODE_KAPPA:
            return solve_kappa(scenario, kappa, epsilon, settings)
        case const.MODE_3D:
            return solve_3d(scenario, epsilon, settings)
        case const.MODE_ORACLE:
            return brute_force(scenario, options.grid, settings)
        case _:
            raise InvalidScenario(f"Unsupported mode {scenario_file.mode}")


def _audit(scenario_file: ScenarioFile, placements: Sequence[Placement], tol: float) -> None:
    scenario = scenario_file.scenario
    audit(
        placements,
        scenario.uavs,
        scenario.length,
        scenario.nfzs,
        scenario.model,
        tol,
    )


def result_payload(report: SolveReport, scenario_file: ScenarioFile) -> dict[str, Any]:
    """Return the result file for a solved scenario."""
    return {
        "version": VERSION,
        "bhat": report.bhat,
        "algorithm": report.algorithm,
        "epsilon": report.epsilon,
        "placements": [placement.as_dict() for placement in report.placements],
        "diagnostics": {
            **report.diagnostics,
            "iterations": report.iterations,
            "runtime_ms": report.runtime * 1000,
        },
        "scenario": serialize(scenario_file),
    }


def _emit(text: str, out: Path | None, what: str) -> None:
    if out is None:
        print(text)
        return
    out.write_text(text + "\n")
    _LOGGER.info(STRINGS["info"]["written"].format(what=what, path=out))


def _cmd_solve(args: argparse.Namespace) -> int:
    scenario_file = _load(args)
    report = _solve(scenario_file, args)
    _audit(scenario_file, report.placements, args.audit_tol)
    _LOGGER.info(
        "%s kept %.6f Wh in %.1f ms", report.algorithm, report.bhat, report.runtime * 1000
    )
    payload = result_payload(report, scenario_file)
    _emit(json.dumps(payload, sort_keys=True, indent=2), args.out, "result")
    return EXIT_OK


def _cmd_oracle(args: argparse.Namespace) -> int:
    scenario_file = _load(args)
    grid = scenario_file.options.grid
    grid = GridSpec(
        dx=grid.dx if args.grid_dx is None else args.grid_dx,
        dh=grid.dh if args.grid_dh is None else args.grid_dh,
    )
    if isinstance(scenario_file.scenario, Scenario3d):
        raise InvalidScenario("The oracle handles line scenarios only")
    report = brute_force(scenario_file.scenario, grid, _settings(args))
    _audit(scenario_file, report.placements, args.audit_tol)
    payload = result_payload(report, scenario_file)
    _emit(json.dumps(payload, sort_keys=True, indent=2), args.out, "oracle result")
    return EXIT_OK


def _cmd_check(args: argparse.Namespace) -> int:
    scenario_file = _load(args)
    scenario = scenario_file.scenario
    settings = _settings(args)
    if isinstance(scenario, Scenario3d):
        outcome = check_feasible_3d(scenario, args.leftover, settings)
    else:
        outcome = check_feasible(scenario, args.leftover, settings=settings)
    if outcome.feasible:
        _audit(scenario_file, outcome.placements, args.audit_tol)

    payload = {
        "version": VERSION,
        "leftover": args.leftover,
        "feasible": outcome.feasible,
        "frontier": outcome.frontier,
        "placements": [placement.as_dict() for placement in outcome.placements],
        "scenario": serialize(scenario_file),
    }
    _emit(json.dumps(payload, sort_keys=True, indent=2), args.out, "check")
    return EXIT_OK if outcome.feasible else EXIT_INFEASIBLE


def _cmd_bench(args: argparse.Namespace) -> int:
    figure = FIGURES_BY_KEY[args.figure]
    options = BenchOptions(
        n_max=args.n_max,
        n=getattr(args, "n", BENCH_SWEEP_N),
        seed=args.seed,
        workers=args.workers,
        settings=_settings(args),
        **({} if args.epsilon is None else {"epsilon": args.epsilon}),
    )
    rows = run_figure(figure, options)
    if args.out is None:
        write_csv(figure, rows, sys.stdout)
    else:
        with args.out.open("w", newline="") as stream:
            write_csv(figure, rows, stream)
        _LOGGER.info(STRINGS["info"]["written"].format(what="CSV", path=args.out))
    return EXIT_OK

