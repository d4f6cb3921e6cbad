"""Bench figures: parameter sweeps written as CSV tables."""

from __future__ import annotations

from collections.abc import Callable
import csv
from dataclasses import dataclass, field
import logging
import math
import time
from typing import Any, TextIO

import numpy as np

from .colocated import solve_colocated, solve_equal_leftover
from .const import (
    BENCH_BATTERY_RANGE,
    BENCH_EPSILONS,
    BENCH_KAPPA_INSTANCES,
    BENCH_KAPPA_LENGTH,
    BENCH_KAPPA_N,
    BENCH_KAPPAS,
    BENCH_LENGTH,
    BENCH_N_MAX,
    BENCH_N_MIN,
    BENCH_NFZ,
    BENCH_NFZ_H_STAR,
    BENCH_POINT_TIMEOUT,
    BENCH_SIZES,
    BENCH_SWEEP_N,
    BENCH_WORKERS,
    DEFAULT_BATTERY,
    DEFAULT_EPSILON,
)
from .coordinator import BenchCoordinator, Row
from .deploy3d import solve_3d
from .linedeploy import solve_line
from .model import (
    CoverageModel,
    InfeasibleError,
    Nfz,
    Scenario,
    Scenario3d,
    SolverSettings,
    UavSpec,
)
from .permheur import solve_kappa

_LOGGER = logging.getLogger(__name__)


@dataclass(frozen=True)
class BenchOptions:
    """Knobs shared by every figure."""

    n_max: int = BENCH_N_MAX
    n: int = BENCH_SWEEP_N
    seed: int = 0
    epsilon: float = DEFAULT_EPSILON
    workers: int = BENCH_WORKERS
    timeout: float = BENCH_POINT_TIMEOUT
    settings: SolverSettings = field(default_factory=SolverSettings)


@dataclass(frozen=True)
class BenchFigureDescription:
    """Describes one bench figure."""

    key: str
    columns: tuple[str, ...]
    points_fn: Callable[[BenchOptions], list[Any]]
    row_fn: Callable[[BenchOptions, Any], Row]
    concurrent: bool = True


def _fleet(n: int, x: float, battery: float = DEFAULT_BATTERY) -> tuple[UavSpec, ...]:
    return tuple(UavSpec(id=i, x=x, battery=battery) for i in range(n))


def _bhat_or_nan(solve: Callable[[], float]) -> float:
    try:
        return solve()
    except InfeasibleError:
        return math.nan


def nfz_row(options: BenchOptions, n: int) -> Row:
    """Colocated leftover with and without the central no-fly zone."""
    model = CoverageModel(h_star=BENCH_NFZ_H_STAR)
    plain = Scenario(BENCH_LENGTH, (), _fleet(n, 0.0), model)
    zoned = Scenario(BENCH_LENGTH, (Nfz(*BENCH_NFZ),), _fleet(n, 0.0), model)
    return {
        "n": n,
        "bhat_no_nfz": _bhat_or_nan(
            lambda: solve_equal_leftover(plain, settings=options.settings).bhat
        ),
        "bhat_nfz": _bhat_or_nan(
            lambda: solve_colocated(zoned, options.settings).bhat
        ),
    }


def epsilon_row(options: BenchOptions, point: tuple[float, int]) -> Row:
    """Line search accuracy against probes and wall time."""
    epsilon, n = point
    uavs = tuple(
        UavSpec(id=i, x=(i + 0.5) * BENCH_LENGTH / n, battery=DEFAULT_BATTERY)
        for i in range(n)
    )
    started = time.perf_counter()
    report = solve_line(
        Scenario(BENCH_LENGTH, (), uavs), epsilon, settings=options.settings
    )
    return {
        "epsilon": epsilon,
        "n": n,
        "bhat": report.bhat,
        "probes": report.iterations,
        "wall_ms": (time.perf_counter() - started) * 1000,
    }


def kappa_instance(seed: int, instance: int) -> Scenario:
    """Return the seeded mixed-battery instance used by the kappa figure."""
    rng = np.random.default_rng([seed, instance])
    positions = np.sort(rng.uniform(0.0, BENCH_KAPPA_LENGTH, BENCH_KAPPA_N))
    batteries = rng.uniform(*BENCH_BATTERY_RANGE, BENCH_KAPPA_N)
    uavs = tuple(
        UavSpec(id=i, x=float(x), battery=float(b))
        for i, (x, b) in enumerate(zip(positions, batteries))
    )
    return Scenario(BENCH_KAPPA_LENGTH, (), uavs)


def kappa_row(options: BenchOptions, point: tuple[int, int]) -> Row:
    """Best leftover found with at most kappa reordered UAVs."""
    instance, kappa = point
    scenario = kappa_instance(options.seed, instance)
    try:
        report = solve_kappa(scenario, kappa, options.epsilon, options.settings)
    except InfeasibleError:
        return {"instance": instance, "kappa": kappa, "bhat": math.nan, "orders": 0}
    return {
        "instance": instance,
        "kappa": kappa,
        "bhat": report.bhat,
        "orders": report.diagnostics["orders"],
    }


def split_scenario(n: int, left_count: int) -> Scenario3d:
    """Return the two-station scenario with left_count UAVs at the left station."""
    left = (0.0, 0.0)
    right = (BENCH_LENGTH, 0.0)
    return Scenario3d(
        length=BENCH_LENGTH,
        station_left=left,
        station_right=right,
        left_uavs=tuple(
            UavSpec(id=i, x=left[0], y=left[1], battery=DEFAULT_BATTERY)
            for i in range(left_count)
        ),
        right_uavs=tuple(
            UavSpec(id=i, x=right[0], y=right[1], battery=DEFAULT_BATTERY)
            for i in range(left_count, n)
        ),
    )


def split_row(options: BenchOptions, left_count: int) -> Row:
    """Two-station leftover for one split of the fleet."""
    scenario = split_scenario(options.n, left_count)
    return {
        "left_count": left_count,
        "bhat": _bhat_or_nan(
            lambda: solve_3d(scenario, options.epsilon, options.settings).bhat
        ),
    }


FIGURES: tuple[BenchFigureDescription, ...] = (
    BenchFigureDescription(
        key="7",
        columns=("n", "bhat_no_nfz", "bhat_nfz"),
        points_fn=lambda options: list(range(BENCH_N_MIN, options.n_max + 1)),
        row_fn=nfz_row,
    ),
    BenchFigureDescription(
        key="8",
        columns=("epsilon", "n", "bhat", "probes", "wall_ms"),
        points_fn=lambda options: [
            (epsilon, n) for epsilon in BENCH_EPSILONS for n in BENCH_SIZES
        ],
        row_fn=epsilon_row,
        concurrent=False,
    ),
    BenchFigureDescription(
        key="9",
        columns=("instance", "kappa", "bhat", "orders"),
        points_fn=lambda options: [
            (instance, kappa)
            for instance in range(BENCH_KAPPA_INSTANCES)
            for kappa in BENCH_KAPPAS
        ],
        row_fn=kappa_row,
    ),
    BenchFigureDescription(
        key="10",
        columns=("left_count", "bhat"),
        points_fn=lambda options: list(range(1, options.n)),
        row_fn=split_row,
    ),
)

FIGURES_BY_KEY = {figure.key: figure for figure in FIGURES}


def run_figure(
    figure: BenchFigureDescription, options: BenchOptions = BenchOptions()
) -> list[Row]:
    """Evaluate every point of a figure."""
    coordinator = BenchCoordinator(
        f"figure-{figure.key}",
        concurrency=options.workers if figure.concurrent else 1,
        timeout=options.timeout,
    )
    points = figure.points_fn(options)
    _LOGGER.info("Running figure %s over %s points", figure.key, len(points))
    return coordinator.run(points, lambda point: figure.row_fn(options, point))


def write_csv(
    figure: BenchFigureDescription, rows: list[Row], stream: TextIO
) -> None:
    """Write rows as CSV with the figure's header."""
    writer = csv.DictWriter(stream, fieldnames=figure.columns, lineterminator="\n")
    writer.writeheader()
    writer.writerows(rows)

