"""Greedy feasibility sweeps and grid search for UAVs on a line."""

from __future__ import annotations

from bisect import bisect_left
from collections.abc import Callable, Sequence
from dataclasses import dataclass
import logging
import math
import time

from scipy.optimize import minimize_scalar

from .const import DEFAULT_EPSILON, MODE_LINE, TOUCH_PENALTY
from .model import (
    DEFAULT_SETTINGS,
    CoverageModel,
    DeploymentError,
    InfeasibleError,
    InvalidScenario,
    Nfz,
    Placement,
    Scenario,
    SolveReport,
    SolverSettings,
    UavSpec,
    UncoverableError,
    ground,
    inverse_radius,
    min_leftover,
    nfz_containing,
    place,
    radius,
)

_LOGGER = logging.getLogger(__name__)


@dataclass(frozen=True)
class Reach:
    """Where a UAV goes to push the covered prefix furthest."""

    x_final: float
    altitude: float
    frontier: float


@dataclass(frozen=True)
class FeasibilityOutcome:
    """Result of checking one target leftover."""

    feasible: bool
    placements: tuple[Placement, ...]
    frontier: float


@dataclass(frozen=True)
class SearchGrid:
    """Leftover grid {eps*b_low, 2*eps*b_low, ...} up to b_high."""

    b_low: float
    b_high: float
    epsilon: float

    @property
    def step(self) -> float:
        """Spacing between grid points."""
        return self.epsilon * self.b_low

    @property
    def size(self) -> int:
        """Number of grid points."""
        return max(1, math.ceil(self.b_high / self.step))

    def value(self, k: int) -> float:
        """Return grid point k (1-based)."""
        return k * self.step


def reach_window(
    uav: UavSpec, bhat: float, h: float, model: CoverageModel
) -> tuple[float, float]:
    """Return the leftmost and rightmost target points uav can cover at h."""
    budget = (uav.battery - bhat) / model.c
    if budget < h:
        raise EmptyWindowError(
            f"UAV {uav.id} budget {budget} cannot reach altitude {h}"
        )
    span = (budget - h) / model.w + radius(model, h)
    return uav.x - span, uav.x + span


def max_reach(
    uav: UavSpec,
    bhat: float,
    frontier: float,
    nfzs: Sequence[Nfz],
    model: CoverageModel,
    settings: SolverSettings = DEFAULT_SETTINGS,
) -> Reach | None:
    """Return the placement extending the frontier furthest, or None to skip."""
    budget = (uav.battery - bhat) / model.c
    h_max = min(model.h_star, budget)
    if h_max <= 0:
        return None

    def evaluate(h: float) -> tuple[float, float, float]:
        horizontal = (budget - h) / model.w
        r = radius(model, h)
        x_final = min(uav.x + horizontal, frontier + r)
        violation = max(0.0, uav.x - horizontal - r - frontier)
        return max(x_final, uav.x - horizontal), r, violation

    def objective(h: float) -> float:
        x_final, r, violation = evaluate(h)
        return -(x_final + r - TOUCH_PENALTY * violation)

    result = minimize_scalar(
        objective,
        bounds=(0.0, h_max),
        method="bounded",
        options={"xatol": settings.reach_tol},
    )
    h = min((result.x, h_max), key=objective)
    x_final, r, violation = evaluate(h)

    if violation > settings.cover_tol or x_final + r <= frontier + settings.cover_tol:
        return None

    zone = nfz_containing(x_final, nfzs)
    if zone is None:
        return Reach(x_final, h, x_final + r)

    candidates = [
        reach
        for edge in (zone.left, zone.right)
        if (reach := pin_reach(uav, bhat, edge, frontier, model, settings))
    ]
    if not candidates:
        _LOGGER.debug("UAV %s lands in %s with no usable edge", uav.id, zone)
        return None
    return max(candidates, key=lambda reach: reach.frontier)


def pin_reach(
    uav: UavSpec,
    bhat: float,
    x_final: float,
    frontier: float,
    model: CoverageModel,
    settings: SolverSettings = DEFAULT_SETTINGS,
) -> Reach | None:
    """Place uav at x_final as high as its budget allows, if it touches the frontier."""
    budget = (uav.battery - bhat) / model.c
    h = min(model.h_star, budget - model.w * abs(x_final - uav.x))
    if h <= 0:
        return None
    r = radius(model, h)
    if x_final - r > frontier + settings.cover_tol:
        return None
    if x_final + r <= frontier + settings.cover_tol:
        return None
    return Reach(x_final, h, x_final + r)


def sweep(
    uavs: Sequence[UavSpec],
    bhat: float,
    start: float,
    end: float,
    nfzs: Sequence[Nfz],
    model: CoverageModel,
    settings: SolverSettings = DEFAULT_SETTINGS,
) -> tuple[float, list[Placement]]:
    """Deploy uavs in order from start until the frontier reaches end."""
    frontier = start
    placements: list[Placement] = []

    for uav in uavs:
        if frontier >= end - settings.cover_tol or uav.battery <= bhat:
            placements.append(ground(uav))
            continue
        reach = max_reach(uav, bhat, frontier, nfzs, model, settings)
        if reach is None:
            placements.append(ground(uav))
            continue
        placements.append(place(model, uav, reach.x_final, uav.y, reach.altitude))
        frontier = reach.frontier

    return frontier, placements


def base_order(uavs: Sequence[UavSpec]) -> list[UavSpec]:
    """Order UAVs by initial position, then battery, then id."""
    return sorted(uavs, key=lambda uav: (uav.x, uav.battery, uav.id))


def check_feasible(
    scenario: Scenario,
    bhat: float,
    order: Sequence[UavSpec] | None = None,
    settings: SolverSettings = DEFAULT_SETTINGS,
) -> FeasibilityOutcome:
    """Check whether every UAV can keep bhat while the swarm covers [0, L]."""
    if any(uav.battery < bhat for uav in scenario.uavs):
        return FeasibilityOutcome(False, (), 0.0)

    uavs = base_order(scenario.uavs) if order is None else order
    frontier, placements = sweep(
        uavs,
        bhat,
        0.0,
        scenario.length,
        scenario.nfzs,
        scenario.model,
        settings,
    )
    if frontier < scenario.length - settings.cover_tol:
        return FeasibilityOutcome(False, (), frontier)
    return FeasibilityOutcome(True, tuple(placements), frontier)


def search_bounds(
    scenario: Scenario,
    epsilon: float = DEFAULT_EPSILON,
    settings: SolverSettings = DEFAULT_SETTINGS,
) -> SearchGrid:
    """Return the leftover search grid for scenario."""
    check_epsilon(epsilon)
    model = scenario.model
    battery = max(uav.battery for uav in scenario.uavs)
    length = scenario.length

    if length <= 0:
        b_high = battery
    else:
        try:
            b_high = battery - model.c * inverse_radius(
                model, length / (2 * len(scenario.uavs))
            )
        except UncoverableError:
            b_high = battery - model.c * model.h_star
    b_high = min(battery, max(settings.b_low_floor, b_high))

    b_low = settings.b_low_floor
    for uav in scenario.uavs:
        reach = max(abs(uav.x), abs(length - uav.x))
        try:
            bound = uav.battery - model.c * (
                model.w * reach + inverse_radius(model, reach)
            )
        except UncoverableError:
            continue
        b_low = max(b_low, bound)

    return SearchGrid(b_low=min(b_low, b_high), b_high=b_high, epsilon=epsilon)


def grid_search(
    scenario: Scenario,
    grid: SearchGrid,
    order: Sequence[UavSpec],
    settings: SolverSettings = DEFAULT_SETTINGS,
) -> tuple[int, FeasibilityOutcome, int]:
    """Return the largest feasible grid index, its outcome and the probe count."""
    return search_grid(
        grid, lambda bhat: check_feasible(scenario, bhat, order, settings)
    )


def search_grid(
    grid: SearchGrid, check: Callable[[float], FeasibilityOutcome]
) -> tuple[int, FeasibilityOutcome, int]:
    """Binary search the grid with a monotone feasibility check."""
    probes = 0

    def infeasible(k: int) -> bool:
        nonlocal probes
        probes += 1
        outcome = check(grid.value(k))
        _LOGGER.debug("Probe %s (%.6f Wh) feasible=%s", k, grid.value(k), outcome.feasible)
        return not outcome.feasible

    k = bisect_left(range(1, grid.size + 1), True, key=infeasible)
    if k == 0:
        raise InfeasibleError(
            f"Even {grid.value(1):.6f} Wh leftover cannot cover the target"
        )
    return k, check(grid.value(k)), probes


def solve_line(
    scenario: Scenario,
    epsilon: float = DEFAULT_EPSILON,
    order: Sequence[UavSpec] | None = None,
    grid: SearchGrid | None = None,
    settings: SolverSettings = DEFAULT_SETTINGS,
) -> SolveReport:
    """Approximate the best min-leftover deployment within relative error epsilon."""
    check_epsilon(epsilon)
    started = time.perf_counter()
    uavs = base_order(scenario.uavs) if order is None else list(order)

    if scenario.length <= 0:
        placements = tuple(ground(uav) for uav in uavs)
        return SolveReport(
            placements=placements,
            bhat=min_leftover(placements),
            algorithm=MODE_LINE,
            epsilon=epsilon,
            runtime=time.perf_counter() - started,
        )

    grid = grid or search_bounds(scenario, epsilon, settings)
    k, outcome, probes = grid_search(scenario, grid, uavs, settings)
    bhat = min_leftover(outcome.placements)

    _LOGGER.info(
        "Line search settled on grid point %s/%s, min leftover %.6f Wh after %s probes",
        k,
        grid.size,
        bhat,
        probes,
    )

    return SolveReport(
        placements=outcome.placements,
        bhat=bhat,
        algorithm=MODE_LINE,
        epsilon=epsilon,
        iterations=probes,
        runtime=time.perf_counter() - started,
        diagnostics={
            "grid_bhat": grid.value(k),
            "b_low": grid.b_low,
            "b_high": grid.b_high,
            "grid_size": grid.size,
            "probes": probes,
        },
    )


def check_epsilon(epsilon: float) -> None:
    """Reject relative errors outside (0, 1)."""
    if not 0 < epsilon < 1:
        raise InvalidScenario(f"epsilon must lie in (0, 1), got {epsilon}")


class EmptyWindowError(DeploymentError):
    """Error to indicate a UAV cannot even ascend to the requested altitude."""
