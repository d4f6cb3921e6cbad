"""Two-station deployment with lateral offsets from the target line."""

from __future__ import annotations

from collections.abc import Sequence
from dataclasses import dataclass
import logging
import math
import time

import numpy as np
from scipy.optimize import minimize_scalar

from .const import DEFAULT_EPSILON, MODE_3D, SEED_SAMPLES, TOUCH_PENALTY
from .linedeploy import FeasibilityOutcome, SearchGrid, check_epsilon, search_grid
from .model import (
    DEFAULT_SETTINGS,
    CoverageModel,
    DeploymentError,
    Nfz,
    Scenario3d,
    SolveReport,
    SolverSettings,
    UavSpec,
    ground,
    min_leftover,
    nfz_containing,
    place,
    radius,
)

_LOGGER = logging.getLogger(__name__)


@dataclass(frozen=True)
class ChordCover:
    """A hovering UAV and the stretch of the line its disk cuts."""

    center_x: float
    offset_y: float
    altitude: float
    half_chord: float

    @property
    def frontier(self) -> float:
        """Right end of the covered stretch."""
        return self.center_x + self.half_chord


def chord(model: CoverageModel, h: float, y: float) -> float:
    """Return the half-length of the line inside the disk of a UAV at offset y."""
    r = radius(model, h)
    if abs(y) > r * (1 + 1e-12):
        raise EmptyChordError(f"Offset {y} exceeds the radius {r}")
    return math.sqrt(max(0.0, r * r - y * y))


def reach_window_3d(
    uav: UavSpec,
    station: tuple[float, float],
    bhat: float,
    h: float,
    y: float,
    model: CoverageModel,
) -> tuple[float, float]:
    """Return the leftmost and rightmost line points uav can cover at (h, y)."""
    budget = (uav.battery - bhat) / model.c
    ground_range = (budget - h) / model.w
    lateral = abs(y - station[1])
    if ground_range < lateral:
        raise UnreachableError(
            f"UAV {uav.id} cannot reach offset {y} at altitude {h}"
        )
    span = math.sqrt(ground_range**2 - lateral**2) + chord(model, h, y)
    return station[0] - span, station[0] + span


def max_reach_3d(
    uav: UavSpec,
    station: tuple[float, float],
    bhat: float,
    frontier: float,
    nfzs: Sequence[Nfz],
    model: CoverageModel,
    settings: SolverSettings = DEFAULT_SETTINGS,
) -> ChordCover | None:
    """Return the (h, y') placement pushing the frontier furthest, or None to skip."""
    budget = (uav.battery - bhat) / model.c
    h_max = min(model.h_star, budget)
    if h_max <= 0:
        return None
    x_s, y_s = station

    def lateral_bounds(h: float) -> tuple[float, float] | None:
        ground_range = (budget - h) / model.w
        near = math.copysign(min(abs(y_s), radius(model, h)), y_s)
        low = max(min(0.0, near), y_s - ground_range)
        high = min(max(0.0, near), y_s + ground_range)
        return (low, high) if low <= high else None

    def evaluate(h: float, y: float) -> tuple[float, float, float]:
        ground_range = (budget - h) / model.w
        q = math.sqrt(max(0.0, ground_range**2 - (y - y_s) ** 2))
        half = chord(model, h, y)
        x_final = max(min(x_s + q, frontier + half), x_s - q)
        violation = max(0.0, x_s - q - half - frontier)
        return x_final, half, violation

    def score(h: float, y: float) -> float:
        x_final, half, violation = evaluate(h, y)
        return x_final + half - TOUCH_PENALTY * violation

    def best_lateral(h: float) -> tuple[float, float]:
        bounds = lateral_bounds(h)
        if bounds is None:
            return -math.inf, y_s
        low, high = bounds
        candidates = [low, high]
        if high - low > settings.reach_tol:
            result = minimize_scalar(
                lambda y: -score(h, y),
                bounds=(low, high),
                method="bounded",
                options={"xatol": settings.reach_tol},
            )
            candidates.append(float(result.x))
        y = max(candidates, key=lambda y: score(h, y))
        return score(h, y), y

    def outer(h: float) -> float:
        value, _ = best_lateral(h)
        return -value if math.isfinite(value) else TOUCH_PENALTY * (1 + frontier)

    seeds = np.linspace(h_max / SEED_SAMPLES, h_max, SEED_SAMPLES)
    values = np.array([outer(h) for h in seeds])
    best = int(np.argmin(values))
    low = seeds[best - 1] if best > 0 else 0.0
    high = seeds[min(best + 1, SEED_SAMPLES - 1)]
    result = minimize_scalar(
        outer,
        bounds=(low, high),
        method="bounded",
        options={"xatol": settings.reach_tol},
    )
    h = min((float(result.x), float(seeds[best])), key=outer)

    value, y = best_lateral(h)
    if not math.isfinite(value):
        return None
    x_final, half, violation = evaluate(h, y)
    if violation > settings.cover_tol or x_final + half <= frontier + settings.cover_tol:
        return None

    zone = nfz_containing(x_final, nfzs)
    if zone is None:
        return ChordCover(x_final, y, h, half)

    candidates = [
        cover
        for edge in (zone.left, zone.right)
        if (cover := _pin_3d(budget, station, edge, frontier, model, settings))
    ]
    if not candidates:
        _LOGGER.debug("UAV %s lands in %s with no usable edge", uav.id, zone)
        return None
    return max(candidates, key=lambda cover: cover.frontier)


def _pin_3d(
    budget: float,
    station: tuple[float, float],
    edge: float,
    frontier: float,
    model: CoverageModel,
    settings: SolverSettings,
) -> ChordCover | None:
    """Hover over x = edge with the offset that cuts the widest chord."""
    x_s, y_s = station

    def cover(y: float) -> ChordCover | None:
        h = min(
            model.h_star, budget - model.w * math.hypot(edge - x_s, y - y_s)
        )
        if h <= 0 or abs(y) > radius(model, h):
            return None
        return ChordCover(edge, y, h, chord(model, h, y))

    def objective(y: float) -> float:
        found = cover(y)
        return 0.0 if found is None else -found.half_chord

    candidates = [cover(0.0), cover(y_s)]
    if y_s != 0:
        result = minimize_scalar(
            objective,
            bounds=(min(0.0, y_s), max(0.0, y_s)),
            method="bounded",
            options={"xatol": settings.reach_tol},
        )
        candidates.append(cover(float(result.x)))
    found = [c for c in candidates if c is not None and c.half_chord > 0]
    if not found:
        return None
    best = max(found, key=lambda c: c.half_chord)
    if best.center_x - best.half_chord > frontier + settings.cover_tol:
        return None
    if best.frontier <= frontier + settings.cover_tol:
        return None
    return best


def check_feasible_3d(
    scenario: Scenario3d,
    bhat: float,
    settings: SolverSettings = DEFAULT_SETTINGS,
) -> FeasibilityOutcome:
    """Sweep both groups toward each other and deploy the smallest meeting prefixes."""
    if any(uav.battery < bhat for uav in scenario.uavs):
        return FeasibilityOutcome(False, (), 0.0)
    length = scenario.length
    if length <= 0:
        return FeasibilityOutcome(
            True, tuple(ground(uav) for uav in scenario.uavs), 0.0
        )

    mirrored = tuple(
        sorted(
            (Nfz(length - zone.right, length - zone.left) for zone in scenario.nfzs),
            key=lambda zone: zone.left,
        )
    )
    left = _sorted(scenario.left_uavs)
    right = _sorted(scenario.right_uavs)
    left_history = _sweep_3d(
        left, scenario.station_left, bhat, length, scenario.nfzs, scenario.model, settings
    )
    right_history = _sweep_3d(
        right,
        (length - scenario.station_right[0], scenario.station_right[1]),
        bhat,
        length,
        mirrored,
        scenario.model,
        settings,
    )

    meeting = [
        (k + m, k, m)
        for k, (left_frontier, _) in enumerate(left_history)
        for m, (right_frontier, _) in enumerate(right_history)
        if left_frontier >= length - right_frontier - settings.cover_tol
    ]
    if not meeting:
        return FeasibilityOutcome(False, (), left_history[-1][0])
    _, k, m = min(meeting)

    flying_left = [
        place(scenario.model, uav, cover.center_x, cover.offset_y, cover.altitude)
        for uav, (_, cover) in zip(left, left_history[1 : k + 1])
        if cover is not None
    ]
    flying_right = [
        place(
            scenario.model,
            uav,
            length - cover.center_x,
            cover.offset_y,
            cover.altitude,
        )
        for uav, (_, cover) in zip(right, right_history[1 : m + 1])
        if cover is not None
    ]
    flying = {placement.uav_id for placement in flying_left + flying_right}
    grounded = [ground(uav) for uav in left + right if uav.id not in flying]
    return FeasibilityOutcome(
        True,
        tuple(flying_left + flying_right[::-1] + grounded),
        left_history[k][0],
    )


def _sorted(uavs: Sequence[UavSpec]) -> list[UavSpec]:
    return sorted(uavs, key=lambda uav: (uav.battery, uav.id))


def _sweep_3d(
    uavs: list[UavSpec],
    station: tuple[float, float],
    bhat: float,
    end: float,
    nfzs: Sequence[Nfz],
    model: CoverageModel,
    settings: SolverSettings,
) -> list[tuple[float, ChordCover | None]]:
    """Return the frontier after each prefix, with the cover the prefix added."""
    frontier = 0.0
    history: list[tuple[float, ChordCover | None]] = [(frontier, None)]
    for uav in uavs:
        cover = None
        if frontier < end - settings.cover_tol and uav.battery > bhat:
            cover = max_reach_3d(uav, station, bhat, frontier, nfzs, model, settings)
        if cover is not None:
            frontier = cover.frontier
        history.append((frontier, cover))
    return history


def solve_3d(
    scenario: Scenario3d,
    epsilon: float = DEFAULT_EPSILON,
    settings: SolverSettings = DEFAULT_SETTINGS,
) -> SolveReport:
    """Approximate the best two-station deployment within relative error epsilon."""
    check_epsilon(epsilon)
    started = time.perf_counter()

    if scenario.length <= 0:
        placements = tuple(ground(uav) for uav in scenario.uavs)
        return SolveReport(
            placements=placements,
            bhat=min_leftover(placements),
            algorithm=MODE_3D,
            epsilon=epsilon,
            runtime=time.perf_counter() - started,
        )

    grid = SearchGrid(
        b_low=settings.b_low_floor,
        b_high=max(uav.battery for uav in scenario.uavs),
        epsilon=epsilon,
    )
    k, outcome, probes = search_grid(
        grid, lambda bhat: check_feasible_3d(scenario, bhat, settings)
    )
    bhat = min_leftover(outcome.placements)
    _LOGGER.info(
        "Two-station search kept %.6f Wh with %s left and %s right UAVs",
        bhat,
        len(scenario.left_uavs),
        len(scenario.right_uavs),
    )
    return SolveReport(
        placements=outcome.placements,
        bhat=bhat,
        algorithm=MODE_3D,
        epsilon=epsilon,
        iterations=probes,
        runtime=time.perf_counter() - started,
        diagnostics={
            "grid_bhat": grid.value(k),
            "grid_size": grid.size,
            "probes": probes,
        },
    )


class EmptyChordError(DeploymentError):
    """Error to indicate a disk that does not reach the target line."""


class UnreachableError(DeploymentError):
    """Error to indicate a lateral offset beyond the UAV's ground range."""
