"""Exhaustive grid oracle and the partition reduction used to cross-check the solvers."""

from __future__ import annotations

from collections.abc import Sequence
from dataclasses import dataclass
from itertools import permutations
import logging
import math
import time

import numpy as np

from .const import (
    DEFAULT_ALPHA,
    DEFAULT_BETA,
    DEFAULT_C,
    DEFAULT_GRID_STEP,
    DEFAULT_W,
    MAX_ORACLE_STATES,
    MAX_ORACLE_UAVS,
    MODE_ORACLE,
)
from .model import (
    DEFAULT_SETTINGS,
    CoverageModel,
    InstanceTooLarge,
    Nfz,
    Placement,
    Scenario,
    SolveReport,
    SolverSettings,
    UavSpec,
    ground,
    inverse_radius,
    min_leftover,
    place,
    threshold_search,
)

_LOGGER = logging.getLogger(__name__)


@dataclass(frozen=True)
class GridSpec:
    """Ground and altitude resolution of the oracle (km)."""

    dx: float = DEFAULT_GRID_STEP
    dh: float = DEFAULT_GRID_STEP


def slack(model: CoverageModel, grid: GridSpec) -> float:
    """Return how far below the true optimum the grid may land (Wh)."""
    return model.c * (model.w * grid.dx + grid.dh)


def ground_grid(
    uav: UavSpec, length: float, nfzs: Sequence[Nfz], grid: GridSpec
) -> np.ndarray:
    """Return the candidate final positions of uav, outside every no-fly zone."""
    low, high = min(0.0, uav.x), max(length, uav.x)
    count = math.ceil((high - low) / grid.dx) + 1
    if count > MAX_ORACLE_STATES:
        raise InstanceTooLarge(
            f"UAV {uav.id} needs {count} grid points, more than {MAX_ORACLE_STATES}"
        )
    edges = [edge for zone in nfzs for edge in (zone.left, zone.right)]
    xs = np.unique(
        np.concatenate([np.linspace(low, high, count), [uav.x, 0.0, length], edges])
    )
    for zone in nfzs:
        xs = xs[~((xs > zone.left) & (xs < zone.right))]
    return xs


class _Candidates:
    """Highest grid altitude of one UAV at every grid position for a threshold."""

    def __init__(
        self, uav: UavSpec, xs: np.ndarray, bhat: float, model: CoverageModel, dh: float
    ) -> None:
        budget = (uav.battery - bhat) / model.c
        ceiling = np.minimum(model.h_star, budget - model.w * np.abs(xs - uav.x))
        heights = np.floor(np.maximum(ceiling, 0.0) / dh + 1e-9) * dh
        keep = heights > 0
        self.uav = uav
        self.xs = xs[keep]
        self.heights = np.minimum(heights[keep], model.h_star)
        radii = model.alpha * self.heights**model.beta
        self.left = self.xs - radii
        self.right = self.xs + radii

    def best(self, frontier: float, tol: float) -> int | None:
        """Return the index extending the frontier furthest, if any touches it."""
        touching = np.flatnonzero(self.left <= frontier + tol)
        if touching.size == 0:
            return None
        index = int(touching[np.argmax(self.right[touching])])
        if self.right[index] <= frontier + tol:
            return None
        return index


def _cover(
    candidates: list[_Candidates], length: float, tol: float
) -> list[tuple[_Candidates, int]] | None:
    """Try every UAV order with skips; return the chosen grid points or None."""
    for order in permutations(candidates):
        frontier = 0.0
        chosen = []
        for candidate in order:
            if frontier >= length - tol:
                break
            index = candidate.best(frontier, tol)
            if index is None:
                continue
            chosen.append((candidate, index))
            frontier = float(candidate.right[index])
        if frontier >= length - tol:
            return chosen
    return None


def brute_force(
    scenario: Scenario,
    grid: GridSpec = GridSpec(),
    settings: SolverSettings = DEFAULT_SETTINGS,
) -> SolveReport:
    """Search every grid deployment for the best min leftover of a small scenario."""
    started = time.perf_counter()
    uavs = scenario.uavs
    if len(uavs) > MAX_ORACLE_UAVS:
        raise InstanceTooLarge(
            f"The oracle handles at most {MAX_ORACLE_UAVS} UAVs, got {len(uavs)}"
        )
    model = scenario.model
    diagnostics = {"slack": slack(model, grid), "dx": grid.dx, "dh": grid.dh}

    if scenario.length <= 0:
        placements = tuple(ground(uav) for uav in uavs)
        return SolveReport(
            placements=placements,
            bhat=min_leftover(placements),
            algorithm=MODE_ORACLE,
            runtime=time.perf_counter() - started,
            diagnostics=diagnostics,
        )

    grids = {uav.id: ground_grid(uav, scenario.length, scenario.nfzs, grid) for uav in uavs}

    def deployment(bhat: float) -> list[tuple[_Candidates, int]] | None:
        candidates = [
            _Candidates(uav, grids[uav.id], bhat, model, grid.dh) for uav in uavs
        ]
        return _cover(candidates, scenario.length, settings.cover_tol)

    evaluations = 0

    def feasible(bhat: float) -> bool:
        nonlocal evaluations
        evaluations += 1
        return deployment(bhat) is not None

    bhat = threshold_search(
        feasible, 0.0, min(uav.battery for uav in uavs), settings
    )
    chosen = deployment(bhat) or []
    flying: dict[int, Placement] = {
        candidate.uav.id: place(
            model,
            candidate.uav,
            float(candidate.xs[index]),
            candidate.uav.y,
            float(candidate.heights[index]),
        )
        for candidate, index in chosen
    }
    placements = sorted(
        (flying.get(uav.id) or ground(uav) for uav in uavs),
        key=lambda placement: (placement.x_final, placement.uav_id),
    )
    result = min_leftover(placements)
    _LOGGER.info(
        "Oracle kept %.6f Wh after %s threshold checks (slack %.4f Wh)",
        result,
        evaluations,
        diagnostics["slack"],
    )
    return SolveReport(
        placements=tuple(placements),
        bhat=result,
        algorithm=MODE_ORACLE,
        iterations=evaluations,
        runtime=time.perf_counter() - started,
        diagnostics={**diagnostics, "threshold": bhat},
    )


def partition_scenario(
    ints: Sequence[int],
    bhat: float,
    alpha: float = DEFAULT_ALPHA,
    beta: float = DEFAULT_BETA,
    w: float = DEFAULT_W,
    c: float = DEFAULT_C,
) -> Scenario:
    """Build a colocated scenario reaching bhat only if ints splits into equal halves."""
    rho = min(ints) / 4
    length = sum(ints) + 2 * rho
    middle = length / 2
    reach = max(max(ints) / 2, rho)
    model = CoverageModel(
        alpha=alpha, beta=beta, h_star=(reach / alpha) ** (1 / beta), w=w, c=c
    )

    uavs = [
        UavSpec(
            id=i,
            x=middle,
            battery=bhat + c * (w * middle + inverse_radius(model, a / 2)),
        )
        for i, a in enumerate(ints)
    ]
    uavs.append(
        UavSpec(id=len(ints), x=middle, battery=bhat + c * inverse_radius(model, rho))
    )
    return Scenario(
        length=length,
        nfzs=(Nfz(middle - 2 * rho, middle), Nfz(middle, middle + 2 * rho)),
        uavs=tuple(uavs),
        model=model,
    )
