"""Search over bounded reorderings of the line sweep."""

from __future__ import annotations

from collections.abc import Iterator, Sequence
from itertools import combinations, permutations
import logging
import time

from . import linedeploy
from .const import DEFAULT_EPSILON, DEFAULT_KAPPA, MODE_KAPPA
from .linedeploy import SearchGrid, check_epsilon, grid_search
from .model import (
    DEFAULT_SETTINGS,
    InfeasibleError,
    InvalidScenario,
    Scenario,
    SolveReport,
    SolverSettings,
    UavSpec,
    min_leftover,
)

_LOGGER = logging.getLogger(__name__)

OrderSequence = tuple[int, ...]


def enumerate_orders(
    n: int, kappa: int, base_order: Sequence[int] | None = None
) -> Iterator[OrderSequence]:
    """Yield every order that permutes at most kappa entries of base, base first."""
    if kappa < 0:
        raise InvalidScenario(f"kappa must be non-negative, got {kappa}")
    base = tuple(range(n)) if base_order is None else tuple(base_order)
    kappa = min(kappa, n)

    seen: dict[OrderSequence, None] = {base: None}
    yield base
    for size in range(2, kappa + 1):
        for positions in combinations(range(n), size):
            for shuffled in permutations(base[i] for i in positions):
                order = list(base)
                for position, value in zip(positions, shuffled):
                    order[position] = value
                candidate = tuple(order)
                if candidate not in seen:
                    seen[candidate] = None
                    yield candidate


def solve_kappa(
    scenario: Scenario,
    kappa: int = DEFAULT_KAPPA,
    epsilon: float = DEFAULT_EPSILON,
    settings: SolverSettings = DEFAULT_SETTINGS,
) -> SolveReport:
    """Run the grid search for every kappa-reordering and keep the best."""
    check_epsilon(epsilon)
    started = time.perf_counter()
    uavs: list[UavSpec] = linedeploy.base_order(scenario.uavs)
    grid = SearchGrid(
        b_low=settings.b_low_floor,
        b_high=max(uav.battery for uav in uavs),
        epsilon=epsilon,
    )

    best: tuple[float, OrderSequence, tuple] | None = None
    orders = 0
    probes = 0
    for order in enumerate_orders(len(uavs), kappa):
        orders += 1
        try:
            _, outcome, used = grid_search(
                scenario, grid, [uavs[i] for i in order], settings
            )
        except InfeasibleError:
            _LOGGER.debug("Order %s is infeasible", order)
            continue
        probes += used
        bhat = min_leftover(outcome.placements)
        if best is None or bhat > best[0]:
            best = (bhat, order, outcome.placements)

    if best is None:
        raise InfeasibleError(f"None of the {orders} orders covers the target")

    bhat, order, placements = best
    _LOGGER.info(
        "Best of %s orders keeps %.6f Wh (kappa=%s)", orders, bhat, kappa
    )
    return SolveReport(
        placements=placements,
        bhat=bhat,
        algorithm=MODE_KAPPA,
        epsilon=epsilon,
        iterations=probes,
        runtime=time.perf_counter() - started,
        diagnostics={
            "kappa": kappa,
            "orders": orders,
            "best_order": [uavs[i].id for i in order],
            "probes": probes,
        },
    )
