"""Optimal deployment of UAVs launched from one shared station."""

from __future__ import annotations

from collections.abc import Iterator, Sequence
from dataclasses import dataclass, field
from itertools import groupby, product
import logging
import math
import time

from scipy.optimize import bisect

from .const import MAX_NFZ_PLANS, MAX_SIDE_ASSIGNMENTS, MODE_COLOCATED
from .linedeploy import sweep
from .model import (
    DEFAULT_SETTINGS,
    CoverageModel,
    InfeasibleError,
    InstanceTooLarge,
    InvalidScenario,
    Nfz,
    Placement,
    Scenario,
    SolveReport,
    SolverSettings,
    ToleranceError,
    UavSpec,
    ground,
    min_leftover,
    nfz_containing,
    place,
    radius,
    threshold_search,
)

_LOGGER = logging.getLogger(__name__)


@dataclass(frozen=True)
class NfzCase:
    """How one no-fly zone was resolved: which UAVs were pinned to its edges."""

    kind: str
    anchors: tuple[int, ...]
    nfz: Nfz

    def as_dict(self) -> dict[str, object]:
        """Return the result-file form of the case."""
        return {
            "kind": self.kind,
            "anchors": list(self.anchors),
            "nfz": [self.nfz.left, self.nfz.right],
        }


@dataclass(frozen=True)
class ColocatedSolution:
    """Placements ordered by x_final and their common leftover."""

    placements: tuple[Placement, ...]
    bhat: float
    nfz_case: tuple[NfzCase, ...] = ()
    plans: int = 0


@dataclass(frozen=True)
class _Side:
    """Half-line leaving the station; local coordinate u is the distance flown."""

    direction: int
    offset: float
    length: float

    @property
    def end(self) -> float:
        return self.offset + self.length

    def to_global(self, station: float, u: float) -> float:
        return station + self.direction * u

    def zones(self, station: float, nfzs: Sequence[Nfz]) -> list[tuple[Nfz, Nfz]]:
        """Return (local, global) pairs for zones cutting into this side."""
        pairs = []
        for zone in nfzs:
            if self.direction > 0:
                local = Nfz(zone.left - station, zone.right - station)
            else:
                local = Nfz(station - zone.right, station - zone.left)
            if local.right > self.offset and local.left < self.end:
                pairs.append((local, zone))
        return sorted(pairs, key=lambda pair: pair[0].left)


@dataclass(frozen=True)
class _SideResult:
    """Best deployment of one side: threshold, flying UAVs and NFZ cases."""

    threshold: float
    tiles: tuple[tuple[int, float, float], ...]
    cases: tuple[NfzCase, ...] = ()
    plans: int = 0


@dataclass(frozen=True)
class _Plan:
    """UAV indices pinned to zone edges, in ground order, with their labels."""

    pins: tuple[tuple[int, float], ...]
    labels: tuple[tuple[str, tuple[int, ...], Nfz], ...] = field(default=())


def solve_equal_leftover(
    scenario: Scenario,
    ignore_nfz: bool = True,
    settings: SolverSettings = DEFAULT_SETTINGS,
) -> ColocatedSolution:
    """Solve the equal-leftover deployment for a shared station."""
    solution = _solve(scenario, settings, refine=False)
    if ignore_nfz:
        return solution
    return refine_with_nfz(solution, scenario, settings)


def refine_with_nfz(
    solution: ColocatedSolution,
    scenario: Scenario,
    settings: SolverSettings = DEFAULT_SETTINGS,
) -> ColocatedSolution:
    """Move UAVs out of no-fly zones by pinning anchors to zone edges."""
    if not any(
        placement.deployed and nfz_containing(placement.x_final, scenario.nfzs)
        for placement in solution.placements
    ):
        return solution

    refined = _solve(scenario, settings, refine=True)
    _LOGGER.info(
        "No-fly zones lower the leftover from %.6f to %.6f Wh",
        solution.bhat,
        refined.bhat,
    )
    return refined


def solve_colocated(
    scenario: Scenario, settings: SolverSettings = DEFAULT_SETTINGS
) -> SolveReport:
    """Solve a shared-station scenario, honouring its no-fly zones."""
    started = time.perf_counter()
    plain = solve_equal_leftover(scenario, ignore_nfz=True, settings=settings)
    solution = refine_with_nfz(plain, scenario, settings)
    return SolveReport(
        placements=solution.placements,
        bhat=solution.bhat,
        algorithm=MODE_COLOCATED,
        runtime=time.perf_counter() - started,
        diagnostics={
            "unconstrained_bhat": plain.bhat,
            "nfz_case": [case.as_dict() for case in solution.nfz_case],
            "plans": solution.plans,
        },
    )


def _solve(
    scenario: Scenario, settings: SolverSettings, refine: bool
) -> ColocatedSolution:
    """Enumerate side assignments and keep the one with the best bottleneck."""
    station = _shared_station(scenario.uavs)
    sides = _sides(station, scenario.length)
    uavs = sorted(scenario.uavs, key=lambda uav: (uav.battery, uav.id))

    best: tuple[float, list[_SideResult]] | None = None
    for assignment in _assignments(uavs, len(sides)):
        try:
            results = [
                _solve_side(group, side, station, scenario, settings, refine)
                for group, side in zip(assignment, sides)
            ]
        except InfeasibleError:
            continue
        value = min(result.threshold for result in results)
        if best is None or value > best[0]:
            best = (value, results)

    if best is None:
        raise InfeasibleError(
            f"{len(uavs)} UAVs cannot cover [0, {scenario.length}] from {station}"
        )

    flying = {
        uav_id: (u, h, side)
        for result, side in zip(best[1], sides)
        for uav_id, u, h in result.tiles
    }
    placements = []
    for uav in uavs:
        if uav.id in flying:
            u, h, side = flying[uav.id]
            placements.append(
                place(scenario.model, uav, side.to_global(station, u), uav.y, h)
            )
        else:
            placements.append(ground(uav))
    placements.sort(key=lambda placement: (placement.x_final, placement.uav_id))

    return ColocatedSolution(
        placements=tuple(placements),
        bhat=min_leftover(placements),
        nfz_case=tuple(case for result in best[1] for case in result.cases),
        plans=sum(result.plans for result in best[1]),
    )


def _shared_station(uavs: Sequence[UavSpec]) -> float:
    station = uavs[0].x
    if any(uav.x != station or uav.y != 0 for uav in uavs):
        raise InvalidScenario("Colocated UAVs must share one station on the line")
    return station


def _sides(station: float, length: float) -> list[_Side]:
    if station <= 0:
        return [_Side(1, -station, length)]
    if station >= length:
        return [_Side(-1, station - length, length)]
    return [_Side(-1, 0.0, station), _Side(1, 0.0, length - station)]


def _assignments(
    uavs: list[UavSpec], sides: int
) -> Iterator[tuple[list[UavSpec], ...]]:
    """Yield the distinct splits of battery-sorted UAVs between the sides."""
    if sides == 1:
        yield (uavs,)
        return

    groups = [list(group) for _, group in groupby(uavs, key=lambda uav: uav.battery)]
    if math.prod(len(group) + 1 for group in groups) > MAX_SIDE_ASSIGNMENTS:
        raise InstanceTooLarge(
            f"More than {MAX_SIDE_ASSIGNMENTS} ways to split the fleet between sides"
        )

    for counts in product(*(range(len(group) + 1) for group in groups)):
        left: list[UavSpec] = []
        right: list[UavSpec] = []
        for group, count in zip(groups, counts):
            left.extend(group[:count])
            right.extend(group[count:])
        yield left, right


def _solve_side(
    uavs: list[UavSpec],
    side: _Side,
    station: float,
    scenario: Scenario,
    settings: SolverSettings,
    refine: bool,
) -> _SideResult:
    plain = _solve_side_plain(uavs, side, scenario.model, settings)
    if not refine:
        return plain

    zones = side.zones(station, scenario.nfzs)
    if not any(nfz_containing(u, [local for local, _ in zones]) for _, u, _ in plain.tiles):
        return plain
    return _solve_side_plans(uavs, side, zones, scenario.model, settings)


def _solve_side_plain(
    uavs: list[UavSpec],
    side: _Side,
    model: CoverageModel,
    settings: SolverSettings,
) -> _SideResult:
    """Tile the side seamlessly so every flying UAV keeps the same leftover."""
    if side.length <= 0:
        return _SideResult(min((uav.battery for uav in uavs), default=math.inf), ())
    if not uavs:
        raise InfeasibleError(f"No UAV left for a side of length {side.length}")

    threshold = threshold_search(
        lambda bhat: _tile(uavs, bhat, side, model, settings)[0] >= side.length,
        0.0,
        min(uav.battery for uav in uavs),
        settings,
    )
    _, tiles = _tile(uavs, threshold, side, model, settings)
    _LOGGER.debug("Side %s tiled by %s UAVs at %.9f Wh", side, len(tiles), threshold)
    return _SideResult(threshold, tuple(tiles))


def _tile(
    uavs: list[UavSpec],
    bhat: float,
    side: _Side,
    model: CoverageModel,
    settings: SolverSettings,
) -> tuple[float, list[tuple[int, float, float]]]:
    """Return the tiled width and the (id, u, h) of every UAV that flies."""
    width = 0.0
    tiles: list[tuple[int, float, float]] = []
    for uav in uavs:
        if width >= side.length:
            break
        budget = (uav.battery - bhat) / model.c
        h = _equal_leftover_altitude(budget, side.offset + width, model, settings)
        if h is None:
            continue
        r = radius(model, h)
        tiles.append((uav.id, side.offset + width + r, h))
        width += 2 * r
    return width, tiles


def _equal_leftover_altitude(
    budget: float, start: float, model: CoverageModel, settings: SolverSettings
) -> float | None:
    """Return the altitude that spends budget exactly when covering from start."""

    def residual(h: float) -> float:
        return budget - model.w * (start + radius(model, h)) - h

    if residual(0.0) <= 0:
        return None
    if residual(model.h_star) >= 0:
        return model.h_star
    try:
        return bisect(
            residual,
            0.0,
            model.h_star,
            xtol=settings.h_tol,
            maxiter=settings.max_iter,
        )
    except RuntimeError as err:
        raise ToleranceError(f"Altitude bisection did not converge: {err}") from err


def _solve_side_plans(
    uavs: list[UavSpec],
    side: _Side,
    zones: list[tuple[Nfz, Nfz]],
    model: CoverageModel,
    settings: SolverSettings,
) -> _SideResult:
    """Try every pinning plan for the side's zones and keep the best."""
    local = [UavSpec(id=uav.id, x=0.0, battery=uav.battery) for uav in uavs]
    local_zones = [zone for zone, _ in zones]
    ceiling = min(uav.battery for uav in uavs)

    best: _SideResult | None = None
    evaluated = 0
    for plan in _plans(local, zones):
        evaluated += 1

        def feasible(bhat: float, plan: _Plan = plan) -> bool:
            return _run_plan(plan, local, bhat, side, local_zones, model, settings)[0]

        if best is not None and not feasible(best.threshold):
            continue
        try:
            threshold = threshold_search(feasible, 0.0, ceiling, settings)
        except InfeasibleError:
            continue

        _, tiles = _run_plan(plan, local, threshold, side, local_zones, model, settings)
        if best is None or threshold > best.threshold:
            cases = tuple(NfzCase(kind, anchors, zone) for kind, anchors, zone in plan.labels)
            best = _SideResult(threshold, tuple(tiles), cases)
            _LOGGER.debug("Plan %s reaches %.9f Wh", cases, threshold)

    if best is None:
        raise InfeasibleError("No pinning plan keeps the UAVs out of the no-fly zones")
    return _SideResult(best.threshold, best.tiles, best.cases, evaluated)


def _plans(
    uavs: list[UavSpec], zones: list[tuple[Nfz, Nfz]]
) -> Iterator[_Plan]:
    """Yield every combination of edge pins over the zones, anchors increasing."""
    n = len(uavs)
    options = []
    for local, _ in zones:
        choices: list[tuple[str, tuple[int, ...], tuple[float, ...]]] = []
        if len(zones) > 1:
            choices.append(("free", (), ()))
        choices.extend(("case1", (i,), (local.left,)) for i in range(n))
        choices.extend(("case2", (i,), (local.right,)) for i in range(n))
        choices.extend(
            ("case3", (i - 1, i), (local.left, local.right)) for i in range(1, n)
        )
        options.append(choices)

    if math.prod(len(choices) for choices in options) > MAX_NFZ_PLANS:
        raise InstanceTooLarge(f"More than {MAX_NFZ_PLANS} no-fly zone plans")

    for combo in product(*options):
        pins = [
            (index, edge)
            for _, indices, edges in combo
            for index, edge in zip(indices, edges)
        ]
        if not pins:
            continue
        if any(a[0] >= b[0] for a, b in zip(pins, pins[1:])):
            continue
        labels = tuple(
            (kind, tuple(uavs[i].id for i in indices), zone)
            for (kind, indices, _), (_, zone) in zip(combo, zones)
            if kind != "free"
        )
        yield _Plan(tuple(pins), labels)


def _run_plan(
    plan: _Plan,
    uavs: list[UavSpec],
    bhat: float,
    side: _Side,
    zones: list[Nfz],
    model: CoverageModel,
    settings: SolverSettings,
) -> tuple[bool, list[tuple[int, float, float]]]:
    """Sweep the residues between pinned UAVs and report whether they cover the side."""
    frontier = side.offset
    tiles: list[tuple[int, float, float]] = []
    cursor = 0

    for index, edge in plan.pins:
        uav = uavs[index]
        h = min(model.h_star, (uav.battery - bhat) / model.c - model.w * abs(edge))
        if h <= 0:
            return False, tiles
        r = radius(model, h)

        frontier, placed = sweep(
            uavs[cursor:index], bhat, frontier, edge - r, zones, model, settings
        )
        tiles.extend(_flying(placed))
        if frontier < edge - r - settings.cover_tol:
            return False, tiles

        tiles.append((uav.id, edge, h))
        frontier = max(frontier, edge + r)
        cursor = index + 1

    frontier, placed = sweep(
        uavs[cursor:], bhat, frontier, side.end, zones, model, settings
    )
    tiles.extend(_flying(placed))
    if frontier < side.end - settings.cover_tol:
        return False, tiles
    if any(nfz_containing(u, zones) for _, u, _ in tiles):
        return False, tiles
    return True, tiles


def _flying(placements: list[Placement]) -> list[tuple[int, float, float]]:
    return [
        (placement.uav_id, placement.x_final, placement.altitude)
        for placement in placements
        if placement.deployed
    ]
