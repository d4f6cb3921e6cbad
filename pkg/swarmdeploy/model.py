"""Physical model and shared types for the deployment solvers."""

from __future__ import annotations

from collections.abc import Callable, Iterable, Mapping, Sequence
from dataclasses import asdict, dataclass, field
import logging
import math
from typing import Any

from scipy.optimize import bisect

from .const import (
    AIRFRAME_PRESETS,
    AUDIT_TOL,
    B_LOW_FLOOR,
    BHAT_TOL,
    COVER_TOL,
    DEFAULT_ALPHA,
    DEFAULT_BETA,
    DEFAULT_C,
    DEFAULT_H_STAR,
    DEFAULT_W,
    H_TOL,
    MAX_ITER,
    RADIUS_RTOL,
    REACH_TOL,
)

_LOGGER = logging.getLogger(__name__)


@dataclass(frozen=True)
class CoverageModel:
    """Radius and energy parameters shared by every UAV."""

    alpha: float = DEFAULT_ALPHA
    beta: float = DEFAULT_BETA
    h_star: float = DEFAULT_H_STAR
    w: float = DEFAULT_W
    c: float = DEFAULT_C

    def __post_init__(self) -> None:
        """Validate the parameter ranges."""
        if not self.alpha > 0:
            raise DomainError(f"alpha must be positive, got {self.alpha}")
        if not 0 < self.beta < 1:
            raise DomainError(f"beta must lie in (0, 1), got {self.beta}")
        if not self.h_star > 0:
            raise DomainError(f"h_star must be positive, got {self.h_star}")
        if not 0 < self.w < 1:
            raise DomainError(f"w must lie in (0, 1), got {self.w}")
        if not self.c > 0:
            raise DomainError(f"c must be positive, got {self.c}")

    @classmethod
    def for_airframe(cls, name: str, **kwargs: float) -> CoverageModel:
        """Build a model whose energy coefficient comes from an airframe."""
        try:
            c = AIRFRAME_PRESETS[name]
        except KeyError as err:
            raise DomainError(f"Unknown airframe {name!r}") from err
        return cls(c=c, **kwargs)

    @property
    def max_radius(self) -> float:
        """Radius at the turning point."""
        return self.alpha * self.h_star**self.beta


@dataclass(frozen=True)
class UavSpec:
    """A UAV's label, initial ground position and energy storage."""

    id: int
    x: float
    battery: float
    y: float = 0.0


@dataclass(frozen=True)
class Nfz:
    """Open ground interval where no UAV may be finally placed."""

    left: float
    right: float

    def contains(self, x: float, tol: float = 0.0) -> bool:
        """Return True if x lies strictly inside the zone."""
        return self.left + tol < x < self.right - tol


@dataclass(frozen=True)
class Scenario:
    """1D deployment problem: cover [0, length] with the given UAVs."""

    length: float
    nfzs: tuple[Nfz, ...]
    uavs: tuple[UavSpec, ...]
    model: CoverageModel = field(default_factory=CoverageModel)

    def __post_init__(self) -> None:
        """Check the scenario invariants."""
        _check_common(self.length, self.nfzs, self.uavs)


@dataclass(frozen=True)
class Scenario3d:
    """Two-station problem; each group starts at its station."""

    length: float
    station_left: tuple[float, float]
    station_right: tuple[float, float]
    left_uavs: tuple[UavSpec, ...]
    right_uavs: tuple[UavSpec, ...]
    model: CoverageModel = field(default_factory=CoverageModel)
    nfzs: tuple[Nfz, ...] = ()

    def __post_init__(self) -> None:
        """Check the scenario invariants."""
        if not self.station_left[0] < self.station_right[0]:
            raise InvalidScenario("Left station must lie left of the right station")
        for station, group in (
            (self.station_left, self.left_uavs),
            (self.station_right, self.right_uavs),
        ):
            for uav in group:
                if (uav.x, uav.y) != tuple(station):
                    raise InvalidScenario(
                        f"UAV {uav.id} at ({uav.x}, {uav.y}) does not start at "
                        f"its station {tuple(station)}"
                    )
        _check_common(self.length, self.nfzs, self.left_uavs + self.right_uavs)

    @property
    def uavs(self) -> tuple[UavSpec, ...]:
        """All UAVs, left station first."""
        return self.left_uavs + self.right_uavs


@dataclass(frozen=True)
class Placement:
    """Final position of one UAV and the energy it spent getting there."""

    uav_id: int
    x_final: float
    y_final: float
    altitude: float
    radius: float
    distance: float
    leftover: float
    deployed: bool

    def as_dict(self) -> dict[str, Any]:
        """Return the result-file form of the placement."""
        return {
            "id": self.uav_id,
            "x": self.x_final,
            "y": self.y_final,
            "h": self.altitude,
            "radius": self.radius,
            "distance": self.distance,
            "leftover": self.leftover,
            "deployed": self.deployed,
        }


@dataclass(frozen=True)
class SolveReport:
    """Placements and bookkeeping returned by every solver."""

    placements: tuple[Placement, ...]
    bhat: float
    algorithm: str
    epsilon: float | None = None
    iterations: int = 0
    runtime: float = 0.0
    diagnostics: Mapping[str, Any] = field(default_factory=dict)


@dataclass(frozen=True)
class SolverSettings:
    """Numerical tolerances shared by the solvers."""

    h_tol: float = H_TOL
    bhat_tol: float = BHAT_TOL
    reach_tol: float = REACH_TOL
    cover_tol: float = COVER_TOL
    audit_tol: float = AUDIT_TOL
    max_iter: int = MAX_ITER
    b_low_floor: float = B_LOW_FLOOR

    def as_dict(self) -> dict[str, Any]:
        """Return the settings as plain values."""
        return asdict(self)


DEFAULT_SETTINGS = SolverSettings()


def radius(model: CoverageModel, h: float) -> float:
    """Return the ground coverage radius at altitude h."""
    if h < 0 or h > model.h_star * (1 + 1e-12):
        raise DomainError(f"Altitude {h} outside [0, {model.h_star}]")
    return model.alpha * min(h, model.h_star) ** model.beta


def inverse_radius(model: CoverageModel, r: float) -> float:
    """Return the altitude whose coverage radius is r."""
    if r < 0:
        raise DomainError(f"Radius {r} is negative")
    if r > model.max_radius * (1 + RADIUS_RTOL):
        raise UncoverableError(
            f"Radius {r} exceeds the largest radius {model.max_radius}"
        )
    return min((r / model.alpha) ** (1 / model.beta), model.h_star)


def travel_distance(
    model: CoverageModel,
    from_x: float,
    from_y: float,
    to_x: float,
    to_y: float,
    h: float,
) -> float:
    """Return the normalized flight distance to (to_x, to_y) at altitude h."""
    return model.w * math.hypot(to_x - from_x, to_y - from_y) + h


def leftover(model: CoverageModel, battery: float, distance: float) -> float:
    """Return the energy left after flying the normalized distance."""
    return battery - model.c * distance


def place(
    model: CoverageModel, uav: UavSpec, x: float, y: float, h: float
) -> Placement:
    """Build a deployed placement for uav at (x, y, h)."""
    distance = travel_distance(model, uav.x, uav.y, x, y, h)
    return Placement(
        uav_id=uav.id,
        x_final=x,
        y_final=y,
        altitude=h,
        radius=radius(model, h),
        distance=distance,
        leftover=leftover(model, uav.battery, distance),
        deployed=True,
    )


def ground(uav: UavSpec) -> Placement:
    """Build the placement of a UAV that stays where it is."""
    return Placement(
        uav_id=uav.id,
        x_final=uav.x,
        y_final=uav.y,
        altitude=0.0,
        radius=0.0,
        distance=0.0,
        leftover=uav.battery,
        deployed=False,
    )


def min_leftover(placements: Iterable[Placement]) -> float:
    """Return the bottleneck leftover of a deployment."""
    return min(placement.leftover for placement in placements)


def nfz_containing(x: float, nfzs: Iterable[Nfz], tol: float = 0.0) -> Nfz | None:
    """Return the zone holding x strictly inside, if any."""
    for zone in nfzs:
        if zone.contains(x, tol):
            return zone
    return None


def threshold_search(
    predicate: Callable[[float], bool],
    low: float,
    high: float,
    settings: SolverSettings = DEFAULT_SETTINGS,
) -> float:
    """Return the largest value in [low, high] accepted by a monotone predicate."""
    if predicate(high):
        return high
    if not predicate(low):
        raise InfeasibleError(f"No value in [{low}, {high}] is feasible")

    # Predicates built on sweeps may flicker within round-off of the threshold;
    # only values seen accepted are ever returned.
    accepted = low

    def sign(value: float) -> float:
        nonlocal accepted
        if predicate(value):
            accepted = max(accepted, value)
            return 1.0
        return -1.0

    try:
        root = bisect(
            sign, low, high, xtol=settings.bhat_tol, maxiter=settings.max_iter
        )
    except RuntimeError as err:
        raise ToleranceError(f"Threshold search did not converge: {err}") from err

    _LOGGER.debug(
        "Threshold bracket [%s, %s] -> %s, accepted %s", low, high, root, accepted
    )
    if root - accepted > 2 * settings.bhat_tol:
        raise ToleranceError(f"Threshold {root} is not feasible within tolerance")
    return accepted


def audit(
    placements: Sequence[Placement],
    uavs: Iterable[UavSpec],
    length: float,
    nfzs: Sequence[Nfz],
    model: CoverageModel,
    tol: float = AUDIT_TOL,
) -> None:
    """Re-validate a deployment through the model, raising on any breach."""
    by_id = {uav.id: uav for uav in uavs}
    intervals: list[tuple[float, float]] = []

    for placement in placements:
        uav = by_id[placement.uav_id]
        if not placement.deployed:
            if placement.leftover != uav.battery:
                raise ToleranceError(f"Grounded UAV {uav.id} lost energy")
            continue

        if not 0 < placement.altitude <= model.h_star * (1 + 1e-12):
            raise ToleranceError(
                f"UAV {uav.id} altitude {placement.altitude} outside (0, h*]"
            )
        if not math.isclose(
            placement.radius, radius(model, placement.altitude), abs_tol=tol
        ):
            raise ToleranceError(f"UAV {uav.id} radius does not match its altitude")
        if nfz_containing(placement.x_final, nfzs, tol) is not None:
            raise ToleranceError(f"UAV {uav.id} placed inside a no-fly zone")

        distance = travel_distance(
            model,
            uav.x,
            uav.y,
            placement.x_final,
            placement.y_final,
            placement.altitude,
        )
        expected = leftover(model, uav.battery, distance)
        if abs(expected - placement.leftover) > tol * max(1.0, uav.battery):
            raise ToleranceError(
                f"UAV {uav.id} leftover {placement.leftover} != {expected}"
            )
        if placement.leftover < -tol:
            raise ToleranceError(f"UAV {uav.id} runs out of energy")

        if abs(placement.y_final) <= placement.radius:
            half = math.sqrt(placement.radius**2 - placement.y_final**2)
            intervals.append((placement.x_final - half, placement.x_final + half))

    if length <= 0:
        return

    frontier = 0.0
    for left, right in sorted(intervals):
        if left > frontier + tol:
            break
        frontier = max(frontier, right)
    if frontier < length - tol:
        raise ToleranceError(f"Coverage stops at {frontier} short of {length}")


def _check_common(
    length: float, nfzs: Sequence[Nfz], uavs: Sequence[UavSpec]
) -> None:
    """Validate what 1D and 3D scenarios share."""
    if length < 0:
        raise InvalidScenario(f"Target length {length} is negative")
    if not uavs:
        raise InvalidScenario("At least one UAV is required")
    if len({uav.id for uav in uavs}) != len(uavs):
        raise InvalidScenario("UAV ids must be unique")
    for uav in uavs:
        if not uav.battery > 0:
            raise InvalidScenario(f"UAV {uav.id} battery must be positive")
    for zone in nfzs:
        if not zone.left < zone.right:
            raise InvalidScenario(f"No-fly zone {zone} is empty")
    for before, after in zip(nfzs, nfzs[1:]):
        if after.left < before.right:
            raise InvalidScenario(f"No-fly zones {before} and {after} overlap")


class DeploymentError(Exception):
    """Base error for the deployment solvers."""


class DomainError(DeploymentError, ValueError):
    """Error to indicate a value outside the model's domain."""


class UncoverableError(DeploymentError):
    """Error to indicate no altitude achieves the requested radius."""


class InfeasibleError(DeploymentError):
    """Error to indicate the swarm cannot cover the target."""


class InstanceTooLarge(DeploymentError):
    """Error to indicate an enumeration exceeds its guard."""


class ToleranceError(DeploymentError):
    """Error to indicate a numerical result failed its audit."""


class InvalidScenario(DeploymentError):
    """Error to indicate malformed scenario input."""
