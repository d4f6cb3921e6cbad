"""Scenario file validation and serialization."""

from __future__ import annotations

from dataclasses import dataclass, field
import json
import logging
from typing import Any

import voluptuous as vol

from .const import (
    AIRFRAME_PRESETS,
    DEFAULT_ALPHA,
    DEFAULT_BATTERY,
    DEFAULT_BETA,
    DEFAULT_C,
    DEFAULT_EPSILON,
    DEFAULT_GRID_STEP,
    DEFAULT_H_STAR,
    DEFAULT_KAPPA,
    DEFAULT_W,
    MODE_3D,
    MODES,
    SCENARIO_VERSION,
)
from .model import (
    CoverageModel,
    DomainError,
    InvalidScenario,
    Nfz,
    Scenario,
    Scenario3d,
    UavSpec,
)
from .oracle import GridSpec

_LOGGER = logging.getLogger(__name__)

_number = vol.Coerce(float)
_positive = vol.All(_number, vol.Range(min=0, min_included=False))
_non_negative = vol.All(_number, vol.Range(min=0))
_open_unit = vol.All(
    _number, vol.Range(min=0, max=1, min_included=False, max_included=False)
)
_point = vol.ExactSequence([_number, _number])

MODEL_SCHEMA = vol.Schema(
    {
        vol.Optional("airframe"): vol.In(sorted(AIRFRAME_PRESETS)),
        vol.Optional("alpha", default=DEFAULT_ALPHA): _positive,
        vol.Optional("beta", default=DEFAULT_BETA): _open_unit,
        vol.Optional("h_star", default=DEFAULT_H_STAR): _positive,
        vol.Optional("w", default=DEFAULT_W): _open_unit,
        vol.Optional("c"): _positive,
    }
)

UAV_SCHEMA = vol.Schema(
    {
        vol.Required("id"): int,
        vol.Required("x"): _number,
        vol.Optional("y", default=0.0): _number,
        vol.Optional("battery", default=DEFAULT_BATTERY): _positive,
    }
)

STATION_UAV_SCHEMA = vol.Schema(
    {
        vol.Required("id"): int,
        vol.Optional("battery", default=DEFAULT_BATTERY): _positive,
    }
)

_COMMON = {
    vol.Required("length"): _non_negative,
    vol.Optional("nfzs", default=list): [_point],
    vol.Optional("battery", default=DEFAULT_BATTERY): _positive,
    vol.Optional("model", default=dict): MODEL_SCHEMA,
}

LINE_SCHEMA = vol.Schema(
    {
        **_COMMON,
        vol.Exclusive("uavs", "fleet"): [UAV_SCHEMA],
        vol.Exclusive("n", "fleet"): vol.All(int, vol.Range(min=1)),
        vol.Optional("station", default=0.0): _number,
    }
)

SCENARIO_3D_SCHEMA = vol.Schema(
    {
        **_COMMON,
        vol.Required("station_left"): _point,
        vol.Required("station_right"): _point,
        vol.Exclusive("left_uavs", "left"): [STATION_UAV_SCHEMA],
        vol.Exclusive("n_left", "left"): vol.All(int, vol.Range(min=0)),
        vol.Exclusive("right_uavs", "right"): [STATION_UAV_SCHEMA],
        vol.Exclusive("n_right", "right"): vol.All(int, vol.Range(min=0)),
    }
)

OPTIONS_SCHEMA = vol.Schema(
    {
        vol.Optional("epsilon", default=DEFAULT_EPSILON): _open_unit,
        vol.Optional("kappa", default=DEFAULT_KAPPA): vol.All(int, vol.Range(min=0)),
        vol.Optional("grid", default=dict): vol.Schema(
            {
                vol.Optional("dx", default=DEFAULT_GRID_STEP): _positive,
                vol.Optional("dh", default=DEFAULT_GRID_STEP): _positive,
            }
        ),
    }
)

FILE_SCHEMA = vol.Schema(
    {
        vol.Optional("version", default=SCENARIO_VERSION): vol.Coerce(str),
        vol.Required("mode"): vol.In(
            MODES, msg=f"expected one of {', '.join(MODES)}"
        ),
        vol.Required("scenario"): dict,
        vol.Optional("options", default=dict): OPTIONS_SCHEMA,
    }
)


@dataclass(frozen=True)
class SolveOptions:
    """Solver knobs read from the scenario file."""

    epsilon: float = DEFAULT_EPSILON
    kappa: int = DEFAULT_KAPPA
    grid: GridSpec = field(default_factory=GridSpec)


@dataclass(frozen=True)
class ScenarioFile:
    """A parsed scenario file."""

    version: str
    mode: str
    scenario: Scenario | Scenario3d
    options: SolveOptions = field(default_factory=SolveOptions)


def parse_scenario(text: str) -> ScenarioFile:
    """Parse and validate the JSON text of a scenario file."""
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as err:
        raise InvalidScenario(f"Not valid JSON: {err}") from err
    return parse_data(raw)


def parse_data(raw: Any) -> ScenarioFile:
    """Validate an already decoded scenario file."""
    data = _validate(FILE_SCHEMA, raw)
    mode = data["mode"]
    if mode == MODE_3D:
        scenario: Scenario | Scenario3d = _build_3d(
            _validate(SCENARIO_3D_SCHEMA, data["scenario"], "scenario")
        )
    else:
        scenario = _build_line(_validate(LINE_SCHEMA, data["scenario"], "scenario"))

    options = data["options"]
    _LOGGER.debug("Parsed %s scenario with %s UAVs", mode, len(scenario.uavs))
    return ScenarioFile(
        version=data["version"],
        mode=mode,
        scenario=scenario,
        options=SolveOptions(
            epsilon=options["epsilon"],
            kappa=options["kappa"],
            grid=GridSpec(dx=options["grid"]["dx"], dh=options["grid"]["dh"]),
        ),
    )


def serialize(scenario_file: ScenarioFile) -> dict[str, Any]:
    """Return the JSON-ready form of a scenario file."""
    scenario = scenario_file.scenario
    body: dict[str, Any] = {
        "length": scenario.length,
        "nfzs": [[zone.left, zone.right] for zone in scenario.nfzs],
        "model": _serialize_model(scenario.model),
    }
    if isinstance(scenario, Scenario3d):
        body["station_left"] = list(scenario.station_left)
        body["station_right"] = list(scenario.station_right)
        body["left_uavs"] = [
            {"id": uav.id, "battery": uav.battery} for uav in scenario.left_uavs
        ]
        body["right_uavs"] = [
            {"id": uav.id, "battery": uav.battery} for uav in scenario.right_uavs
        ]
    else:
        body["uavs"] = [
            {"id": uav.id, "x": uav.x, "y": uav.y, "battery": uav.battery}
            for uav in scenario.uavs
        ]

    options = scenario_file.options
    return {
        "version": scenario_file.version,
        "mode": scenario_file.mode,
        "scenario": body,
        "options": {
            "epsilon": options.epsilon,
            "kappa": options.kappa,
            "grid": {"dx": options.grid.dx, "dh": options.grid.dh},
        },
    }


def _validate(schema: vol.Schema, data: Any, prefix: str = "") -> dict[str, Any]:
    try:
        return schema(data)
    except vol.MultipleInvalid as err:
        error = err.errors[0]
        path = ".".join(str(part) for part in [prefix, *error.path] if part != "")
        raise InvalidScenario(f"{path or '<root>'}: {error.msg}") from err


def _serialize_model(model: CoverageModel) -> dict[str, float]:
    return {
        "alpha": model.alpha,
        "beta": model.beta,
        "h_star": model.h_star,
        "w": model.w,
        "c": model.c,
    }


def _build_model(data: dict[str, Any]) -> CoverageModel:
    c = DEFAULT_C
    if "airframe" in data:
        if "c" in data:
            raise InvalidScenario("scenario.model: give either airframe or c")
        c = AIRFRAME_PRESETS[data["airframe"]]
    try:
        return CoverageModel(
            alpha=data["alpha"],
            beta=data["beta"],
            h_star=data["h_star"],
            w=data["w"],
            c=data.get("c", c),
        )
    except DomainError as err:
        raise InvalidScenario(f"scenario.model: {err}") from err


def _build_nfzs(data: dict[str, Any]) -> tuple[Nfz, ...]:
    pairs = sorted(data["nfzs"])
    if pairs and data["length"] <= 0:
        raise InvalidScenario("scenario.nfzs: no-fly zones need a positive length")
    for index, (left, right) in enumerate(pairs):
        if not left < right:
            raise InvalidScenario(f"scenario.nfzs.{index}: zone [{left}, {right}] is empty")
    for index, (before, after) in enumerate(zip(pairs, pairs[1:]), start=1):
        if after[0] < before[1]:
            raise InvalidScenario(
                f"scenario.nfzs.{index}: zone {after} overlaps zone {before}"
            )
    return tuple(Nfz(left, right) for left, right in pairs)


def _build_line(data: dict[str, Any]) -> Scenario:
    if "uavs" in data:
        uavs = tuple(
            UavSpec(id=uav["id"], x=uav["x"], y=uav["y"], battery=uav["battery"])
            for uav in data["uavs"]
        )
    elif "n" in data:
        uavs = tuple(
            UavSpec(id=i, x=data["station"], battery=data["battery"])
            for i in range(data["n"])
        )
    else:
        raise InvalidScenario("scenario: give either uavs or n")

    return Scenario(
        length=data["length"],
        nfzs=_build_nfzs(data),
        uavs=uavs,
        model=_build_model(data["model"]),
    )


def _build_3d(data: dict[str, Any]) -> Scenario3d:
    left_station = tuple(data["station_left"])
    right_station = tuple(data["station_right"])
    left = _station_fleet(data, "left", left_station, 0)
    right = _station_fleet(data, "right", right_station, len(left))
    return Scenario3d(
        length=data["length"],
        station_left=left_station,
        station_right=right_station,
        left_uavs=left,
        right_uavs=right,
        model=_build_model(data["model"]),
        nfzs=_build_nfzs(data),
    )


def _station_fleet(
    data: dict[str, Any], side: str, station: tuple[float, float], first_id: int
) -> tuple[UavSpec, ...]:
    x, y = station
    if f"{side}_uavs" in data:
        return tuple(
            UavSpec(id=uav["id"], x=x, y=y, battery=uav["battery"])
            for uav in data[f"{side}_uavs"]
        )
    return tuple(
        UavSpec(id=first_id + i, x=x, y=y, battery=data["battery"])
        for i in range(data.get(f"n_{side}", 0))
    )
