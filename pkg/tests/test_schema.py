"""Tests for scenario file parsing."""

from __future__ import annotations

import json
from typing import Any

import pytest

from swarmdeploy.model import InvalidScenario, Nfz, Scenario, Scenario3d
from swarmdeploy.schema import parse_data, parse_scenario, serialize


def _line_file(**scenario: Any) -> dict[str, Any]:
    return {"mode": "line", "scenario": {"length": 2.0, "n": 2, **scenario}}


def test_defaults() -> None:
    """Missing fields take their documented defaults."""
    parsed = parse_data(_line_file())
    assert parsed.version == "1"
    assert parsed.options.epsilon == 1e-3
    assert parsed.options.kappa == 0
    assert parsed.options.grid.dx == 1e-3
    scenario = parsed.scenario
    assert isinstance(scenario, Scenario)
    assert [(uav.id, uav.x, uav.battery) for uav in scenario.uavs] == [
        (0, 0.0, 780.0),
        (1, 0.0, 780.0),
    ]
    assert scenario.model.c == 21.6
    assert scenario.model.h_star == 2.0


def test_explicit_uavs_and_nfzs() -> None:
    """Zones are sorted and UAVs keep their fields."""
    parsed = parse_data(
        {
            "mode": "kappa",
            "scenario": {
                "length": 20,
                "nfzs": [[14, 15], [10, 13]],
                "uavs": [{"id": 7, "x": 3, "battery": 800}],
            },
            "options": {"kappa": 2, "epsilon": 0.01},
        }
    )
    assert parsed.scenario.nfzs == (Nfz(10.0, 13.0), Nfz(14.0, 15.0))
    assert parsed.scenario.uavs[0].battery == 800.0
    assert parsed.options.kappa == 2


def test_round_trip_line() -> None:
    """Serializing a parsed file parses back to the same file."""
    parsed = parse_data(
        _line_file(nfzs=[[0.5, 0.7]], model={"h_star": 8.0}, station=1.0)
    )
    assert parse_data(serialize(parsed)) == parsed


def test_round_trip_3d() -> None:
    """Two-station files survive serialization."""
    parsed = parse_data(
        {
            "mode": "3d",
            "scenario": {
                "length": 20,
                "station_left": [0, 1],
                "station_right": [20, -1],
                "n_left": 2,
                "n_right": 3,
            },
        }
    )
    assert parse_data(json.loads(json.dumps(serialize(parsed)))) == parsed


def test_3d_ids_continue() -> None:
    """Right-station ids follow the left-station ids."""
    parsed = parse_data(
        {
            "mode": "3d",
            "scenario": {
                "length": 20,
                "station_left": [0, 0],
                "station_right": [20, 0],
                "n_left": 2,
                "n_right": 2,
            },
        }
    )
    scenario = parsed.scenario
    assert isinstance(scenario, Scenario3d)
    assert [uav.id for uav in scenario.left_uavs] == [0, 1]
    assert [uav.id for uav in scenario.right_uavs] == [2, 3]
    assert {(uav.x, uav.y) for uav in scenario.right_uavs} == {(20.0, 0.0)}


def test_airframe_sets_c() -> None:
    """An airframe picks the energy coefficient."""
    parsed = parse_data(_line_file(model={"airframe": "dji-s1000"}))
    assert parsed.scenario.model.c == 10.8


def test_airframe_and_c_conflict() -> None:
    """An airframe and an explicit c cannot both be given."""
    with pytest.raises(InvalidScenario, match="airframe"):
        parse_data(_line_file(model={"airframe": "dji-s1000", "c": 12}))


def test_unknown_mode() -> None:
    """Unknown modes list the valid ones."""
    with pytest.raises(InvalidScenario, match="expected one of colocated"):
        parse_data({"mode": "teleport", "scenario": {"length": 1, "n": 1}})


def test_error_path() -> None:
    """Errors name the offending field."""
    raw = {
        "mode": "line",
        "scenario": {"length": 2, "uavs": [{"id": 0, "x": 0, "battery": -1}]},
    }
    with pytest.raises(InvalidScenario, match=r"^scenario\.uavs\.0\.battery: "):
        parse_data(raw)


def test_uavs_and_n_are_exclusive() -> None:
    """A fleet is either listed or counted."""
    with pytest.raises(InvalidScenario):
        parse_data(_line_file(uavs=[{"id": 0, "x": 0}]))


def test_missing_fleet() -> None:
    """A line scenario needs UAVs."""
    with pytest.raises(InvalidScenario):
        parse_data({"mode": "line", "scenario": {"length": 2}})


def test_overlapping_nfzs() -> None:
    """Overlapping zones are refused."""
    with pytest.raises(InvalidScenario, match="overlaps"):
        parse_data(_line_file(length=20, nfzs=[[10, 13], [12, 15]]))


def test_empty_nfz() -> None:
    """Zones need a positive width."""
    with pytest.raises(InvalidScenario, match="empty"):
        parse_data(_line_file(nfzs=[[1, 1]]))


def test_nfzs_need_length() -> None:
    """Zones make no sense on an empty target."""
    with pytest.raises(InvalidScenario, match="positive length"):
        parse_data(_line_file(length=0, nfzs=[[0.1, 0.2]]))


@pytest.mark.parametrize(
    "model", [{"beta": 1.5}, {"w": 0}, {"alpha": -1}, {"airframe": "glider"}]
)
def test_bad_model(model: dict[str, Any]) -> None:
    """Model parameters are range checked."""
    with pytest.raises(InvalidScenario, match=r"^scenario\.model"):
        parse_data(_line_file(model=model))


def test_bad_json() -> None:
    """Text that is not JSON is an invalid scenario."""
    with pytest.raises(InvalidScenario, match="JSON"):
        parse_scenario("{mode: line")


def test_bad_options() -> None:
    """Epsilon lies strictly between 0 and 1."""
    raw = {**_line_file(), "options": {"epsilon": 1.5}}
    with pytest.raises(InvalidScenario, match=r"^options\.epsilon: "):
        parse_data(raw)
