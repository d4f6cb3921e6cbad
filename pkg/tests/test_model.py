"""Tests for the physical model and shared types."""

from __future__ import annotations

import dataclasses
import math

import numpy as np
import pytest

from swarmdeploy.model import (
    CoverageModel,
    DomainError,
    InfeasibleError,
    InvalidScenario,
    Nfz,
    Scenario,
    Scenario3d,
    ToleranceError,
    UavSpec,
    UncoverableError,
    audit,
    ground,
    inverse_radius,
    leftover,
    place,
    radius,
    threshold_search,
    travel_distance,
)


@pytest.mark.parametrize(
    ("h", "expected"), [(1.0, 1.0), (0.0, 0.0), (2.0, 1.4142136)]
)
def test_radius(model: CoverageModel, h: float, expected: float) -> None:
    """Radius follows alpha * h**beta."""
    assert radius(model, h) == pytest.approx(expected, abs=1e-7)


@pytest.mark.parametrize("h", [-0.1, 2.5])
def test_radius_outside_domain(model: CoverageModel, h: float) -> None:
    """Altitudes outside [0, h*] are rejected."""
    with pytest.raises(DomainError):
        radius(model, h)


def test_radius_increasing_and_concave(model: CoverageModel) -> None:
    """Radius grows with altitude at a shrinking rate."""
    values = np.array([radius(model, h) for h in np.linspace(0.0, 2.0, 41)])
    steps = np.diff(values)
    assert np.all(steps > 0)
    assert np.all(np.diff(steps) < 0)


@pytest.mark.parametrize(("r", "expected"), [(1.0, 1.0), (1.4142136, 2.0)])
def test_inverse_radius(model: CoverageModel, r: float, expected: float) -> None:
    """The inverse clamps to the turning point."""
    assert inverse_radius(model, r) == pytest.approx(expected, abs=1e-6)
    assert inverse_radius(model, r) <= model.h_star


def test_inverse_radius_too_large(model: CoverageModel) -> None:
    """No altitude reaches a radius beyond r(h*)."""
    with pytest.raises(UncoverableError):
        inverse_radius(model, 10.0)


def test_inverse_round_trip(model: CoverageModel) -> None:
    """The inverse undoes the radius."""
    for h in np.linspace(0.05, 2.0, 20):
        assert inverse_radius(model, radius(model, h)) == pytest.approx(h, rel=1e-9)


@pytest.mark.parametrize(
    ("start", "end", "h", "expected"),
    [
        ((0.0, 0.0), (5.0, 0.0), 1.0, 2.0),
        ((0.0, 3.0), (4.0, 0.0), 1.0, 2.0),
        ((1.0, 1.0), (1.0, 1.0), 0.0, 0.0),
    ],
)
def test_travel_distance(
    model: CoverageModel,
    start: tuple[float, float],
    end: tuple[float, float],
    h: float,
    expected: float,
) -> None:
    """Horizontal flight is weighted by w, ascent counts fully."""
    assert travel_distance(model, *start, *end, h) == pytest.approx(expected)
    assert travel_distance(model, *end, *start, h) == pytest.approx(expected)


@pytest.mark.parametrize(
    ("distance", "expected"), [(2.0, 736.8), (0.0, 780.0), (1.2, 754.08)]
)
def test_leftover(model: CoverageModel, distance: float, expected: float) -> None:
    """Leftover subtracts c per normalized km."""
    assert leftover(model, 780.0, distance) == pytest.approx(expected)


@pytest.mark.parametrize(
    "kwargs",
    [{"alpha": 0}, {"beta": 1.0}, {"beta": 0}, {"h_star": -1}, {"w": 1.0}, {"c": 0}],
)
def test_model_validation(kwargs: dict[str, float]) -> None:
    """Parameters outside their ranges raise DomainError."""
    with pytest.raises(DomainError):
        CoverageModel(**kwargs)


def test_airframe_presets() -> None:
    """Airframes only change the energy coefficient."""
    assert CoverageModel.for_airframe("dji-s1000").c == 10.8
    assert CoverageModel.for_airframe("md4-3000", h_star=8.0).h_star == 8.0
    with pytest.raises(DomainError):
        CoverageModel.for_airframe("glider")


def test_scenario_validation() -> None:
    """Malformed scenarios raise InvalidScenario."""
    uav = UavSpec(id=0, x=0.0, battery=780.0)
    with pytest.raises(InvalidScenario):
        Scenario(-1.0, (), (uav,))
    with pytest.raises(InvalidScenario):
        Scenario(2.0, (), ())
    with pytest.raises(InvalidScenario):
        Scenario(2.0, (), (uav, uav))
    with pytest.raises(InvalidScenario):
        Scenario(2.0, (), (UavSpec(id=0, x=0.0, battery=0.0),))
    with pytest.raises(InvalidScenario):
        Scenario(5.0, (Nfz(1.0, 3.0), Nfz(2.0, 4.0)), (uav,))


def test_touching_nfzs_are_allowed() -> None:
    """Zones may share an edge."""
    uav = UavSpec(id=0, x=0.0, battery=780.0)
    scenario = Scenario(5.0, (Nfz(1.0, 2.0), Nfz(2.0, 3.0)), (uav,))
    assert len(scenario.nfzs) == 2


def test_nfz_is_open() -> None:
    """Edges are allowed positions."""
    zone = Nfz(1.0, 2.0)
    assert zone.contains(1.5)
    assert not zone.contains(1.0)
    assert not zone.contains(2.0)


def test_threshold_search() -> None:
    """The search returns an accepted value next to the boundary."""
    found = threshold_search(lambda value: value <= 3.5, 0.0, 10.0)
    assert found <= 3.5
    assert found == pytest.approx(3.5, abs=1e-8)
    assert threshold_search(lambda value: True, 0.0, 10.0) == 10.0
    with pytest.raises(InfeasibleError):
        threshold_search(lambda value: False, 0.0, 10.0)


def test_threshold_search_flickering_predicate() -> None:
    """A predicate flipping below its boundary still yields an accepted value."""
    calls: list[tuple[float, bool]] = []

    def predicate(value: float) -> bool:
        accepted = value <= 3.5 and round(value * 1e4) % 3 != 1
        calls.append((value, accepted))
        return accepted

    found = threshold_search(predicate, 0.0, 10.0)
    assert (found, True) in calls
    assert found <= 3.5
    assert found == max(value for value, accepted in calls if accepted)


def test_scenario_3d_uavs_start_at_their_station() -> None:
    """Every UAV of a two-station scenario starts at its own station."""
    left = UavSpec(id=0, x=0.0, y=0.5, battery=780.0)
    right = UavSpec(id=1, x=4.0, y=0.0, battery=780.0)
    scenario = Scenario3d(4.0, (0.0, 0.5), (4.0, 0.0), (left,), (right,))
    assert scenario.uavs == (left, right)
    with pytest.raises(InvalidScenario, match="UAV 0"):
        Scenario3d(4.0, (0.0, 0.0), (4.0, 0.0), (left,), (right,))
    with pytest.raises(InvalidScenario, match="UAV 1"):
        Scenario3d(
            4.0,
            (0.0, 0.5),
            (4.0, 0.0),
            (left,),
            (dataclasses.replace(right, x=3.0),),
        )


def test_place_and_ground(model: CoverageModel) -> None:
    """Placements go through the model functions."""
    uav = UavSpec(id=3, x=0.0, battery=780.0)
    placement = place(model, uav, 1.0, 0.0, 1.0)
    assert placement.distance == pytest.approx(1.2)
    assert placement.leftover == pytest.approx(754.08)
    assert placement.radius == pytest.approx(1.0)
    assert placement.as_dict()["id"] == 3

    grounded = ground(uav)
    assert not grounded.deployed
    assert grounded.leftover == 780.0
    assert grounded.altitude == grounded.radius == grounded.distance == 0.0


def test_audit(model: CoverageModel) -> None:
    """Audits accept a valid deployment and reject breaches."""
    uav = UavSpec(id=0, x=0.0, battery=780.0)
    good = [place(model, uav, 1.0, 0.0, 1.0)]
    audit(good, [uav], 2.0, (), model)

    with pytest.raises(ToleranceError):
        audit(good, [uav], 2.5, (), model)
    with pytest.raises(ToleranceError):
        audit(good, [uav], 2.0, (Nfz(0.5, 1.5),), model)

    tampered = [dataclasses.replace(ground(uav), leftover=700.0)]
    with pytest.raises(ToleranceError):
        audit(tampered, [uav], 0.0, (), model)


def test_audit_offset_chord(model: CoverageModel) -> None:
    """A UAV beside the line covers its chord only."""
    uav = UavSpec(id=0, x=0.0, y=0.6, battery=780.0)
    placement = place(model, uav, 0.8, 0.6, 1.0)
    audit([placement], [uav], 1.6, (), model)
    with pytest.raises(ToleranceError):
        audit([placement], [uav], 1.8, (), model)
    assert math.isclose(placement.distance, 0.2 * 0.8 + 1.0)
