"""Tests for the exhaustive grid oracle."""

from __future__ import annotations

from collections.abc import Callable

import pytest

from swarmdeploy.model import (
    CoverageModel,
    InfeasibleError,
    InstanceTooLarge,
    Nfz,
    Scenario,
    UavSpec,
    audit,
)
from swarmdeploy.oracle import (
    GridSpec,
    brute_force,
    ground_grid,
    partition_scenario,
    slack,
)

MakeColocated = Callable[..., Scenario]


def test_slack(model: CoverageModel) -> None:
    """Slack is the energy of one grid step horizontally and vertically."""
    assert slack(model, GridSpec(dx=1e-3, dh=1e-3)) == pytest.approx(21.6 * 1.2e-3)


def test_ground_grid_skips_zones() -> None:
    """Grid positions avoid the inside of zones but keep their edges."""
    xs = ground_grid(
        UavSpec(id=0, x=0.0, battery=780.0), 2.0, (Nfz(0.95, 1.05),), GridSpec(dx=0.1)
    )
    assert 0.95 in xs
    assert 1.05 in xs
    assert not any(0.95 < x < 1.05 for x in xs)
    assert xs[0] == 0.0
    assert xs[-1] == 2.0


def test_single_uav(make_colocated: MakeColocated) -> None:
    """The grid lands just under the closed form."""
    report = brute_force(make_colocated(2.0, 1))
    assert report.algorithm == "oracle"
    assert report.bhat <= 754.08 + 1e-6
    assert report.bhat == pytest.approx(754.08, abs=0.03)
    assert report.diagnostics["slack"] == pytest.approx(21.6 * 1.2e-3)


def test_two_uavs(make_colocated: MakeColocated) -> None:
    """Two colocated UAVs match the equal-leftover value."""
    report = brute_force(make_colocated(2.0, 2))
    assert report.bhat == pytest.approx(769.632, abs=0.1)
    audit(report.placements, make_colocated(2.0, 2).uavs, 2.0, (), CoverageModel())


def test_respects_nfz(make_colocated: MakeColocated) -> None:
    """A zone over the middle pushes the UAV to its edge."""
    scenario = make_colocated(2.0, 1, nfzs=[(0.9, 1.1)])
    report = brute_force(scenario)
    assert not any(Nfz(0.9, 1.1).contains(p.x_final) for p in report.placements)
    assert report.bhat == pytest.approx(780.0 - 21.6 * (0.2 * 0.9 + 1.21), abs=0.03)
    audit(report.placements, scenario.uavs, 2.0, scenario.nfzs, scenario.model)


def test_zero_length(make_colocated: MakeColocated) -> None:
    """Nobody flies over an empty target."""
    report = brute_force(make_colocated(0.0, [780.0, 750.0]))
    assert report.bhat == 750.0
    assert not any(placement.deployed for placement in report.placements)


def test_too_many_uavs(make_colocated: MakeColocated) -> None:
    """Large fleets are refused."""
    with pytest.raises(InstanceTooLarge):
        brute_force(make_colocated(4.0, 5))


def test_too_fine_grid(make_colocated: MakeColocated) -> None:
    """Grids with too many positions are refused."""
    with pytest.raises(InstanceTooLarge):
        brute_force(make_colocated(2.0, 1), GridSpec(dx=1e-7))


def test_partition_scenario_layout() -> None:
    """All UAVs share the middle, flanked by two zones."""
    scenario = partition_scenario([1, 1, 2], 700.0)
    assert scenario.length == pytest.approx(4.5)
    assert len(scenario.uavs) == 4
    assert {uav.x for uav in scenario.uavs} == {2.25}
    assert scenario.nfzs == (Nfz(1.75, 2.25), Nfz(2.25, 2.75))
    assert scenario.model.h_star == pytest.approx(1.0)


@pytest.mark.parametrize("ints", [[1, 1, 2], [2, 2]])
def test_partition_yes_instances(ints: list[int]) -> None:
    """Splittable integers reach the target leftover."""
    scenario = partition_scenario(ints, 700.0)
    report = brute_force(scenario)
    assert report.bhat >= 700.0 - slack(scenario.model, GridSpec())


def test_partition_no_instance() -> None:
    """An odd total cannot be split, so the target is missed."""
    scenario = partition_scenario([1], 700.0)
    try:
        report = brute_force(scenario)
    except InfeasibleError:
        return
    assert report.bhat < 700.0 - slack(scenario.model, GridSpec())
