"""Tests for the bench figures and their coordinator."""

from __future__ import annotations

import io
import math
import time

import pytest

from swarmdeploy.bench import (
    FIGURES_BY_KEY,
    BenchOptions,
    kappa_instance,
    run_figure,
    split_scenario,
    write_csv,
)
from swarmdeploy.coordinator import BenchCoordinator, BenchFailed


def test_kappa_instance_is_seeded() -> None:
    """The same seed and instance build the same fleet."""
    first = kappa_instance(0, 3)
    assert first == kappa_instance(0, 3)
    assert first != kappa_instance(1, 3)
    positions = [uav.x for uav in first.uavs]
    assert positions == sorted(positions)
    assert all(700.0 <= uav.battery <= 900.0 for uav in first.uavs)


def test_split_scenario() -> None:
    """Ids run across both stations."""
    scenario = split_scenario(5, 2)
    assert [uav.id for uav in scenario.left_uavs] == [0, 1]
    assert [uav.id for uav in scenario.right_uavs] == [2, 3, 4]
    assert {uav.x for uav in scenario.right_uavs} == {20.0}


def test_write_csv() -> None:
    """Rows follow the figure's header."""
    stream = io.StringIO()
    write_csv(FIGURES_BY_KEY["10"], [{"left_count": 1, "bhat": 700.5}], stream)
    assert stream.getvalue() == "left_count,bhat\n1,700.5\n"


def test_run_split_figure() -> None:
    """An undersized fleet records every split as infeasible."""
    rows = run_figure(FIGURES_BY_KEY["10"], BenchOptions(n=4, epsilon=1e-2, workers=2))
    assert [row["left_count"] for row in rows] == [1, 2, 3]
    assert all(math.isnan(row["bhat"]) for row in rows)


def test_run_kappa_figure_point() -> None:
    """Larger kappa never lowers an instance's leftover."""
    figure = FIGURES_BY_KEY["9"]
    options = BenchOptions(epsilon=1e-2)
    rows = [figure.row_fn(options, (0, kappa)) for kappa in (0, 1, 2)]
    values = [row["bhat"] for row in rows]
    if not any(math.isnan(value) for value in values):
        assert values == sorted(values)
        assert [row["orders"] for row in rows] == [1, 1, 16]


def test_coordinator_keeps_point_order() -> None:
    """Rows come back in point order whatever finishes first."""

    def row(point: int) -> dict[str, int]:
        time.sleep(0.01 * (5 - point))
        return {"point": point}

    rows = BenchCoordinator("order", concurrency=3).run(list(range(5)), row)
    assert [item["point"] for item in rows] == list(range(5))


def test_coordinator_timeout() -> None:
    """A point running past its timeout fails the bench without waiting for it."""
    coordinator = BenchCoordinator("slow", concurrency=1, timeout=0.05)
    started = time.perf_counter()
    with pytest.raises(BenchFailed):
        coordinator.run([0, 1, 2], lambda point: time.sleep(2.0) or {})
    assert time.perf_counter() - started < 1.0


def test_colocated_figure_trend() -> None:
    """More UAVs keep more, and the zone never helps."""
    rows = run_figure(FIGURES_BY_KEY["7"], BenchOptions(n_max=16, workers=2))
    assert [row["n"] for row in rows] == list(range(8, 17))
    plain = [row["bhat_no_nfz"] for row in rows if not math.isnan(row["bhat_no_nfz"])]
    assert plain == sorted(plain)
    for row in rows:
        if not math.isnan(row["bhat_nfz"]) and not math.isnan(row["bhat_no_nfz"]):
            assert row["bhat_nfz"] <= row["bhat_no_nfz"] + 1e-6
