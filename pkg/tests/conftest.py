"""Fixtures for swarmdeploy tests."""

from __future__ import annotations

from collections.abc import Callable, Sequence

import pytest

from swarmdeploy.const import DEFAULT_BATTERY
from swarmdeploy.model import CoverageModel, Nfz, Scenario, UavSpec


@pytest.fixture
def model() -> CoverageModel:
    """Return the default coverage model."""
    return CoverageModel()


@pytest.fixture
def make_colocated() -> Callable[..., Scenario]:
    """Return a factory for fleets sharing one station."""

    def make(
        length: float,
        batteries: Sequence[float] | int,
        station: float = 0.0,
        nfzs: Sequence[tuple[float, float]] = (),
        model: CoverageModel | None = None,
    ) -> Scenario:
        if isinstance(batteries, int):
            batteries = [DEFAULT_BATTERY] * batteries
        return Scenario(
            length=length,
            nfzs=tuple(Nfz(left, right) for left, right in nfzs),
            uavs=tuple(
                UavSpec(id=i, x=station, battery=battery)
                for i, battery in enumerate(batteries)
            ),
            model=model or CoverageModel(),
        )

    return make


@pytest.fixture
def make_line() -> Callable[..., Scenario]:
    """Return a factory for UAVs spread along the line."""

    def make(
        length: float,
        positions: Sequence[float],
        batteries: Sequence[float] | None = None,
        nfzs: Sequence[tuple[float, float]] = (),
        model: CoverageModel | None = None,
    ) -> Scenario:
        batteries = batteries or [DEFAULT_BATTERY] * len(positions)
        return Scenario(
            length=length,
            nfzs=tuple(Nfz(left, right) for left, right in nfzs),
            uavs=tuple(
                UavSpec(id=i, x=x, battery=battery)
                for i, (x, battery) in enumerate(zip(positions, batteries))
            ),
            model=model or CoverageModel(),
        )

    return make
