"""Energy-optimal deployment of UAV swarms covering a target line."""

from __future__ import annotations

from .colocated import refine_with_nfz, solve_colocated, solve_equal_leftover
from .deploy3d import check_feasible_3d, solve_3d
from .linedeploy import check_feasible, search_bounds, solve_line
from .model import (
    CoverageModel,
    DeploymentError,
    InfeasibleError,
    Nfz,
    Placement,
    Scenario,
    Scenario3d,
    SolveReport,
    SolverSettings,
    UavSpec,
)
from .oracle import GridSpec, brute_force, partition_scenario
from .permheur import enumerate_orders, solve_kappa
from .schema import ScenarioFile, parse_scenario, serialize

__all__ = [
    "CoverageModel",
    "DeploymentError",
    "GridSpec",
    "InfeasibleError",
    "Nfz",
    "Placement",
    "Scenario",
    "Scenario3d",
    "ScenarioFile",
    "SolveReport",
    "SolverSettings",
    "UavSpec",
    "brute_force",
    "check_feasible",
    "check_feasible_3d",
    "enumerate_orders",
    "parse_scenario",
    "partition_scenario",
    "refine_with_nfz",
    "search_bounds",
    "serialize",
    "solve_3d",
    "solve_colocated",
    "solve_equal_leftover",
    "solve_kappa",
    "solve_line",
]
