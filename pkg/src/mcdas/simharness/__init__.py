"""Scenario simulation, crash-zone prediction, Monte Carlo batches and export."""

from .config import ScenarioConfig, ScenarioError, VehicleInit, load_scenario, load_snapshot
from .engine import (
    CrashZone,
    ParkingRun,
    TickRecord,
    choose_side,
    crash_zone_from_states,
    predict_crash_zone,
    run_parking,
    run_scenario,
    true_closest_approach,
)
from .export import RECORD_COLUMNS, export, read_json
from .montecarlo import MonteCarloReport, RunSummary, monte_carlo

__all__ = [
    "CrashZone",
    "MonteCarloReport",
    "ParkingRun",
    "RECORD_COLUMNS",
    "RunSummary",
    "ScenarioConfig",
    "ScenarioError",
    "TickRecord",
    "VehicleInit",
    "choose_side",
    "crash_zone_from_states",
    "export",
    "load_scenario",
    "load_snapshot",
    "monte_carlo",
    "predict_crash_zone",
    "read_json",
    "run_parking",
    "run_scenario",
    "true_closest_approach",
]
