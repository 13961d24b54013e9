"""Midvehicle collision detection and avoidance simulator."""

from .decision import Mode, SituationSnapshot, ThresholdConfig, select_mode
from .errors import FilterDivergenceError, InfeasibleGapError, SimulationError, ValidationError

__version__ = "0.1.0"

__all__ = [
    "FilterDivergenceError",
    "InfeasibleGapError",
    "Mode",
    "SimulationError",
    "SituationSnapshot",
    "ThresholdConfig",
    "ValidationError",
    "select_mode",
]
