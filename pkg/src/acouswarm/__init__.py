"""Acoustic power delivery to swarms of piston-harvesting microscopic robots in tissue."""

from .errors import ConvergenceError, ScenarioError, SpringRangeError, ValidityError
from .scenario import Scenario, load_scenario, validate_scenario

__all__ = [
    "ConvergenceError",
    "Scenario",
    "ScenarioError",
    "SpringRangeError",
    "ValidityError",
    "load_scenario",
    "validate_scenario",
]
