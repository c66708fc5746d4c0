"""Inertia-dependent stochastic unit commitment and the economic value of inertia."""
from .domain import (
    GeneratorClass, PowerSystem, ScenarioTree, SchedulePoint, SystemParams, TreeNode, ValidationError,
    gb_system, validate_fleet,
)

__version__ = "0.1.0"

__all__ = [
    "GeneratorClass", "PowerSystem", "ScenarioTree", "SchedulePoint", "SystemParams", "TreeNode",
    "ValidationError", "gb_system", "validate_fleet", "__version__",
]
