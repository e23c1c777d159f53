"""Coil-field benchmark: semi-analytical turn fields and the
field-uniformity objectives F1/F2."""

from .field import MU0, Turn, field_map, quad_phi, total_field, turn_field
from .benchmark import (
    BenchmarkConfig,
    ControlRegion,
    build_turns,
    control_rectangle,
    evaluate_objectives,
    objective_f1,
    objective_f2,
    team_problem,
)

__all__ = [
    "MU0",
    "Turn",
    "quad_phi",
    "turn_field",
    "total_field",
    "field_map",
    "ControlRegion",
    "BenchmarkConfig",
    "control_rectangle",
    "build_turns",
    "evaluate_objectives",
    "objective_f1",
    "objective_f2",
    "team_problem",
]
