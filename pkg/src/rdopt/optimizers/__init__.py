"""Native optimization algorithms pluggable against any ProblemSpec."""

from .channel import EvaluationChannel
from .nelder_mead import NelderMeadConfig, NelderMeadResult, nelder_mead_run
from .nsga2 import (
    Nsga2Config,
    Nsga2Result,
    crowding_distance,
    fast_non_dominated_sort,
    nsga2_run,
    polynomial_mutation,
    sbx_crossover,
    slot_rng,
)
from .pso import PsoConfig, PsoResult, pso_run

__all__ = [
    "EvaluationChannel",
    "Nsga2Config",
    "Nsga2Result",
    "fast_non_dominated_sort",
    "crowding_distance",
    "sbx_crossover",
    "polynomial_mutation",
    "slot_rng",
    "nsga2_run",
    "PsoConfig",
    "PsoResult",
    "pso_run",
    "NelderMeadConfig",
    "NelderMeadResult",
    "nelder_mead_run",
]
