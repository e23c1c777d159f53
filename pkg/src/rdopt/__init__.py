"""rdopt: robust design optimization at desk scale.

Multi-objective evolutionary and local optimizers, a Gaussian-process
surrogate evaluation manager, reduced-order modeling tools (discrete
LTI identification and POD projection), a 1-D thermal finite-difference
oracle, a semi-analytical coil-field benchmark, and gradient-norm
robustness ranking of Pareto sets.
"""

from ._kernels import BACKEND as KERNEL_BACKEND
from .core import (
    Individual,
    Parameter,
    Population,
    ProblemSpec,
    Provenance,
    ResultsLog,
    denormalize,
    dominates,
    iter_log_records,
    normalize,
    pareto_front,
    rosenbrock_problem,
    sphere_problem,
)

__version__ = "0.1.0"

__all__ = [
    "KERNEL_BACKEND",
    "Parameter",
    "ProblemSpec",
    "Individual",
    "Population",
    "Provenance",
    "ResultsLog",
    "dominates",
    "pareto_front",
    "normalize",
    "denormalize",
    "iter_log_records",
    "sphere_problem",
    "rosenbrock_problem",
    "__version__",
]
