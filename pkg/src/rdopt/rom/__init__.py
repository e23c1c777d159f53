"""Reduced-order modeling: Schwartz-form identification, POD projection,
time integration, and the 1-D thermal finite-difference oracle."""

from .fileio import load_snapshots, load_trajectory, save_snapshots, save_trajectory
from .heat import heat_fd_model
from .pod import (
    ContinuousStateSpace,
    FirstOrderSystem,
    PodBasis,
    SnapshotMatrix,
    pod_modes,
    pod_reduce,
    simulate_continuous,
    simulate_continuous_states,
)
from .schwartz import (
    DiscreteStateSpace,
    IdentifyConfig,
    IdentifyResult,
    SchwartzParams,
    build_schwartz_system,
    identification_objective,
    identify,
    make_identification_objective,
    simulate_discrete,
    simulate_discrete_states,
)

__all__ = [
    "SchwartzParams",
    "DiscreteStateSpace",
    "build_schwartz_system",
    "simulate_discrete",
    "simulate_discrete_states",
    "identification_objective",
    "make_identification_objective",
    "IdentifyConfig",
    "IdentifyResult",
    "identify",
    "SnapshotMatrix",
    "PodBasis",
    "ContinuousStateSpace",
    "FirstOrderSystem",
    "pod_modes",
    "pod_reduce",
    "simulate_continuous",
    "simulate_continuous_states",
    "heat_fd_model",
    "save_snapshots",
    "load_snapshots",
    "save_trajectory",
    "load_trajectory",
]
