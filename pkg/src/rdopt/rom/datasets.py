"""Deterministic synthetic datasets for identification and POD demos."""

from __future__ import annotations

import numpy as np

from .heat import heat_fd_model
from .pod import SnapshotMatrix, pod_reduce, simulate_continuous_states
from .schwartz import SchwartzParams, build_schwartz_system, simulate_discrete

__all__ = [
    "synthetic_identification_dataset",
    "heat_step_dataset",
    "DEFAULT_HEAT_MODEL",
]

# 50-node rod used by the bundled demos and the acceptance checks
DEFAULT_HEAT_MODEL = dict(n_nodes=50, conductivity=50.0, density=7800.0,
                          heat_capacity=450.0, dx=0.002, input_node=0,
                          probe_nodes=(10, 25, 40))


def synthetic_identification_dataset(n_samples: int = 400):
    """Step response of a known fourth-order Schwartz system.

    Returns (t, u, y, params): the generating coefficients are included
    so recovery can be scored.
    """
    params = SchwartzParams(delta=np.array([0.9, 0.7, -0.4, 0.2]),
                            gamma=np.array([0.5, -0.3, 0.2, 0.1]))
    u = np.ones(n_samples)
    y = simulate_discrete(build_schwartz_system(params), u)
    t = np.arange(n_samples, dtype=float)
    return t, u, y, params


def heat_step_dataset(n_steps: int = 200, t_end: float = 2000.0,
                      power: float = 200.0, **model_kwargs):
    """Step response of the 1-D heat oracle.

    Returns (sys, t, u, snap, outputs): full state snapshots (one per
    time step, columns ordered in time) plus the probe outputs.
    """
    kw = dict(DEFAULT_HEAT_MODEL)
    kw.update(model_kwargs)
    sys = heat_fd_model(**kw)
    t = np.linspace(0.0, t_end, n_steps)
    u = np.full(n_steps, power)
    full = pod_reduce(sys, np.eye(sys.n))
    states = simulate_continuous_states(full, u, t)
    snap = SnapshotMatrix(values=states.T, times=t)
    outputs = states @ full.C.T
    return sys, t, u, snap, outputs
