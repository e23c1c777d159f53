"""1-D finite-difference thermal rod: the desk-scale full field model.

Second-order central differences on a uniform rod with insulated ends,
lumped mass matrix rho * c_p * dx * I, and a point heat source at one
node.  Serves as the truth model that identification and POD reduction
are checked against.
"""

from __future__ import annotations

import numpy as np

from ..errors import DomainError
from .pod import FirstOrderSystem

__all__ = ["heat_fd_model"]


def heat_fd_model(n_nodes: int, conductivity: float, density: float,
                  heat_capacity: float, dx: float, input_node: int,
                  probe_nodes) -> FirstOrderSystem:
    """Build M y' + S y = load * u(t) for the insulated rod.

    ``u(t)`` carries the injected power (the load vector is a unit
    impulse at ``input_node``).  With insulated ends the row sums of S
    vanish, so total thermal energy is conserved up to the injection.
    """
    if n_nodes < 3:
        raise DomainError(f"need at least 3 nodes, got {n_nodes}")
    for name, v in (("conductivity", conductivity), ("density", density),
                    ("heat_capacity", heat_capacity), ("dx", dx)):
        if not v > 0:
            raise DomainError(f"{name} must be positive, got {v}")
    if not (0 <= input_node < n_nodes):
        raise DomainError(f"input node {input_node} out of range 0..{n_nodes - 1}")

    M = density * heat_capacity * dx * np.eye(n_nodes)
    lap = 2.0 * np.eye(n_nodes) - np.eye(n_nodes, k=1) - np.eye(n_nodes, k=-1)
    lap[0, 0] = 1.0
    lap[-1, -1] = 1.0
    S = (conductivity / dx) * lap
    load = np.zeros(n_nodes)
    load[input_node] = 1.0
    return FirstOrderSystem(M=M, S=S, load=load, outputs=tuple(probe_nodes))
