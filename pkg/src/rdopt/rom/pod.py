"""Proper orthogonal decomposition and projection of first-order systems.

Snapshots are stored one per column (rows follow a node through time).
Modes are eigenvectors of the spatial correlation matrix U U^T scaled by
the snapshot count; when there are fewer snapshots than nodes the
eigenproblem is solved in snapshot space and lifted.  Projecting
M y' + S y = F(t) onto r modes gives the reduced dynamics
A = (E^T M E)^{-1} E^T S E with input map B u(t) = (E^T M E)^{-1} E^T F(t);
the reduced ODE integrates as x' = -A x + B u (dissipative convention,
the stiffness term moves to the right-hand side).
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.linalg import lu_factor, lu_solve

from ..errors import ContractError, IntegrationError, ReductionError

__all__ = [
    "SnapshotMatrix",
    "PodBasis",
    "ContinuousStateSpace",
    "FirstOrderSystem",
    "pod_modes",
    "pod_reduce",
    "simulate_continuous",
    "simulate_continuous_states",
]

_RANK_TOL = 1e-12


@dataclass(frozen=True)
class SnapshotMatrix:
    """Solution snapshots, one full spatial solution per column."""

    values: np.ndarray
    times: np.ndarray

    def __post_init__(self):
        U = np.atleast_2d(np.asarray(self.values, dtype=float))
        t = np.asarray(self.times, dtype=float).ravel()
        if U.shape[1] != t.size:
            raise ContractError(
                f"snapshot count {U.shape[1]} != number of time stamps {t.size}")
        if t.size > 1 and np.any(np.diff(t) <= 0):
            raise ContractError("time stamps must be strictly increasing")
        U.setflags(write=False)
        t.setflags(write=False)
        object.__setattr__(self, "values", U)
        object.__setattr__(self, "times", t)

    @property
    def n_nodes(self) -> int:
        return self.values.shape[0]

    @property
    def n_snapshots(self) -> int:
        return self.values.shape[1]


@dataclass(frozen=True)
class PodBasis:
    """Orthonormal modes with eigenvalues sorted in descending order.

    ``energy`` holds each mode's fraction of the total snapshot energy
    (trace of the correlation matrix); ``n_padded`` counts trailing
    modes drawn from the orthogonal complement because the requested
    count exceeded the snapshot rank (their eigenvalue is zero).
    """

    modes: np.ndarray
    eigenvalues: np.ndarray
    energy: np.ndarray
    total_energy: float
    n_padded: int = 0

    @property
    def r(self) -> int:
        return self.modes.shape[1]

    def captured_energy(self, r: int | None = None) -> float:
        r = self.r if r is None else r
        return float(np.sum(self.energy[:r]))


@dataclass(frozen=True)
class ContinuousStateSpace:
    """x'(t) = A x + B u (or x' = -A x + B u when ``dissipative``)."""

    A: np.ndarray
    B: np.ndarray
    C: np.ndarray
    dissipative: bool = False

    def __post_init__(self):
        A = np.atleast_2d(np.asarray(self.A, dtype=float))
        B = np.asarray(self.B, dtype=float)
        C = np.atleast_2d(np.asarray(self.C, dtype=float))
        r = A.shape[0]
        if A.shape != (r, r):
            raise ContractError(f"A must be square, got {A.shape}")
        if B.shape[0] != r:
            raise ContractError(f"B has {B.shape[0]} rows, expected {r}")
        if C.shape[1] != r:
            raise ContractError(f"C has {C.shape[1]} columns, expected {r}")
        for arr in (A, B, C):
            arr.setflags(write=False)
        object.__setattr__(self, "A", A)
        object.__setattr__(self, "B", B)
        object.__setattr__(self, "C", C)

    @property
    def order(self) -> int:
        return self.A.shape[0]


@dataclass(frozen=True)
class FirstOrderSystem:
    """M y'(t) + S y(t) = load * u(t), outputs read at selected nodes."""

    M: np.ndarray
    S: np.ndarray
    load: np.ndarray
    outputs: tuple[int, ...] = field(default_factory=tuple)

    def __post_init__(self):
        M = np.atleast_2d(np.asarray(self.M, dtype=float))
        S = np.atleast_2d(np.asarray(self.S, dtype=float))
        load = np.asarray(self.load, dtype=float).ravel()
        n = M.shape[0]
        if M.shape != (n, n) or S.shape != (n, n) or load.shape != (n,):
            raise ContractError("M, S and load have inconsistent dimensions")
        for arr in (M, S, load):
            arr.setflags(write=False)
        object.__setattr__(self, "M", M)
        object.__setattr__(self, "S", S)
        object.__setattr__(self, "load", load)
        object.__setattr__(self, "outputs", tuple(int(i) for i in self.outputs))
        if any(i < 0 or i >= n for i in self.outputs):
            raise ContractError(f"output node indices out of range 0..{n - 1}")

    @property
    def n(self) -> int:
        return self.M.shape[0]


def _complement_pad(E: np.ndarray, count: int) -> np.ndarray:
    """Deterministic orthonormal extension from the identity columns."""
    n = E.shape[0]
    cols = [E[:, j] for j in range(E.shape[1])]
    pads = []
    for i in range(n):
        if len(pads) == count:
            break
        v = np.zeros(n)
        v[i] = 1.0
        for c in cols:
            v -= (c @ v) * c
        nrm = np.linalg.norm(v)
        if nrm > 0.5:
            v /= nrm
            cols.append(v)
            pads.append(v)
    if len(pads) < count:
        raise ReductionError("could not extend the basis from the complement")
    return np.column_stack(pads)


def pod_modes(snapshots, r: int) -> PodBasis:
    """Leading r modes of a snapshot set (no mean removal).

    If r exceeds the snapshot rank, the remaining modes are padded from
    the orthogonal complement with zero eigenvalue and reported via
    ``n_padded``.
    """
    U = snapshots.values if isinstance(snapshots, SnapshotMatrix) else \
        np.atleast_2d(np.asarray(snapshots, dtype=float))
    n_space, n_t = U.shape
    if not (1 <= r <= n_space):
        raise ContractError(f"r must lie in 1..{n_space}, got {r}")

    total = float(np.sum(U * U)) / n_t
    if n_t < n_space:
        # method of snapshots: solve in snapshot space and lift
        G = (U.T @ U) / n_t
        w, V = np.linalg.eigh(G)
    else:
        Cs = (U @ U.T) / n_t
        w, V = np.linalg.eigh(Cs)
    order = np.argsort(w)[::-1]
    w = w[order]
    V = V[:, order]

    w_max = max(w[0], 0.0)
    rank = int(np.sum(w > _RANK_TOL * w_max)) if w_max > 0 else 0
    k = min(r, rank)
    if n_t < n_space:
        E = U @ V[:, :k] / np.sqrt(n_t * w[:k])
    else:
        E = V[:, :k]
    vals = w[:k].copy()

    n_padded = r - k
    if n_padded:
        pad = _complement_pad(E if k else np.zeros((n_space, 0)), n_padded)
        E = np.column_stack([E, pad]) if k else pad
        vals = np.concatenate([vals, np.zeros(n_padded)])

    energy = vals / total if total > 0 else np.zeros_like(vals)
    return PodBasis(modes=E, eigenvalues=vals, energy=energy,
                    total_energy=total, n_padded=n_padded)


def pod_reduce(sys: FirstOrderSystem, E) -> ContinuousStateSpace:
    """Galerkin projection of a first-order system onto the columns of E."""
    E = np.atleast_2d(np.asarray(E, dtype=float))
    if E.shape[0] != sys.n:
        raise ContractError(f"modes have {E.shape[0]} rows, expected {sys.n}")
    Mr = E.T @ sys.M @ E
    cond = np.linalg.cond(Mr)
    if not np.isfinite(cond) or cond > 1e12:
        raise ReductionError(
            f"projected mass matrix is numerically singular (cond = {cond:.3e})")
    Sr = E.T @ sys.S @ E
    A = np.linalg.solve(Mr, Sr)
    B = np.linalg.solve(Mr, E.T @ sys.load)
    C = E[list(sys.outputs), :] if sys.outputs else E
    return ContinuousStateSpace(A=A, B=B, C=C, dissipative=True)


def _integrate(ss: ContinuousStateSpace, u, t, x0=None) -> np.ndarray:
    t = np.asarray(t, dtype=float).ravel()
    if t.size < 2:
        raise ContractError("time grid needs at least two points")
    h = t[1] - t[0]
    if h <= 0 or not np.allclose(np.diff(t), h, rtol=1e-9, atol=0):
        raise ContractError("time grid must be uniform and increasing")
    u = np.asarray(u, dtype=float)
    if u.shape[0] != t.size:
        raise ContractError(f"input has {u.shape[0]} samples, expected {t.size}")
    if not np.all(np.isfinite(u)):
        raise ContractError("input samples must be finite")

    r = ss.order
    x = np.zeros(r) if x0 is None else np.asarray(x0, dtype=float).copy()
    sign = -1.0 if ss.dissipative else 1.0
    step = np.eye(r) - sign * h * ss.A
    lu = lu_factor(step)
    B = ss.B
    states = np.empty((t.size, r))
    states[0] = x
    for k in range(1, t.size):
        drive = B * u[k] if B.ndim == 1 else B @ np.atleast_1d(u[k])
        x = lu_solve(lu, x + h * drive)
        if not np.all(np.isfinite(x)):
            raise IntegrationError(f"non-finite state at step {k} (t = {t[k]})")
        states[k] = x
    return states


def simulate_continuous_states(ss: ContinuousStateSpace, u, t, x0=None) -> np.ndarray:
    """Implicit-Euler state trajectory on a uniform grid, rows = time."""
    return _integrate(ss, u, t, x0)


def simulate_continuous(ss: ContinuousStateSpace, u, t, x0=None) -> np.ndarray:
    """Implicit-Euler output trajectories, shape (len(t), n_outputs)."""
    return _integrate(ss, u, t, x0) @ ss.C.T
