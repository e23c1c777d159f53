"""Delimited text I/O for snapshot matrices and reference trajectories.

Snapshot files: first row holds the time stamps, each following row the
time series of one node (so columns are full solutions at one time).
Trajectory files: three rows, time stamps / input samples / reference
output.
"""

from __future__ import annotations

import numpy as np

from ..errors import ContractError
from .pod import SnapshotMatrix

__all__ = ["save_snapshots", "load_snapshots", "save_trajectory", "load_trajectory"]


def save_snapshots(path, snap: SnapshotMatrix) -> None:
    np.savetxt(path, np.vstack([snap.times, snap.values]))


def load_snapshots(path) -> SnapshotMatrix:
    try:
        data = np.atleast_2d(np.loadtxt(path))
    except OSError as exc:
        raise ContractError(f"cannot read snapshot file {path}: {exc}") from exc
    if data.shape[0] < 2:
        raise ContractError(
            f"snapshot file {path} needs a time-stamp row plus node rows")
    return SnapshotMatrix(values=data[1:], times=data[0])


def save_trajectory(path, t, u, y) -> None:
    t = np.asarray(t, dtype=float).ravel()
    u = np.asarray(u, dtype=float).ravel()
    y = np.asarray(y, dtype=float).ravel()
    if not (t.size == u.size == y.size):
        raise ContractError("t, u and y must have equal lengths")
    np.savetxt(path, np.vstack([t, u, y]))


def load_trajectory(path):
    try:
        data = np.atleast_2d(np.loadtxt(path))
    except OSError as exc:
        raise ContractError(f"cannot read trajectory file {path}: {exc}") from exc
    if data.shape[0] != 3:
        raise ContractError(
            f"trajectory file {path} must hold exactly 3 rows (t, u, y), "
            f"found {data.shape[0]}")
    return data[0], data[1], data[2]
