"""Gradient-norm robustness measure and Pareto-set ranking.

Manufacturing-robust designs are the Pareto members whose objectives
react least to small parameter perturbations; the measure is the
Euclidean norm of each objective's finite-difference gradient, and
members are ranked by the worst (largest) norm across objectives.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import Individual
from .errors import ContractError, SensitivityError

__all__ = ["gradient_fd", "SensitivityEntry", "SensitivityReport", "robustness_rank"]


def gradient_fd(f, x, h: float = 1e-3, bounds=None) -> np.ndarray:
    """Central-difference gradient of a scalar function.

    With ``bounds = (lower, upper)`` the per-coordinate step is
    ``h * (upper - lower)`` and coordinates within a step of a bound use
    the one-sided difference; without bounds the step is ``h`` itself.
    """
    x = np.asarray(x, dtype=float)
    d = x.size
    if bounds is not None:
        lo = np.asarray(bounds[0], dtype=float)
        hi = np.asarray(bounds[1], dtype=float)
        if lo.shape != x.shape or hi.shape != x.shape:
            raise ContractError("bounds must match the point's shape")
        steps = h * (hi - lo)
    else:
        lo = np.full(d, -np.inf)
        hi = np.full(d, np.inf)
        steps = np.full(d, h)
    if np.any(steps <= 0):
        raise ContractError("finite-difference steps must be positive")

    grad = np.empty(d)
    for i in range(d):
        s = steps[i]
        up_ok = x[i] + s <= hi[i]
        dn_ok = x[i] - s >= lo[i]
        if up_ok and dn_ok:
            a, b, w = x.copy(), x.copy(), 2.0 * s
            a[i] += s
            b[i] -= s
        elif up_ok:
            a, b, w = x.copy(), x.copy(), s
            a[i] += s
        elif dn_ok:
            a, b, w = x.copy(), x.copy(), s
            b[i] -= s
        else:
            raise ContractError(f"coordinate {i}: step {s} exceeds the bound range")
        fa, fb = float(f(a)), float(f(b))
        if not (np.isfinite(fa) and np.isfinite(fb)):
            raise SensitivityError(
                f"objective not finite at the stencil of coordinate {i}")
        grad[i] = (fa - fb) / w
    return grad


@dataclass(frozen=True)
class SensitivityEntry:
    """Per-member sensitivities: s[j] = ||grad F_j||, combined = max_j s[j]."""

    index: int
    x: np.ndarray
    f: np.ndarray
    s: np.ndarray | None
    combined: float
    ranked: bool = True


@dataclass(frozen=True)
class SensitivityReport:
    """Entries sorted most-robust first; unranked members trail."""

    entries: tuple[SensitivityEntry, ...]

    @property
    def ranking(self) -> list[int]:
        return [e.index for e in self.entries]


def robustness_rank(front, objectives, h: float = 1e-3, bounds=None) -> SensitivityReport:
    """Rank front members ascending by their worst gradient norm.

    ``objectives`` are scalar functions of the decision vector.  Members
    whose stencil evaluation fails are marked unranked and appended
    after the ranked ones; ties break by member index.
    """
    front = list(front)
    if not front:
        raise ContractError("front must be non-empty")
    ranked = []
    unranked = []
    for idx, member in enumerate(front):
        x = member.x if isinstance(member, Individual) else np.asarray(member, dtype=float)
        fvec = member.f if isinstance(member, Individual) else np.array([])
        try:
            s = np.array([np.linalg.norm(gradient_fd(obj, x, h, bounds))
                          for obj in objectives])
            ranked.append(SensitivityEntry(index=idx, x=np.array(x), f=np.array(fvec),
                                           s=s, combined=float(np.max(s))))
        except (SensitivityError, ContractError):
            unranked.append(SensitivityEntry(index=idx, x=np.array(x), f=np.array(fvec),
                                             s=None, combined=np.inf, ranked=False))
    ranked.sort(key=lambda e: (e.combined, e.index))
    return SensitivityReport(entries=tuple(ranked + unranked))
