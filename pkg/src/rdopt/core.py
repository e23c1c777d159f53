"""Problem and population data model.

This is the application layer every optimizer plugs into: box-bounded
parameters, a cost evaluator binding, individuals with provenance
(true-evaluated vs surrogate-predicted), Pareto dominance machinery,
decision-space normalization, and the append-only results log.

All objectives are minimized internally.  Maximization problems must be
negated at the evaluator boundary.
"""

from __future__ import annotations

import json
import threading
import time
from dataclasses import dataclass, field
from enum import Enum
from typing import Callable, Iterable, Iterator, Sequence

import numpy as np

from .errors import ContractError, RdoptError

__all__ = [
    "Parameter",
    "ProblemSpec",
    "Provenance",
    "Individual",
    "Population",
    "dominates",
    "pareto_front",
    "pareto_front_indices",
    "normalize",
    "denormalize",
    "ResultsLog",
    "iter_log_records",
    "register_evaluator",
    "builtin_evaluator",
    "sphere_problem",
    "rosenbrock_problem",
]


def _readonly(a) -> np.ndarray:
    out = np.array(a, dtype=float)
    out.setflags(write=False)
    return out


@dataclass(frozen=True)
class Parameter:
    """One box-bounded decision variable."""

    name: str
    lower: float
    upper: float

    def __post_init__(self):
        if not (self.lower < self.upper):
            raise ContractError(
                f"parameter {self.name!r}: lower ({self.lower}) must be "
                f"strictly below upper ({self.upper})"
            )

    @property
    def range(self) -> float:
        return self.upper - self.lower


# Registry of named cost functions usable as ProblemSpec evaluators.
_EVALUATORS: dict[str, Callable[[np.ndarray], np.ndarray]] = {}


def register_evaluator(name: str, fn: Callable[[np.ndarray], np.ndarray]) -> None:
    _EVALUATORS[name] = fn


def builtin_evaluator(name: str) -> Callable[[np.ndarray], np.ndarray]:
    try:
        return _EVALUATORS[name]
    except KeyError:
        raise ContractError(f"unknown evaluator {name!r}; registered: "
                            f"{sorted(_EVALUATORS)}") from None


@dataclass(frozen=True)
class ProblemSpec:
    """Optimization problem: parameters, objective arity, evaluator binding.

    ``evaluator`` is either a registered evaluator name or a callable
    mapping a decision vector to a cost vector of length ``n_objectives``.
    """

    parameters: tuple[Parameter, ...]
    n_objectives: int
    evaluator: str | Callable[[np.ndarray], np.ndarray]
    name: str = ""

    def __post_init__(self):
        object.__setattr__(self, "parameters", tuple(self.parameters))
        if not self.parameters:
            raise ContractError("ProblemSpec requires at least one parameter")
        if self.n_objectives < 1:
            raise ContractError("n_objectives must be >= 1")
        names = [p.name for p in self.parameters]
        if len(set(names)) != len(names):
            raise ContractError(f"duplicate parameter names: {names}")

    @property
    def dim(self) -> int:
        return len(self.parameters)

    @property
    def lower(self) -> np.ndarray:
        return np.array([p.lower for p in self.parameters])

    @property
    def upper(self) -> np.ndarray:
        return np.array([p.upper for p in self.parameters])

    def evaluate(self, x: np.ndarray) -> np.ndarray:
        fn = self.evaluator if callable(self.evaluator) else builtin_evaluator(self.evaluator)
        f = np.atleast_1d(np.asarray(fn(np.asarray(x, dtype=float)), dtype=float))
        if f.shape != (self.n_objectives,):
            raise ContractError(
                f"evaluator returned shape {f.shape}, expected ({self.n_objectives},)"
            )
        return f


class Provenance(Enum):
    """How an individual's cost vector was obtained."""

    EVALUATED = "evaluated"
    PREDICTED = "predicted"


@dataclass(frozen=True)
class Individual:
    """A candidate solution: decision vector, cost vector, provenance.

    ``predicted_std`` must be present exactly when ``provenance`` is
    PREDICTED (the per-objective standard deviation of the surrogate
    estimate).  Instances are immutable; the stored arrays are read-only.
    """

    x: np.ndarray
    f: np.ndarray
    provenance: Provenance = Provenance.EVALUATED
    predicted_std: np.ndarray | None = None
    generation: int = 0

    def __post_init__(self):
        object.__setattr__(self, "x", _readonly(self.x))
        object.__setattr__(self, "f", _readonly(self.f))
        if self.predicted_std is not None:
            object.__setattr__(self, "predicted_std", _readonly(self.predicted_std))
        if self.generation < 0:
            raise ContractError("generation must be >= 0")
        has_std = self.predicted_std is not None
        if (self.provenance is Provenance.PREDICTED) != has_std:
            raise ContractError(
                "predicted_std must be present iff provenance is PREDICTED"
            )
        if has_std and np.any(np.asarray(self.predicted_std) < 0):
            raise ContractError("predicted_std components must be >= 0")


@dataclass(frozen=True)
class Population:
    """A generation's worth of individuals with consistent vector lengths."""

    generation: int
    members: tuple[Individual, ...]

    def __post_init__(self):
        object.__setattr__(self, "members", tuple(self.members))
        if self.members:
            dx = self.members[0].x.size
            df = self.members[0].f.size
            for m in self.members:
                if m.x.size != dx or m.f.size != df:
                    raise ContractError("population members have mixed vector lengths")

    def __len__(self) -> int:
        return len(self.members)

    def costs(self) -> np.ndarray:
        return np.array([m.f for m in self.members])


def dominates(a, b) -> bool:
    """Pareto dominance under minimization: a <= b everywhere, < somewhere.

    A cost vector containing NaN marks an infeasible individual: it
    dominates nothing and is dominated by every NaN-free vector.
    """
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    if a.ndim != 1 or a.shape != b.shape:
        raise ContractError(f"cost shapes differ: {a.shape} vs {b.shape}")
    if np.isnan(a).any():
        return False
    if np.isnan(b).any():
        return True
    return bool(np.all(a <= b) and np.any(a < b))


def pareto_front_indices(costs: Sequence[np.ndarray]) -> list[int]:
    """Indices of the non-dominated members, input order preserved."""
    n = len(costs)
    keep = []
    for i in range(n):
        if not any(dominates(costs[j], costs[i]) for j in range(n) if j != i):
            keep.append(i)
    return keep


def pareto_front(members: Sequence[Individual]) -> list[Individual]:
    """Members dominated by no other member; empty input gives empty output."""
    members = list(members)
    idx = pareto_front_indices([m.f for m in members])
    return [members[i] for i in idx]


_BOUND_TOL = 1e-12


def normalize(x, spec: ProblemSpec) -> np.ndarray:
    """Map a decision vector within bounds onto the unit cube."""
    x = np.asarray(x, dtype=float)
    lo, hi = spec.lower, spec.upper
    if x.shape != lo.shape:
        raise ContractError(f"decision vector has shape {x.shape}, expected {lo.shape}")
    rng = hi - lo
    if np.any(x < lo - _BOUND_TOL * rng) or np.any(x > hi + _BOUND_TOL * rng):
        raise ContractError(f"decision vector {x} outside bounds [{lo}, {hi}]")
    return np.clip((x - lo) / rng, 0.0, 1.0)


def denormalize(u, spec: ProblemSpec) -> np.ndarray:
    """Inverse of :func:`normalize`: unit-cube vector to decision space."""
    u = np.asarray(u, dtype=float)
    lo, hi = spec.lower, spec.upper
    if u.shape != lo.shape:
        raise ContractError(f"unit vector has shape {u.shape}, expected {lo.shape}")
    if np.any(u < -_BOUND_TOL) or np.any(u > 1.0 + _BOUND_TOL):
        raise ContractError(f"unit-cube vector {u} outside [0, 1]")
    return lo + np.clip(u, 0.0, 1.0) * (hi - lo)


class ResultsLog:
    """Append-only structured results sink, one JSON record per line.

    Appends are serialized through an internal lock so concurrent
    producers can share one writer.  Each record is flushed on write,
    so every fully written line survives an interrupted run.
    """

    def __init__(self, path, run_id: str):
        self.path = str(path)
        self.run_id = run_id
        self._lock = threading.Lock()
        self._t0 = time.perf_counter()
        try:
            self._fh = open(self.path, "a", encoding="utf-8")
        except OSError as exc:
            raise RdoptError(f"cannot open results log {self.path}: {exc}") from exc

    def _write(self, record: dict) -> None:
        line = json.dumps(record, allow_nan=True)
        with self._lock:
            try:
                self._fh.write(line + "\n")
                self._fh.flush()
            except OSError as exc:
                raise RdoptError(f"results log write failed: {exc}") from exc

    def append(self, ind: Individual, wall_time_s: float | None = None) -> None:
        """Append one individual record."""
        if wall_time_s is None:
            wall_time_s = time.perf_counter() - self._t0
        std = None if ind.predicted_std is None else [float(v) for v in ind.predicted_std]
        self._write({
            "record": "individual",
            "run_id": self.run_id,
            "generation": int(ind.generation),
            "x": [float(v) for v in ind.x],
            "f": [float(v) for v in ind.f],
            "provenance": ind.provenance.value,
            "predicted_std": std,
            "wall_time_s": float(wall_time_s),
        })

    def append_summary(self, elapsed_s: float, n_predicted: int, n_evaluated: int) -> None:
        """Append the run-summary record (counter totals and elapsed time)."""
        self._write({
            "record": "summary",
            "run_id": self.run_id,
            "elapsed_s": float(elapsed_s),
            "n_predicted": int(n_predicted),
            "n_evaluated": int(n_evaluated),
        })

    def close(self) -> None:
        with self._lock:
            self._fh.close()

    def __enter__(self) -> "ResultsLog":
        return self

    def __exit__(self, *exc) -> None:
        self.close()


def iter_log_records(path, strict: bool = False) -> Iterator[dict]:
    """Replay a results log in order.

    A truncated trailing line (interrupted run) is skipped unless
    ``strict`` is set, in which case it raises ValueError.
    """
    with open(path, "r", encoding="utf-8") as fh:
        lines = fh.read().split("\n")
    for k, line in enumerate(lines):
        if not line:
            continue
        try:
            yield json.loads(line)
        except json.JSONDecodeError:
            if strict or k < len(lines) - 1:
                raise ValueError(f"corrupt record at line {k + 1} of {path}")
            return


def individual_from_record(rec: dict) -> Individual:
    """Rebuild an Individual from a results-log record."""
    std = rec.get("predicted_std")
    return Individual(
        x=np.array(rec["x"], dtype=float),
        f=np.array(rec["f"], dtype=float),
        provenance=Provenance(rec["provenance"]),
        predicted_std=None if std is None else np.array(std, dtype=float),
        generation=int(rec["generation"]),
    )


# Built-in single-objective benchmark evaluators.

def _sphere(x: np.ndarray) -> np.ndarray:
    return np.array([float(np.sum(x * x))])


def _rosenbrock(x: np.ndarray) -> np.ndarray:
    v = float(np.sum(100.0 * (x[1:] - x[:-1] ** 2) ** 2 + (1.0 - x[:-1]) ** 2))
    return np.array([v])


register_evaluator("sphere", _sphere)
register_evaluator("rosenbrock", _rosenbrock)


def sphere_problem(dim: int = 5, bound: float = 5.0) -> ProblemSpec:
    params = tuple(Parameter(f"x{i}", -bound, bound) for i in range(dim))
    return ProblemSpec(params, 1, "sphere", name="sphere")


def rosenbrock_problem(dim: int = 2, bound: float = 5.0) -> ProblemSpec:
    params = tuple(Parameter(f"x{i}", -bound, bound) for i in range(dim))
    return ProblemSpec(params, 1, "rosenbrock", name="rosenbrock")
