"""Evaluation channel shared by the optimizers.

Wraps a plain cost callable, a ProblemSpec, or a surrogate manager (any
object with ``evaluate(x) -> (f, provenance, std)``) behind one request
interface.  Batch requests are answered in slot order regardless of the
thread count, so the numerical outputs of a run never depend on
``threads``.
"""

from __future__ import annotations

import threading
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from ..core import ProblemSpec, Provenance
from ..errors import EvaluationError

__all__ = ["EvaluationChannel"]


class EvaluationChannel:
    """Answers cost-vector requests, tracking evaluated/predicted counts."""

    def __init__(self, source, threads: int = 1):
        self.threads = max(1, int(threads))
        self._serialize = False
        if isinstance(source, ProblemSpec):
            self._fn = source.evaluate
            self._managed = None
        elif callable(source) and not hasattr(source, "evaluate"):
            self._fn = source
            self._managed = None
        else:
            # surrogate manager (or compatible): it is its own
            # serialization point, so requests go through one at a time
            self._managed = source
            self._fn = None
            self._serialize = True
        self._n_evaluated = 0
        self._n_predicted = 0
        self._count_lock = threading.Lock()

    @property
    def n_evaluated(self) -> int:
        if self._managed is not None:
            return self._managed.counters.n_evaluated
        return self._n_evaluated

    @property
    def n_predicted(self) -> int:
        if self._managed is not None:
            return self._managed.counters.n_predicted
        return self._n_predicted

    @property
    def n_requests(self) -> int:
        return self.n_evaluated + self.n_predicted

    def request(self, x) -> tuple[np.ndarray, Provenance, np.ndarray | None]:
        try:
            if self._managed is not None:
                return self._managed.evaluate(x)
            f = np.atleast_1d(np.asarray(self._fn(np.asarray(x, dtype=float)), dtype=float))
        except Exception as exc:  # noqa: BLE001 - any evaluator failure aborts the run
            raise EvaluationError(f"cost evaluation failed at x={x}: {exc}") from exc
        with self._count_lock:
            self._n_evaluated += 1
        return f, Provenance.EVALUATED, None

    def request_batch(self, xs) -> list[tuple[np.ndarray, Provenance, np.ndarray | None]]:
        xs = list(xs)
        if self._serialize or self.threads == 1 or len(xs) <= 1:
            return [self.request(x) for x in xs]
        with ThreadPoolExecutor(max_workers=self.threads) as pool:
            return list(pool.map(self.request, xs))
