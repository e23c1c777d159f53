"""Gaussian-process regression and the gated surrogate evaluation manager.

The manager answers cost requests for an optimizer.  The first N
requests are always true-evaluated and stored as training data; after
every batch of N true evaluations one GP per objective is (re)fit on
the accumulated data.  Once models exist, each request is predicted
first: if the predicted standard deviation is within ``sigma_gate``
times the observed target range for every objective, the prediction is
returned (provenance PREDICTED, no training-set update); otherwise the
request is true-evaluated and appended to the training set.
"""

from __future__ import annotations

import threading
from collections import deque
from dataclasses import dataclass, field

import numpy as np
from scipy.linalg import cho_factor, cho_solve

from .core import ProblemSpec, Provenance, normalize
from .errors import ConfigError, ContractError, FitError

__all__ = [
    "GPHyper",
    "GPModel",
    "gp_fit",
    "gp_predict",
    "SurrogateConfig",
    "SurrogateCounters",
    "SurrogateManager",
]

_JITTER_STEPS = 6  # noise variance is escalated 10x this many times before failing


@dataclass(frozen=True)
class GPHyper:
    """Squared-exponential kernel settings.

    ``signal_std`` and ``noise_std`` may be "auto": the signal standard
    deviation is then taken from the training targets and the noise set
    to 1e-6 of it.  ``length_scale`` is shared or per-dimension, in
    unit-cube coordinates.
    """

    length_scale: float | np.ndarray = 0.3
    signal_std: float | str = "auto"
    noise_std: float | str = "auto"
    optimize: bool = False  # iterated grid refinement of the length scale

    def resolve(self, y: np.ndarray, dim: int) -> tuple[np.ndarray, float, float]:
        ell = np.broadcast_to(np.asarray(self.length_scale, dtype=float), (dim,)).copy()
        if np.any(ell <= 0):
            raise ConfigError("length scales must be positive")
        if self.signal_std == "auto":
            sf = float(np.std(y))
            if sf == 0.0:
                sf = 1.0
        else:
            sf = float(self.signal_std)
        sn = 1e-6 * sf if self.noise_std == "auto" else float(self.noise_std)
        if sf <= 0 or sn < 0:
            raise ConfigError("signal_std must be > 0 and noise_std >= 0")
        return ell, sf, sn


def _sq_dists(A: np.ndarray, B: np.ndarray, ell: np.ndarray) -> np.ndarray:
    da = A / ell
    db = B / ell
    return np.maximum(
        np.sum(da * da, axis=1)[:, None]
        - 2.0 * da @ db.T
        + np.sum(db * db, axis=1)[None, :],
        0.0,
    )


@dataclass
class GPModel:
    """Constant-mean GP with a squared-exponential kernel.

    Holds the training set, resolved hyperparameters, and the cached
    Cholesky factorization of K + sigma_n^2 I (after any jitter
    escalation needed to make it positive definite).
    """

    X: np.ndarray
    y: np.ndarray
    length_scale: np.ndarray
    signal_std: float
    noise_std: float
    y_mean: float
    _chol: tuple = field(repr=False, default=None)
    _alpha: np.ndarray = field(repr=False, default=None)

    def predict(self, x) -> tuple[float, float]:
        return gp_predict(self, x)


def _kernel(X, Z, ell, sf):
    return sf * sf * np.exp(-0.5 * _sq_dists(X, Z, ell))


def _log_marginal_likelihood(X, y, ell, sf, sn) -> float:
    n = X.shape[0]
    K = _kernel(X, X, ell, sf) + (sn * sn) * np.eye(n)
    try:
        c = cho_factor(K, lower=True)
    except np.linalg.LinAlgError:
        return -np.inf
    yc = y - np.mean(y)
    alpha = cho_solve(c, yc)
    logdet = 2.0 * np.sum(np.log(np.diag(c[0])))
    return float(-0.5 * yc @ alpha - 0.5 * logdet - 0.5 * n * np.log(2.0 * np.pi))


def gp_fit(X, y, hyper: GPHyper = GPHyper()) -> GPModel:
    """Fit a GP to unit-cube inputs X (n x d) and targets y (n,).

    Raises FitError when the kernel matrix cannot be factorized even
    after jitter escalation.
    """
    X = np.atleast_2d(np.asarray(X, dtype=float))
    y = np.asarray(y, dtype=float).ravel()
    n, d = X.shape
    if n < 2:
        raise ContractError(f"GP fit needs at least 2 points, got {n}")
    if y.shape != (n,):
        raise ContractError(f"targets have shape {y.shape}, expected ({n},)")
    if not np.all(np.isfinite(y)):
        raise ContractError("GP training targets must be finite")
    if np.any(X < -1e-9) or np.any(X > 1 + 1e-9):
        raise ContractError("GP training inputs must lie in the unit cube")

    ell, sf, sn = hyper.resolve(y, d)
    if hyper.optimize:
        ell = _refine_length_scale(X, y, ell, sf, sn)

    y_mean = float(np.mean(y))
    K = _kernel(X, X, ell, sf)
    sn_eff = max(sn, 1e-12 * sf)
    for attempt in range(_JITTER_STEPS + 1):
        try:
            c = cho_factor(K + (sn_eff * sn_eff) * np.eye(n), lower=True)
            break
        except np.linalg.LinAlgError:
            sn_eff *= np.sqrt(10.0)  # escalate noise variance by 10x
    else:
        raise FitError(
            f"kernel factorization failed after {_JITTER_STEPS} jitter escalations")
    alpha = cho_solve(c, y - y_mean)
    return GPModel(X=X, y=y, length_scale=ell, signal_std=sf, noise_std=sn_eff,
                   y_mean=y_mean, _chol=c, _alpha=alpha)


def _refine_length_scale(X, y, ell0, sf, sn) -> np.ndarray:
    """Two-pass grid refinement of a shared length-scale multiplier."""
    best_s, best_ll = 1.0, -np.inf
    grid = np.array([0.25, 0.5, 1.0, 2.0, 4.0])
    for _ in range(2):
        for s in grid:
            ll = _log_marginal_likelihood(X, y, ell0 * s, sf, sn)
            if ll > best_ll:
                best_s, best_ll = s, ll
        grid = best_s * np.array([0.6, 0.8, 1.0, 1.25, 1.6])
    return ell0 * best_s


def gp_predict(model: GPModel, x) -> tuple[float, float]:
    """Posterior mean and standard deviation at one unit-cube point."""
    x = np.atleast_2d(np.asarray(x, dtype=float))
    k = _kernel(x, model.X, model.length_scale, model.signal_std)
    mean = model.y_mean + float(k @ model._alpha)
    v = cho_solve(model._chol, k.ravel())
    var = model.signal_std ** 2 - float(k.ravel() @ v)
    return mean, float(np.sqrt(max(var, 0.0)))


@dataclass(frozen=True)
class SurrogateConfig:
    """Manager settings: retrain step, relative std gate, on/off switch."""

    train_step: int = 30
    sigma_gate: float = 0.05
    enabled: bool = True
    max_train_points: int = 512
    hyper: GPHyper = field(default_factory=GPHyper)

    def __post_init__(self):
        if self.train_step < 1:
            raise ConfigError("train_step must be a positive integer")
        if not (0.0 < self.sigma_gate < 1.0):
            raise ConfigError(f"sigma_gate must lie in (0, 1), got {self.sigma_gate}")
        if self.max_train_points < 2:
            raise ConfigError("max_train_points must be >= 2")


@dataclass
class SurrogateCounters:
    n_predicted: int = 0
    n_evaluated: int = 0

    @property
    def total(self) -> int:
        return self.n_predicted + self.n_evaluated


class SurrogateManager:
    """Serialization point between an optimizer and the true evaluator.

    One GP per objective, trained on normalized decision vectors.  True
    evaluations with non-finite cost components are counted and logged
    but excluded from the GP training data.  A failed fit degrades the
    manager to pass-through true evaluation until the next retrain
    boundary.
    """

    def __init__(self, spec: ProblemSpec, true_eval=None,
                 config: SurrogateConfig = SurrogateConfig()):
        self.spec = spec
        self._fn = spec.evaluate if true_eval is None else true_eval
        self.config = config
        self.counters = SurrogateCounters()
        self._lock = threading.RLock()
        cap = config.max_train_points
        self._U: deque = deque(maxlen=cap)   # unit-cube inputs
        self._Y: deque = deque(maxlen=cap)   # cost vectors
        self._models: list[GPModel] | None = None
        self._y_lo = np.full(spec.n_objectives, np.inf)
        self._y_hi = np.full(spec.n_objectives, -np.inf)
        self.fit_trace: list[int] = []  # n_evaluated at each successful fit
        self.fit_failures: int = 0

    def _gate_thresholds(self) -> np.ndarray:
        return self.config.sigma_gate * (self._y_hi - self._y_lo)

    def _true_evaluate(self, x, u):
        f = np.atleast_1d(np.asarray(self._fn(np.asarray(x, dtype=float)), dtype=float))
        self.counters.n_evaluated += 1
        if self.config.enabled:
            finite = np.isfinite(f)
            if finite.all():
                self._U.append(np.asarray(u, dtype=float))
                self._Y.append(f.copy())
                self._y_lo = np.minimum(self._y_lo, f)
                self._y_hi = np.maximum(self._y_hi, f)
            if self.counters.n_evaluated % self.config.train_step == 0:
                self._refit()
        return f, Provenance.EVALUATED, None

    def _refit(self):
        if len(self._U) < 2:
            return
        U = np.asarray(self._U)
        Y = np.asarray(self._Y)
        try:
            self._models = [gp_fit(U, Y[:, j], self.config.hyper)
                            for j in range(self.spec.n_objectives)]
            self.fit_trace.append(self.counters.n_evaluated)
        except FitError:
            self._models = None
            self.fit_failures += 1

    def evaluate(self, x):
        """Serve one cost request: (cost vector, provenance, predicted_std)."""
        with self._lock:
            if not self.config.enabled:
                f = np.atleast_1d(np.asarray(self._fn(np.asarray(x, dtype=float)),
                                             dtype=float))
                self.counters.n_evaluated += 1
                return f, Provenance.EVALUATED, None
            u = normalize(x, self.spec)
            if self._models is not None:
                means = np.empty(self.spec.n_objectives)
                stds = np.empty(self.spec.n_objectives)
                for j, m in enumerate(self._models):
                    means[j], stds[j] = gp_predict(m, u)
                if np.all(stds <= self._gate_thresholds()):
                    self.counters.n_predicted += 1
                    return means, Provenance.PREDICTED, stds
            return self._true_evaluate(x, u)
