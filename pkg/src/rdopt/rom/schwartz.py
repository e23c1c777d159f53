"""Discrete-time LTI systems in Schwartz form and their identification.

An order-n system is parameterized by coefficients Delta_1..Delta_n with
|Delta_i| < 1 and output weights gamma_1..gamma_n; delta_i =
sqrt(1 - Delta_i^2).  The 2n-vector [Delta, gamma] is the identification
unknown.  The regularized construction keeps a +delta subdiagonal
uniformly, which keeps the spectral radius of A at or below one; the
published fourth-order matrix with a -delta_3 entry at position (4, 3)
is available separately for fidelity checks.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .. import _kernels
from ..errors import ContractError, DomainError, IdentificationError
from ..optimizers import NelderMeadConfig, nelder_mead_run

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
]


@dataclass(frozen=True)
class SchwartzParams:
    """Coefficients (Delta, gamma) of an order-n Schwartz-form system."""

    delta: np.ndarray
    gamma: np.ndarray

    def __post_init__(self):
        d = np.asarray(self.delta, dtype=float)
        g = np.asarray(self.gamma, dtype=float)
        d.setflags(write=False)
        g.setflags(write=False)
        object.__setattr__(self, "delta", d)
        object.__setattr__(self, "gamma", g)
        if d.ndim != 1 or d.shape != g.shape:
            raise ContractError("delta and gamma must be equal-length vectors")
        if d.size < 1:
            raise ContractError("system order must be >= 1")
        if np.any(np.abs(d) >= 1.0):
            raise DomainError(f"|Delta_i| < 1 required, got {d}")

    @property
    def order(self) -> int:
        return self.delta.size

    def to_vector(self) -> np.ndarray:
        return np.concatenate([self.delta, self.gamma])

    @classmethod
    def from_vector(cls, b) -> "SchwartzParams":
        b = np.asarray(b, dtype=float)
        if b.size % 2:
            raise ContractError("parameter vector must have even length 2n")
        n = b.size // 2
        return cls(delta=b[:n], gamma=b[n:])


@dataclass(frozen=True)
class DiscreteStateSpace:
    """x_{k+1} = A x_k + B u_k,  y_k = C x_k."""

    A: np.ndarray
    B: np.ndarray
    C: np.ndarray

    def __post_init__(self):
        A = np.atleast_2d(np.asarray(self.A, dtype=float))
        B = np.asarray(self.B, dtype=float).ravel()
        C = np.asarray(self.C, dtype=float).ravel()
        n = A.shape[0]
        if A.shape != (n, n) or B.shape != (n,) or C.shape != (n,):
            raise ContractError(
                f"inconsistent state-space dimensions: A {A.shape}, "
                f"B {B.shape}, C {C.shape}")
        for arr in (A, B, C):
            arr.setflags(write=False)
        object.__setattr__(self, "A", A)
        object.__setattr__(self, "B", B)
        object.__setattr__(self, "C", C)

    @property
    def order(self) -> int:
        return self.A.shape[0]


def build_schwartz_system(p: SchwartzParams, as_printed: bool = False) -> DiscreteStateSpace:
    """Assemble (A, B, C) from Schwartz coefficients.

    With ``as_printed`` (order 4 only), the (4, 3) subdiagonal entry is
    negated to match the published fourth-order matrix.
    """
    D = p.delta
    n = p.order
    dl = np.sqrt(1.0 - D * D)
    A = np.zeros((n, n))
    for j in range(n):
        A[0, j] = np.prod(dl[:j]) * D[j]
    for i in range(1, n):
        A[i, i - 1] = dl[i - 1]
        for j in range(i, n):
            A[i, j] = -D[i - 1] * np.prod(dl[i:j]) * D[j]
    if as_printed:
        if n != 4:
            raise ContractError("the printed variant is defined for order 4 only")
        A[3, 2] = -dl[2]
    B = np.concatenate([[1.0], -D[:-1]])
    return DiscreteStateSpace(A=A, B=B, C=p.gamma)


def simulate_discrete(ss: DiscreteStateSpace, u, x0=None) -> np.ndarray:
    """Output sequence of the exact recursion; y_k uses x_k pre-update."""
    u = np.asarray(u, dtype=float).ravel()
    if not np.all(np.isfinite(u)):
        raise ContractError("input sequence must be finite")
    x0 = np.zeros(ss.order) if x0 is None else np.asarray(x0, dtype=float)
    if x0.shape != (ss.order,):
        raise ContractError(f"x0 has shape {x0.shape}, expected ({ss.order},)")
    return _kernels.lti_outputs(ss.A, ss.B, ss.C, u, x0)


def simulate_discrete_states(ss: DiscreteStateSpace, u, x0=None) -> np.ndarray:
    """States x_0..x_{T-1} as rows (the output is y = X @ C)."""
    u = np.asarray(u, dtype=float).ravel()
    x = np.zeros(ss.order) if x0 is None else np.asarray(x0, dtype=float).copy()
    X = np.empty((u.size, ss.order))
    for k in range(u.size):
        X[k] = x
        x = ss.A @ x + ss.B * u[k]
    return X


def identification_objective(params: SchwartzParams, u, T_ref) -> float:
    """Worst-case deviation max_k |T_ref_k - T_k| of the simulated output."""
    u = np.asarray(u, dtype=float).ravel()
    T_ref = np.asarray(T_ref, dtype=float).ravel()
    if u.shape != T_ref.shape:
        raise ContractError(
            f"input and reference lengths differ: {u.size} vs {T_ref.size}")
    y = simulate_discrete(build_schwartz_system(params), u)
    return float(np.max(np.abs(T_ref - y)))


def make_identification_objective(u, T_ref, order: int):
    """Objective over the flat [Delta, gamma] vector.

    Infeasible coefficients (any |Delta_i| >= 1) encode as +inf so the
    optimizers treat them as dominated.
    """
    u = np.asarray(u, dtype=float).ravel()
    T_ref = np.asarray(T_ref, dtype=float).ravel()
    if u.shape != T_ref.shape:
        raise ContractError(
            f"input and reference lengths differ: {u.size} vs {T_ref.size}")

    def objective(b) -> float:
        b = np.asarray(b, dtype=float)
        if b.shape != (2 * order,):
            raise ContractError(f"expected a {2 * order}-vector, got shape {b.shape}")
        if np.any(np.abs(b[:order]) >= 1.0):
            return float("inf")
        p = SchwartzParams(delta=b[:order], gamma=b[order:])
        y = simulate_discrete(build_schwartz_system(p), u)
        return float(np.max(np.abs(T_ref - y)))

    return objective


@dataclass(frozen=True)
class IdentifyConfig:
    restarts: int = 8
    seed: int = 0
    max_iters: int = 2000
    polish_candidates: int = 3   # best restarts polished in the full space
    f_tol: float = 1e-14
    x_tol: float = 1e-12
    delta_margin: float = 1e-3   # Delta box is (-1 + margin, 1 - margin)
    gamma_span: float = 10.0     # gamma box is +- gamma_span * max|T_ref|

    def __post_init__(self):
        if self.restarts < 1:
            raise ContractError("at least one restart is required")
        if self.polish_candidates < 1:
            raise ContractError("polish_candidates must be >= 1")


@dataclass
class IdentifyResult:
    params: SchwartzParams
    objective: float
    n_evaluations: int


def _latin_hypercube(n: int, d: int, rng: np.random.Generator) -> np.ndarray:
    cells = (rng.permutation(n).reshape(-1, 1) if d == 1 else
             np.column_stack([rng.permutation(n) for _ in range(d)]))
    return (cells + rng.random((n, d))) / n


def _state_columns(delta: np.ndarray, u: np.ndarray) -> np.ndarray:
    """States x_0..x_{T-1} stacked as rows, one kernel pass per column."""
    n = delta.size
    ss = build_schwartz_system(SchwartzParams(delta=delta, gamma=np.zeros(n)))
    X = np.empty((u.size, n))
    e = np.zeros(n)
    x0 = np.zeros(n)
    for i in range(n):
        e[:] = 0.0
        e[i] = 1.0
        X[:, i] = _kernels.lti_outputs(ss.A, ss.B, e, u, x0)
    return X


def identify(T_ref, u, order: int, config: IdentifyConfig = IdentifyConfig()) -> IdentifyResult:
    """Fit Schwartz coefficients to a reference output sequence.

    The output is linear in gamma, so each Latin-hypercube restart runs
    Nelder-Mead over Delta alone with gamma refit by least squares at
    every iterate; the best candidates then get a full-space Nelder-Mead
    polish of [Delta, gamma] against the worst-case deviation.  The
    returned objective is the best value seen across every iterate.
    """
    T_ref = np.asarray(T_ref, dtype=float).ravel()
    u = np.asarray(u, dtype=float).ravel()
    if T_ref.shape != u.shape:
        raise ContractError("T_ref and u must have equal lengths")
    n = int(order)
    if n < 1:
        raise ContractError("order must be >= 1")

    g_max = config.gamma_span * float(np.max(np.abs(T_ref)))
    d_hi = 1.0 - config.delta_margin
    if g_max == 0.0:
        # T_ref is identically zero: gamma = 0 attains objective 0
        params = SchwartzParams(delta=np.zeros(n), gamma=np.zeros(n))
        return IdentifyResult(params=params, objective=0.0, n_evaluations=0)

    raw = make_identification_objective(u, T_ref, n)
    best_b = None
    best_f = np.inf
    n_eval = 0

    def track(b, v):
        nonlocal best_b, best_f
        if v < best_f:
            best_f, best_b = v, np.array(b)

    def full_objective(b):
        nonlocal n_eval
        n_eval += 1
        v = raw(b)
        track(b, v)
        return v

    def reduced_objective(delta):
        """Smooth RMS error with gamma refit by least squares.

        The tracked incumbent still scores the worst-case deviation, so
        the returned objective honours the sup-norm definition.
        """
        nonlocal n_eval
        n_eval += 1
        if np.any(np.abs(delta) >= 1.0):
            return float("inf")
        X = _state_columns(np.asarray(delta, dtype=float), u)
        gamma, *_ = np.linalg.lstsq(X, T_ref, rcond=None)
        gamma = np.clip(gamma, -g_max, g_max)
        resid = T_ref - X @ gamma
        track(np.concatenate([delta, gamma]), float(np.max(np.abs(resid))))
        return float(np.sqrt(np.mean(resid * resid)))

    def chained_nm(objective, x0, bounds, chains=3):
        """Nelder-Mead with simplex restarts at the incumbent."""
        x, fbest = np.asarray(x0, dtype=float), np.inf
        for _ in range(chains):
            nm = NelderMeadConfig(x0=x, max_iters=config.max_iters,
                                  f_tol=config.f_tol, x_tol=config.x_tol,
                                  initial_step=0.02, bounds=bounds)
            res = nelder_mead_run(objective, nm)
            if not (res.f < fbest - 1e-15):
                return res.x, res.f
            x, fbest = res.x, res.f
        return x, fbest

    d_lo_box, d_hi_box = np.full(n, -d_hi), np.full(n, d_hi)
    rng = np.random.Generator(np.random.Philox(np.random.SeedSequence(config.seed)))
    starts = _latin_hypercube(config.restarts, n, rng) * (2 * d_hi) - d_hi

    candidates = []
    for k in range(config.restarts):
        x, fv = chained_nm(reduced_objective, starts[k], (d_lo_box, d_hi_box))
        candidates.append((fv, k, x))
    candidates.sort(key=lambda c: (np.inf if np.isnan(c[0]) else c[0], c[1]))

    lo = np.concatenate([d_lo_box, np.full(n, -g_max)])
    hi = np.concatenate([d_hi_box, np.full(n, g_max)])
    for _, _, delta in candidates[:config.polish_candidates]:
        X = _state_columns(delta, u)
        gamma, *_ = np.linalg.lstsq(X, T_ref, rcond=None)
        gamma = np.clip(gamma, -g_max, g_max)
        chained_nm(full_objective, np.concatenate([delta, gamma]), (lo, hi))

    if best_b is None or not np.isfinite(best_f):
        raise IdentificationError("no feasible start produced a finite objective")
    return IdentifyResult(params=SchwartzParams.from_vector(best_b),
                          objective=best_f, n_evaluations=n_eval)
