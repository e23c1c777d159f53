"""Nelder-Mead downhill simplex with optional box bounds.

Classic reflect/expand/contract/shrink loop.  Candidate points are
projected onto the bounds when given.  Terminates when both the
function spread and the simplex diameter fall below their tolerances,
or after max_iters iterations.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..errors import ConfigError, ContractError

__all__ = ["NelderMeadConfig", "NelderMeadResult", "nelder_mead_run"]


@dataclass(frozen=True)
class NelderMeadConfig:
    x0: np.ndarray
    max_iters: int = 500
    f_tol: float = 1e-10
    x_tol: float = 1e-10
    reflection: float = 1.0
    expansion: float = 2.0
    contraction: float = 0.5
    shrink: float = 0.5
    bounds: tuple[np.ndarray, np.ndarray] | None = None
    initial_step: float = 0.05  # fraction of bound range (or of max(1, |x0_i|))

    def __post_init__(self):
        object.__setattr__(self, "x0", np.asarray(self.x0, dtype=float))
        if self.max_iters < 1:
            raise ConfigError("max_iters must be >= 1")
        if self.f_tol <= 0 or self.x_tol <= 0:
            raise ConfigError("f_tol and x_tol must be positive")
        if self.reflection <= 0:
            raise ConfigError("reflection coefficient must be > 0")
        if self.expansion <= 1:
            raise ConfigError("expansion coefficient must be > 1")
        if not (0 < self.contraction < 1):
            raise ConfigError("contraction coefficient must lie in (0, 1)")
        if not (0 < self.shrink < 1):
            raise ConfigError("shrink coefficient must lie in (0, 1)")
        if self.bounds is not None:
            lo = np.asarray(self.bounds[0], dtype=float)
            hi = np.asarray(self.bounds[1], dtype=float)
            if lo.shape != self.x0.shape or hi.shape != self.x0.shape:
                raise ConfigError("bounds must match x0 shape")
            if np.any(lo >= hi):
                raise ConfigError("bounds must satisfy lower < upper")
            if np.any(self.x0 < lo) or np.any(self.x0 > hi):
                raise ConfigError("x0 must lie within the bounds")
            object.__setattr__(self, "bounds", (lo, hi))


@dataclass
class NelderMeadResult:
    x: np.ndarray
    f: float
    n_iterations: int
    n_evaluations: int
    converged: bool


def _fkey(v: float) -> float:
    return np.inf if np.isnan(v) else v


def nelder_mead_run(objective, cfg: NelderMeadConfig) -> NelderMeadResult:
    """Minimize a scalar objective from cfg.x0; returns the best vertex."""
    x0 = cfg.x0
    d = x0.size
    lo, hi = (cfg.bounds if cfg.bounds is not None else (None, None))

    def clip(p):
        return p if lo is None else np.clip(p, lo, hi)

    n_eval = 0

    def f(p):
        nonlocal n_eval
        n_eval += 1
        return float(objective(p))

    f0 = f(x0)
    if np.isnan(f0):
        raise ContractError(f"objective is NaN at the start point {x0}")

    # initial simplex: x0 plus one step along each coordinate, stepping
    # inward when the forward step would leave the bounds
    simplex = [x0.copy()]
    fvals = [f0]
    for i in range(d):
        step = cfg.initial_step * ((hi[i] - lo[i]) if lo is not None
                                   else max(1.0, abs(x0[i])))
        p = x0.copy()
        if lo is not None and x0[i] + step > hi[i]:
            p[i] -= step
        else:
            p[i] += step
        p = clip(p)
        simplex.append(p)
        fvals.append(f(p))
    simplex = np.asarray(simplex)
    fvals = np.asarray(fvals)

    def f_spread():
        return max(abs(_fkey(v) - _fkey(fvals[0])) for v in fvals[1:])

    def converged_now():
        # inside the loop both criteria must hold: equal function values
        # alone also occur on symmetric straddles of a minimum
        return (f_spread() <= cfg.f_tol
                and np.max(np.abs(simplex[1:] - simplex[0])) <= cfg.x_tol)

    iters = 0
    converged = False
    order = np.argsort([_fkey(v) for v in fvals], kind="stable")
    simplex, fvals = simplex[order], fvals[order]
    # a start whose function spread is already within tolerance returns
    # immediately, whatever the simplex size
    if f_spread() <= cfg.f_tol or converged_now():
        converged = True

    while not converged and iters < cfg.max_iters:
        iters += 1
        centroid = simplex[:-1].mean(axis=0)
        worst = simplex[-1]
        xr = clip(centroid + cfg.reflection * (centroid - worst))
        fr = f(xr)
        if _fkey(fr) < _fkey(fvals[0]):
            xe = clip(centroid + cfg.expansion * (xr - centroid))
            fe = f(xe)
            if _fkey(fe) < _fkey(fr):
                simplex[-1], fvals[-1] = xe, fe
            else:
                simplex[-1], fvals[-1] = xr, fr
        elif _fkey(fr) < _fkey(fvals[-2]):
            simplex[-1], fvals[-1] = xr, fr
        else:
            if _fkey(fr) < _fkey(fvals[-1]):
                # outside contraction
                xc = clip(centroid + cfg.contraction * (xr - centroid))
            else:
                # inside contraction
                xc = clip(centroid - cfg.contraction * (centroid - worst))
            fc = f(xc)
            if _fkey(fc) < min(_fkey(fr), _fkey(fvals[-1])):
                simplex[-1], fvals[-1] = xc, fc
            else:
                best = simplex[0]
                for i in range(1, d + 1):
                    simplex[i] = clip(best + cfg.shrink * (simplex[i] - best))
                    fvals[i] = f(simplex[i])
        order = np.argsort([_fkey(v) for v in fvals], kind="stable")
        simplex, fvals = simplex[order], fvals[order]
        if converged_now():
            converged = True

    return NelderMeadResult(x=simplex[0].copy(), f=float(fvals[0]),
                            n_iterations=iters, n_evaluations=n_eval,
                            converged=converged)
