"""Particle swarm optimization (single objective, box bounds).

Standard inertia/cognitive/social velocity update with synchronous
global-best tracking, positions clipped to the bounds.  Velocities start
at zero.  Defaults follow the constriction-equivalent setting
w = 0.729, c1 = c2 = 1.494.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..core import Individual, ProblemSpec
from ..errors import ConfigError
from .channel import EvaluationChannel
from .nsga2 import slot_rng

__all__ = ["PsoConfig", "PsoResult", "pso_run"]


@dataclass(frozen=True)
class PsoConfig:
    swarm_size: int = 30
    iterations: int = 200
    inertia: float = 0.729
    cognitive: float = 1.494
    social: float = 1.494
    seed: int = 0

    def __post_init__(self):
        if self.swarm_size < 2:
            raise ConfigError(f"swarm_size must be >= 2, got {self.swarm_size}")
        if self.iterations < 1:
            raise ConfigError("iterations must be >= 1")
        if self.cognitive < 0 or self.social < 0:
            raise ConfigError("cognitive and social coefficients must be >= 0")


@dataclass
class PsoResult:
    best: Individual
    history: np.ndarray  # global best value after each iteration (0 = init)
    n_requests: int


def pso_run(spec: ProblemSpec, cfg: PsoConfig, eval_source=None, *,
            log=None, threads: int = 1) -> PsoResult:
    """Minimize a single-objective problem with a particle swarm."""
    if spec.n_objectives != 1:
        raise ConfigError("particle swarm optimization requires a "
                          "single-objective problem")
    if eval_source is None:
        eval_source = spec
    channel = eval_source if isinstance(eval_source, EvaluationChannel) else \
        EvaluationChannel(eval_source, threads=threads)
    lo, hi = spec.lower, spec.upper
    d = spec.dim
    n = cfg.swarm_size

    x = np.array([lo + slot_rng(cfg.seed, 0, s).random(d) * (hi - lo) for s in range(n)])
    v = np.zeros_like(x)

    def evaluate(xs, gen):
        out = np.empty(len(xs))
        for s, (f, prov, std) in enumerate(channel.request_batch(list(xs))):
            out[s] = f[0]
            if log is not None:
                log.append(Individual(x=xs[s], f=f, provenance=prov,
                                      predicted_std=std, generation=gen))
        return out

    fx = evaluate(x, 0)
    pbest_x = x.copy()
    pbest_f = fx.copy()
    g = int(np.nanargmin(pbest_f))
    gbest_x, gbest_f = pbest_x[g].copy(), float(pbest_f[g])
    history = [gbest_f]

    for it in range(1, cfg.iterations + 1):
        for s in range(n):
            rng = slot_rng(cfg.seed, it, s)
            r1 = rng.random(d)
            r2 = rng.random(d)
            v[s] = (cfg.inertia * v[s]
                    + cfg.cognitive * r1 * (pbest_x[s] - x[s])
                    + cfg.social * r2 * (gbest_x - x[s]))
            x[s] = np.clip(x[s] + v[s], lo, hi)
        fx = evaluate(x, it)
        improved = fx < pbest_f
        pbest_x[improved] = x[improved]
        pbest_f[improved] = fx[improved]
        g = int(np.nanargmin(pbest_f))
        if pbest_f[g] < gbest_f:
            gbest_x, gbest_f = pbest_x[g].copy(), float(pbest_f[g])
        history.append(gbest_f)

    best = Individual(x=gbest_x, f=np.array([gbest_f]), generation=cfg.iterations)
    return PsoResult(best=best, history=np.asarray(history),
                     n_requests=channel.n_requests)
