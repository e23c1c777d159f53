"""Elitist non-dominated-sorting genetic algorithm (NSGA-II).

Fast non-dominated sorting, crowding distance, simulated binary
crossover, polynomial mutation, binary tournament on (rank, crowding),
and mu+lambda elitist truncation.  Variation runs in the unit cube; the
evaluation channel sees decision-space vectors.

Reproducibility: every random draw comes from a counter-based generator
keyed on (seed, generation, slot), so identical (seed, config, problem)
produce bit-identical archives regardless of evaluation concurrency.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..core import Individual, Population, ProblemSpec, denormalize, dominates
from ..errors import ConfigError, EvaluationError
from .channel import EvaluationChannel

__all__ = [
    "Nsga2Config",
    "Nsga2Result",
    "slot_rng",
    "fast_non_dominated_sort",
    "crowding_distance",
    "sbx_crossover",
    "polynomial_mutation",
    "nsga2_run",
]


def slot_rng(seed: int, generation: int, slot: int) -> np.random.Generator:
    """Counter-based generator for one (generation, slot) cell of a run."""
    ss = np.random.SeedSequence(entropy=int(seed), spawn_key=(int(generation), int(slot)))
    return np.random.Generator(np.random.Philox(ss))


@dataclass(frozen=True)
class Nsga2Config:
    population_size: int = 20
    generations: int = 80
    crossover_prob: float = 0.9
    eta_crossover: float = 15.0
    mutation_prob: float | None = None  # None selects 1/dim at run time
    eta_mutation: float = 20.0
    seed: int = 0

    def __post_init__(self):
        if self.population_size < 2 or self.population_size % 2:
            raise ConfigError(f"population_size must be even and >= 2, "
                              f"got {self.population_size}")
        if self.generations < 0:
            raise ConfigError("generations must be >= 0")
        for name in ("crossover_prob", "mutation_prob"):
            v = getattr(self, name)
            if v is not None and not (0.0 <= v <= 1.0):
                raise ConfigError(f"{name} must lie in [0, 1], got {v}")
        if self.eta_crossover <= 0 or self.eta_mutation <= 0:
            raise ConfigError("distribution indices must be positive")
        if not (0 <= int(self.seed) < 2 ** 64):
            raise ConfigError("seed must fit in 64 unsigned bits")


def fast_non_dominated_sort(costs) -> list[list[int]]:
    """Partition members into successive non-dominated fronts.

    Front 0 is the non-dominated set; front k is non-dominated once
    fronts < k are removed.  Every member lands in exactly one front.
    """
    costs = [np.asarray(c, dtype=float) for c in costs]
    n = len(costs)
    if n == 0:
        return []
    dominated_by: list[list[int]] = [[] for _ in range(n)]
    n_dominating = [0] * n
    for i in range(n):
        for j in range(i + 1, n):
            if dominates(costs[i], costs[j]):
                dominated_by[i].append(j)
                n_dominating[j] += 1
            elif dominates(costs[j], costs[i]):
                dominated_by[j].append(i)
                n_dominating[i] += 1
    fronts = [[i for i in range(n) if n_dominating[i] == 0]]
    while True:
        nxt = []
        for i in fronts[-1]:
            for j in dominated_by[i]:
                n_dominating[j] -= 1
                if n_dominating[j] == 0:
                    nxt.append(j)
        if not nxt:
            return fronts
        fronts.append(sorted(nxt))


def crowding_distance(costs) -> np.ndarray:
    """NSGA-II crowding distance of each member of a front.

    Boundary members along any objective get +inf; interior members
    accumulate the normalized gap between their neighbours.  Objectives
    with zero (or non-finite) range contribute nothing.
    """
    costs = np.atleast_2d(np.asarray(costs, dtype=float))
    n, m = costs.shape
    if n == 0:
        return np.zeros(0)
    dist = np.zeros(n)
    if n <= 2:
        return np.full(n, np.inf)
    for j in range(m):
        order = np.argsort(costs[:, j], kind="stable")
        f = costs[order, j]
        dist[order[0]] = np.inf
        dist[order[-1]] = np.inf
        rng = f[-1] - f[0]
        if not np.isfinite(rng) or rng == 0.0:
            continue
        gaps = (f[2:] - f[:-2]) / rng
        interior = order[1:-1]
        finite = np.isfinite(gaps)
        dist[interior[finite]] += gaps[finite]
    return dist


def _sbx_beta(u, eta_c: float):
    """Spread factor from a uniform draw (polynomial distribution)."""
    u = np.asarray(u, dtype=float)
    exp = 1.0 / (eta_c + 1.0)
    return np.where(u <= 0.5, (2.0 * u) ** exp, (0.5 / (1.0 - u)) ** exp)


def sbx_crossover(p1, p2, eta_c: float, rng: np.random.Generator):
    """Simulated binary crossover of two unit-cube parents.

    Pre-clipping, the children's per-coordinate mean equals the parents'
    mean exactly.
    """
    p1 = np.asarray(p1, dtype=float)
    p2 = np.asarray(p2, dtype=float)
    beta = _sbx_beta(rng.random(p1.size), eta_c)
    c1 = 0.5 * ((1.0 + beta) * p1 + (1.0 - beta) * p2)
    c2 = 0.5 * ((1.0 - beta) * p1 + (1.0 + beta) * p2)
    return np.clip(c1, 0.0, 1.0), np.clip(c2, 0.0, 1.0)


def polynomial_mutation(x, eta_m: float, per_gene_prob: float,
                        rng: np.random.Generator):
    """Bounded polynomial mutation in the unit cube."""
    x = np.asarray(x, dtype=float)
    apply = rng.random(x.size) < per_gene_prob
    u = rng.random(x.size)
    exp = 1.0 / (eta_m + 1.0)
    lo_branch = u < 0.5
    xy = np.where(lo_branch, 1.0 - x, x)  # distance factor to the far bound
    val = np.where(
        lo_branch,
        2.0 * u + (1.0 - 2.0 * u) * (1.0 - xy) ** (eta_m + 1.0),
        2.0 * (1.0 - u) + 2.0 * (u - 0.5) * (1.0 - xy) ** (eta_m + 1.0),
    )
    delta = np.where(lo_branch, val ** exp - 1.0, 1.0 - val ** exp)
    out = np.where(apply, np.clip(x + delta, 0.0, 1.0), x)
    return out


def _rank_and_crowd(costs):
    fronts = fast_non_dominated_sort(costs)
    n = len(costs)
    rank = np.empty(n, dtype=int)
    crowd = np.empty(n)
    arr = np.asarray(costs, dtype=float)
    for k, front in enumerate(fronts):
        rank[front] = k
        crowd[front] = crowding_distance(arr[front])
    return rank, crowd


def _tournament(rank, crowd, rng) -> int:
    i, j = int(rng.integers(len(rank))), int(rng.integers(len(rank)))
    if rank[i] != rank[j]:
        return i if rank[i] < rank[j] else j
    if crowd[i] != crowd[j]:
        return i if crowd[i] > crowd[j] else j
    return min(i, j)


def _truncate(costs, size: int) -> list[int]:
    """Elitist (rank, crowding, index) selection of `size` survivors."""
    rank, crowd = _rank_and_crowd(costs)
    order = sorted(range(len(costs)), key=lambda i: (rank[i], -crowd[i], i))
    return order[:size]


@dataclass
class Nsga2Result:
    population: Population
    archive: list[Individual]
    n_requests: int
    n_evaluated: int
    n_predicted: int


def nsga2_run(spec: ProblemSpec, cfg: Nsga2Config, eval_source=None, *,
              log=None, threads: int = 1) -> Nsga2Result:
    """Run NSGA-II against a problem.

    ``cfg.generations`` counts evaluated populations including the
    initial one (so 80 generations of size 20 make exactly 1600 cost
    requests); generations = 0 degenerates to evaluating and returning
    the initial population.  ``eval_source`` defaults to the problem's
    own evaluator; pass a surrogate manager to enable gated prediction.
    """
    if eval_source is None:
        eval_source = spec
    channel = eval_source if isinstance(eval_source, EvaluationChannel) else \
        EvaluationChannel(eval_source, threads=threads)
    d = spec.dim
    n_pop = cfg.population_size
    pm = cfg.mutation_prob if cfg.mutation_prob is not None else 1.0 / d
    n_generations = max(1, cfg.generations)

    def evaluate_generation(unit_rows, gen):
        xs = [denormalize(u, spec) for u in unit_rows]
        try:
            results = channel.request_batch(xs)
        except EvaluationError:
            if log is not None:
                log.close()
            raise
        members = []
        for x, (f, prov, std) in zip(xs, results):
            ind = Individual(x=x, f=f, provenance=prov, predicted_std=std,
                             generation=gen)
            members.append(ind)
            if log is not None:
                log.append(ind)
        return members

    units = [slot_rng(cfg.seed, 0, slot).random(d) for slot in range(n_pop)]
    members = evaluate_generation(units, 0)
    archive = list(members)
    pop_units = list(units)
    pop_members = list(members)

    for gen in range(1, n_generations):
        costs = [m.f for m in pop_members]
        rank, crowd = _rank_and_crowd(costs)
        child_units = []
        for pair in range(n_pop // 2):
            rng = slot_rng(cfg.seed, gen, pair)
            a = _tournament(rank, crowd, rng)
            b = _tournament(rank, crowd, rng)
            pa, pb = pop_units[a], pop_units[b]
            if rng.random() < cfg.crossover_prob:
                c1, c2 = sbx_crossover(pa, pb, cfg.eta_crossover, rng)
            else:
                c1, c2 = pa.copy(), pb.copy()
            c1 = polynomial_mutation(c1, cfg.eta_mutation, pm, rng)
            c2 = polynomial_mutation(c2, cfg.eta_mutation, pm, rng)
            child_units.extend([c1, c2])

        child_members = evaluate_generation(child_units, gen)
        archive.extend(child_members)

        all_units = pop_units + child_units
        all_members = pop_members + child_members
        survivors = _truncate([m.f for m in all_members], n_pop)
        pop_units = [all_units[i] for i in survivors]
        pop_members = [all_members[i] for i in survivors]

    return Nsga2Result(
        population=Population(generation=n_generations - 1, members=tuple(pop_members)),
        archive=archive,
        n_requests=channel.n_requests,
        n_evaluated=channel.n_evaluated,
        n_predicted=channel.n_predicted,
    )
