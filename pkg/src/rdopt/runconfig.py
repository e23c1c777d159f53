"""Run configuration: YAML schema, validation, defaults, echo.

A run is fully described by one YAML file with ``run``, ``problem``,
``algorithm``, ``surrogate``, ``rom`` and ``sensitivity`` blocks.  All
defaults are materialized into the resolved tree, which is echoed next
to the outputs so any run can be reproduced from its echo alone.
"""

from __future__ import annotations

import copy
import hashlib

import numpy as np
import yaml

from .core import ProblemSpec, rosenbrock_problem, sphere_problem
from .errors import ConfigError
from .optimizers import NelderMeadConfig, Nsga2Config, PsoConfig
from .surrogate import SurrogateConfig
from .team import BenchmarkConfig, control_rectangle, team_problem

__all__ = [
    "DEFAULT_CONFIG",
    "load_config",
    "resolve_config",
    "validate_config",
    "echo_config",
    "run_id_of",
    "build_problem",
    "build_algorithm_config",
    "build_surrogate_config",
    "build_benchmark_config",
]

DEFAULT_CONFIG: dict = {
    "run": {
        "seed": 0,
        "out": "runs/out",
        "threads": None,  # null selects machine parallelism
    },
    "problem": {
        "id": "team",
        "dim": 5,  # sphere / rosenbrock dimension
        "team": {
            "n_turns": 10,
            "r_lower": 0.010,
            "r_upper": 0.050,
            "turn_height": 0.0015,
            "thickness": 0.001,
            "current": 1.0,
            "quad_order": 64,
            "delta_r": 0.0005,
            "b_target": 0.0002,
            "radii": None,  # explicit design radii for `team eval`
            "control": {
                "r_min": 0.001,
                "r_max": 0.005,
                "z_min": -0.005,
                "z_max": 0.005,
                "n_points": 21,
            },
        },
    },
    "algorithm": {
        "name": "nsga2",
        "nsga2": {
            "population_size": 20,
            "generations": 80,
            "crossover_prob": 0.9,
            "eta_crossover": 15.0,
            "mutation_prob": None,
            "eta_mutation": 20.0,
        },
        "pso": {
            "swarm_size": 30,
            "iterations": 200,
            "inertia": 0.729,
            "cognitive": 1.494,
            "social": 1.494,
        },
        "nelder_mead": {
            "x0": None,  # null starts from the mid-range point
            "max_iters": 500,
            "f_tol": 1e-10,
            "x_tol": 1e-10,
        },
    },
    "surrogate": {
        "enabled": False,
        "train_step": 30,
        "sigma_gate": 0.05,
        "max_train_points": 512,
    },
    "rom": {
        "heat": {
            "n_nodes": 50,
            "conductivity": 50.0,
            "density": 7800.0,
            "heat_capacity": 450.0,
            "dx": 0.002,
            "input_node": 0,
            "probe_nodes": [10, 25, 40],
        },
        "drive": {"power": 200.0, "t_end": 2000.0, "n_steps": 200},
        "snapshots": None,   # optional snapshot file (default: simulate the heat model)
        "trajectory": None,  # optional trajectory file for identification
        "order": 4,
        "r": 4,
        "probe": 1,          # probe column identified against
        "restarts": 8,
    },
    "sensitivity": {"h": 0.001},
}


def _merge(base: dict, override: dict, path: str = "") -> dict:
    out = copy.deepcopy(base)
    for key, value in override.items():
        here = f"{path}.{key}" if path else key
        if key not in base:
            raise ConfigError(f"{here}: unknown configuration field")
        if isinstance(base[key], dict) and isinstance(value, dict):
            out[key] = _merge(base[key], value, here)
        else:
            out[key] = copy.deepcopy(value)
    return out


def load_config(path) -> dict:
    """Parse a YAML config file (line numbers preserved in errors)."""
    try:
        with open(path, "r", encoding="utf-8") as fh:
            raw = yaml.safe_load(fh)
    except FileNotFoundError as exc:
        raise ConfigError(f"config file not found: {path}") from exc
    except yaml.YAMLError as exc:
        raise ConfigError(f"config parse error in {path}: {exc}") from exc
    if raw is None:
        raw = {}
    if not isinstance(raw, dict):
        raise ConfigError(f"{path}: top level must be a mapping")
    return raw


def resolve_config(user: dict) -> dict:
    """Merge a user tree over the defaults and validate the result."""
    cfg = _merge(DEFAULT_CONFIG, user)
    validate_config(cfg)
    return cfg


def _expect(cond: bool, path: str, msg: str) -> None:
    if not cond:
        raise ConfigError(f"{path}: {msg}")


def _num(cfg, path):
    node = cfg
    for part in path.split("."):
        node = node[part]
    return node


def validate_config(cfg: dict) -> None:
    seed = cfg["run"]["seed"]
    _expect(isinstance(seed, int) and 0 <= seed < 2 ** 64, "run.seed",
            "must be an unsigned 64-bit integer")
    threads = cfg["run"]["threads"]
    _expect(threads is None or (isinstance(threads, int) and threads >= 1),
            "run.threads", "must be null or a positive integer")

    pid = cfg["problem"]["id"]
    _expect(pid in ("team", "sphere", "rosenbrock"), "problem.id",
            f"unknown problem {pid!r}")
    _expect(isinstance(cfg["problem"]["dim"], int) and cfg["problem"]["dim"] >= 1,
            "problem.dim", "must be a positive integer")

    t = cfg["problem"]["team"]
    _expect(isinstance(t["n_turns"], int) and t["n_turns"] >= 1,
            "problem.team.n_turns", "must be a positive integer")
    for key in ("r_lower", "r_upper", "turn_height", "thickness", "current",
                "delta_r", "b_target"):
        _expect(isinstance(t[key], (int, float)), f"problem.team.{key}",
                "must be a number")
    _expect(t["r_lower"] < t["r_upper"], "problem.team.r_lower",
            "must be below r_upper")
    _expect(t["r_lower"] - t["thickness"] / 2 > 0, "problem.team.r_lower",
            "leaves inner radius <= 0 at the given thickness")
    _expect(isinstance(t["quad_order"], int) and t["quad_order"] >= 2,
            "problem.team.quad_order", "must be an integer >= 2")
    if t["radii"] is not None:
        _expect(isinstance(t["radii"], list) and len(t["radii"]) == t["n_turns"],
                "problem.team.radii", f"must list {t['n_turns']} radii")
    c = t["control"]
    _expect(c["r_min"] >= 0 and c["r_min"] < c["r_max"],
            "problem.team.control.r_min", "must satisfy 0 <= r_min < r_max")
    _expect(c["z_min"] < c["z_max"], "problem.team.control.z_min",
            "must be below z_max")
    _expect(isinstance(c["n_points"], int) and c["n_points"] >= 1,
            "problem.team.control.n_points", "must be a positive integer")

    name = cfg["algorithm"]["name"]
    _expect(name in ("nsga2", "pso", "nelder_mead"), "algorithm.name",
            f"unknown algorithm {name!r}")
    g = cfg["algorithm"]["nsga2"]
    _expect(isinstance(g["population_size"], int) and g["population_size"] >= 2
            and g["population_size"] % 2 == 0,
            "algorithm.nsga2.population_size", "must be an even integer >= 2")
    _expect(isinstance(g["generations"], int) and g["generations"] >= 0,
            "algorithm.nsga2.generations", "must be an integer >= 0")
    p = cfg["algorithm"]["pso"]
    _expect(isinstance(p["swarm_size"], int) and p["swarm_size"] >= 2,
            "algorithm.pso.swarm_size", "must be an integer >= 2")
    _expect(isinstance(p["iterations"], int) and p["iterations"] >= 1,
            "algorithm.pso.iterations", "must be a positive integer")

    s = cfg["surrogate"]
    _expect(isinstance(s["enabled"], bool), "surrogate.enabled", "must be a boolean")
    _expect(isinstance(s["train_step"], int) and s["train_step"] >= 1,
            "surrogate.train_step", "must be a positive integer")
    _expect(0.0 < s["sigma_gate"] < 1.0, "surrogate.sigma_gate",
            "must lie strictly between 0 and 1")
    _expect(isinstance(s["max_train_points"], int) and s["max_train_points"] >= 2,
            "surrogate.max_train_points", "must be an integer >= 2")

    r = cfg["rom"]
    _expect(isinstance(r["order"], int) and r["order"] >= 1, "rom.order",
            "must be a positive integer")
    _expect(isinstance(r["r"], int) and r["r"] >= 1, "rom.r",
            "must be a positive integer")
    h = r["heat"]
    _expect(isinstance(h["n_nodes"], int) and h["n_nodes"] >= 3,
            "rom.heat.n_nodes", "must be an integer >= 3")
    for key in ("conductivity", "density", "heat_capacity", "dx"):
        _expect(isinstance(h[key], (int, float)) and h[key] > 0,
                f"rom.heat.{key}", "must be a positive number")
    _expect(0 <= h["input_node"] < h["n_nodes"], "rom.heat.input_node",
            "must index a node")
    _expect(isinstance(h["probe_nodes"], list) and h["probe_nodes"]
            and all(0 <= i < h["n_nodes"] for i in h["probe_nodes"]),
            "rom.heat.probe_nodes", "must be a non-empty list of node indices")
    _expect(0 <= r["probe"] < len(h["probe_nodes"]), "rom.probe",
            "must index one of rom.heat.probe_nodes")
    d = r["drive"]
    _expect(d["t_end"] > 0, "rom.drive.t_end", "must be positive")
    _expect(isinstance(d["n_steps"], int) and d["n_steps"] >= 2,
            "rom.drive.n_steps", "must be an integer >= 2")

    _expect(cfg["sensitivity"]["h"] > 0, "sensitivity.h", "must be positive")


def echo_config(cfg: dict) -> str:
    """Deterministic YAML dump of a resolved config."""
    return yaml.safe_dump(cfg, sort_keys=True, default_flow_style=False)


def run_id_of(cfg: dict) -> str:
    """Deterministic run id: hash of the config minus output plumbing."""
    trimmed = copy.deepcopy(cfg)
    trimmed["run"].pop("out", None)
    trimmed["run"].pop("threads", None)
    return hashlib.sha256(echo_config(trimmed).encode()).hexdigest()[:16]


def build_benchmark_config(cfg: dict) -> BenchmarkConfig:
    t = cfg["problem"]["team"]
    c = t["control"]
    control = control_rectangle(c["r_min"], c["r_max"], c["z_min"], c["z_max"],
                                c["n_points"], B0=t["b_target"])
    return BenchmarkConfig.default(
        n_turns=t["n_turns"], r_lower=t["r_lower"], r_upper=t["r_upper"],
        turn_height=t["turn_height"], current=t["current"],
        thickness=t["thickness"], control=control,
        quad_order=t["quad_order"], delta_r=t["delta_r"])


def build_problem(cfg: dict) -> ProblemSpec:
    pid = cfg["problem"]["id"]
    if pid == "team":
        return team_problem(build_benchmark_config(cfg))
    if pid == "sphere":
        return sphere_problem(cfg["problem"]["dim"])
    return rosenbrock_problem(cfg["problem"]["dim"])


def build_algorithm_config(cfg: dict, spec: ProblemSpec):
    name = cfg["algorithm"]["name"]
    seed = cfg["run"]["seed"]
    if name == "nsga2":
        g = cfg["algorithm"]["nsga2"]
        return Nsga2Config(population_size=g["population_size"],
                           generations=g["generations"],
                           crossover_prob=g["crossover_prob"],
                           eta_crossover=g["eta_crossover"],
                           mutation_prob=g["mutation_prob"],
                           eta_mutation=g["eta_mutation"],
                           seed=seed)
    if name == "pso":
        p = cfg["algorithm"]["pso"]
        return PsoConfig(swarm_size=p["swarm_size"], iterations=p["iterations"],
                         inertia=p["inertia"], cognitive=p["cognitive"],
                         social=p["social"], seed=seed)
    nm = cfg["algorithm"]["nelder_mead"]
    x0 = nm["x0"]
    if x0 is None:
        x0 = 0.5 * (spec.lower + spec.upper)
    return NelderMeadConfig(x0=np.asarray(x0, dtype=float),
                            max_iters=nm["max_iters"], f_tol=nm["f_tol"],
                            x_tol=nm["x_tol"],
                            bounds=(spec.lower, spec.upper))


def build_surrogate_config(cfg: dict) -> SurrogateConfig:
    s = cfg["surrogate"]
    return SurrogateConfig(train_step=s["train_step"], sigma_gate=s["sigma_gate"],
                           enabled=s["enabled"],
                           max_train_points=s["max_train_points"])
