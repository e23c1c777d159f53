"""Command-line entry point.

Subcommands: ``optimize``, ``rom identify``, ``rom pod``, ``team eval``,
``rank``.  Every run echoes its fully resolved configuration next to the
outputs; re-running from the echo reproduces the outputs byte for byte.

Exit codes: 0 success, 1 runtime failure, 2 configuration/validation
failure.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time
from pathlib import Path

import numpy as np
import yaml

from .core import Individual, ResultsLog, individual_from_record, iter_log_records, pareto_front
from .errors import ConfigError, ContractError, RdoptError
from .optimizers import NelderMeadConfig, nelder_mead_run, nsga2_run, pso_run
from .rom import (
    IdentifyConfig,
    heat_fd_model,
    identify,
    load_snapshots,
    load_trajectory,
    pod_modes,
    pod_reduce,
    simulate_continuous,
    simulate_continuous_states,
)
from .rom.pod import SnapshotMatrix
from .runconfig import (
    build_algorithm_config,
    build_benchmark_config,
    build_problem,
    build_surrogate_config,
    echo_config,
    load_config,
    resolve_config,
    run_id_of,
)
from .sensitivity import robustness_rank
from .surrogate import SurrogateManager
from .team import field_map
from .team.benchmark import build_turns

__all__ = ["main"]


def _fmt(values) -> str:
    return " ".join(repr(float(v)) for v in values)


def _update_tree(base: dict, override: dict) -> dict:
    for key, value in override.items():
        if isinstance(value, dict) and isinstance(base.get(key), dict):
            _update_tree(base[key], value)
        else:
            base[key] = value
    return base


def _resolved_from_args(args) -> dict:
    user = load_config(args.config) if args.config else {}
    over: dict = {}
    if getattr(args, "seed", None) is not None:
        over.setdefault("run", {})["seed"] = args.seed
    if getattr(args, "out", None):
        over.setdefault("run", {})["out"] = args.out
    if getattr(args, "threads", None) is not None:
        over.setdefault("run", {})["threads"] = args.threads
    if getattr(args, "surrogate", None):
        over["surrogate"] = {"enabled": args.surrogate == "on"}
    return resolve_config(_update_tree(user, over))


def _prepare_outdir(cfg: dict) -> Path:
    outdir = Path(cfg["run"]["out"])
    outdir.mkdir(parents=True, exist_ok=True)
    (outdir / "config_echo.yaml").write_text(echo_config(cfg), encoding="utf-8")
    return outdir


def _threads_of(cfg: dict) -> int:
    t = cfg["run"]["threads"]
    return t if t else (os.cpu_count() or 1)


def cmd_optimize(args) -> int:
    cfg = _resolved_from_args(args)
    outdir = _prepare_outdir(cfg)
    spec = build_problem(cfg)
    algo = cfg["algorithm"]["name"]
    acfg = build_algorithm_config(cfg, spec)
    scfg = build_surrogate_config(cfg)
    threads = _threads_of(cfg)
    rid = run_id_of(cfg)

    t0 = time.perf_counter()
    n_evaluated = n_predicted = 0
    with ResultsLog(outdir / "results.jsonl", rid) as log:
        if algo == "nsga2":
            source = SurrogateManager(spec, config=scfg) if scfg.enabled else spec
            res = nsga2_run(spec, acfg, source, log=log, threads=threads)
            front = pareto_front(res.population.members)
            n_evaluated, n_predicted = res.n_evaluated, res.n_predicted
        elif algo == "pso":
            source = SurrogateManager(spec, config=scfg) if scfg.enabled else spec
            res = pso_run(spec, acfg, source, log=log, threads=threads)
            front = [res.best]
            if scfg.enabled:
                n_evaluated = source.counters.n_evaluated
                n_predicted = source.counters.n_predicted
            else:
                n_evaluated = res.n_requests
        else:
            if spec.n_objectives != 1:
                raise ConfigError(
                    "algorithm.name: nelder_mead requires a single-objective problem")
            res = nelder_mead_run(lambda x: spec.evaluate(x)[0], acfg)
            best = Individual(x=res.x, f=np.array([res.f]))
            log.append(best)
            front = [best]
            n_evaluated = res.n_evaluations
        elapsed = time.perf_counter() - t0
        log.append_summary(elapsed, n_predicted, n_evaluated)

    lines = ["# " + " ".join(
        [p.name for p in spec.parameters] + [f"f{j + 1}" for j in range(spec.n_objectives)])]
    for m in front:
        lines.append(_fmt(list(m.x) + list(m.f)))
    (outdir / "front.txt").write_text("\n".join(lines) + "\n", encoding="utf-8")

    summary = {
        "run_id": rid,
        "problem": cfg["problem"]["id"],
        "algorithm": algo,
        "elapsed_s": elapsed,
        "n_evaluated": int(n_evaluated),
        "n_predicted": int(n_predicted),
        "n_requests": int(n_evaluated + n_predicted),
    }
    (outdir / "summary.json").write_text(
        json.dumps(summary, indent=2, sort_keys=True) + "\n", encoding="utf-8")
    print(f"optimize: wrote {outdir}/front.txt "
          f"(evaluated {n_evaluated}, predicted {n_predicted}, "
          f"{elapsed:.2f} s)")
    return 0


def _heat_setup(cfg: dict):
    h = cfg["rom"]["heat"]
    sys_ = heat_fd_model(n_nodes=h["n_nodes"], conductivity=h["conductivity"],
                         density=h["density"], heat_capacity=h["heat_capacity"],
                         dx=h["dx"], input_node=h["input_node"],
                         probe_nodes=tuple(h["probe_nodes"]))
    d = cfg["rom"]["drive"]
    t = np.linspace(0.0, d["t_end"], d["n_steps"])
    u = np.full(d["n_steps"], d["power"])
    return sys_, t, u


def cmd_rom_identify(args) -> int:
    cfg = _resolved_from_args(args)
    if args.order is not None:
        cfg["rom"]["order"] = args.order
    if args.trajectory is not None:
        cfg["rom"]["trajectory"] = args.trajectory
    outdir = _prepare_outdir(cfg)

    if cfg["rom"]["trajectory"]:
        t, u, y_ref = load_trajectory(cfg["rom"]["trajectory"])
    else:
        sys_, t, u = _heat_setup(cfg)
        full = pod_reduce(sys_, np.eye(sys_.n))
        y_ref = simulate_continuous(full, u, t)[:, cfg["rom"]["probe"]]

    icfg = IdentifyConfig(restarts=cfg["rom"]["restarts"], seed=cfg["run"]["seed"])
    res = identify(y_ref, u, cfg["rom"]["order"], icfg)
    y_fit = _reconstruct(res.params, u)
    peak = float(np.max(np.abs(y_ref))) or 1.0

    out = {
        "order": cfg["rom"]["order"],
        "delta": [float(v) for v in res.params.delta],
        "gamma": [float(v) for v in res.params.gamma],
        "objective": float(res.objective),
        "rel_peak_error": float(res.objective / peak),
        "n_evaluations": int(res.n_evaluations),
    }
    (outdir / "identified.yaml").write_text(
        yaml.safe_dump(out, sort_keys=True), encoding="utf-8")
    rows = ["# t u y_ref y_model"]
    for k in range(t.size):
        rows.append(_fmt([t[k], u[k], y_ref[k], y_fit[k]]))
    (outdir / "reconstruction.txt").write_text("\n".join(rows) + "\n", encoding="utf-8")
    print(f"rom identify: objective {res.objective:.6e} "
          f"({100 * res.objective / peak:.4f}% of peak) -> {outdir}")
    return 0


def _reconstruct(params, u):
    from .rom import build_schwartz_system, simulate_discrete
    return simulate_discrete(build_schwartz_system(params), u)


def cmd_rom_pod(args) -> int:
    cfg = _resolved_from_args(args)
    if args.r is not None:
        cfg["rom"]["r"] = args.r
    if args.snapshots is not None:
        cfg["rom"]["snapshots"] = args.snapshots
    outdir = _prepare_outdir(cfg)

    sys_, t, u = _heat_setup(cfg)
    full = pod_reduce(sys_, np.eye(sys_.n))
    if cfg["rom"]["snapshots"]:
        snap = load_snapshots(cfg["rom"]["snapshots"])
        if snap.n_nodes != sys_.n:
            raise ConfigError(
                f"rom.snapshots: file has {snap.n_nodes} node rows, "
                f"the heat model has {sys_.n}")
        t = snap.times
        u = np.full(t.size, cfg["rom"]["drive"]["power"])
    else:
        states = simulate_continuous_states(full, u, t)
        snap = SnapshotMatrix(values=states.T, times=t)

    basis = pod_modes(snap, cfg["rom"]["r"])
    reduced = pod_reduce(sys_, basis.modes)
    y_full = simulate_continuous(full, u, t)
    y_red = simulate_continuous(reduced, u, t)
    err = np.abs(y_red - y_full)
    peak = float(np.max(np.abs(y_full))) or 1.0

    np.savetxt(outdir / "modes.txt", basis.modes)
    blocks = ["# A"]
    blocks += [_fmt(row) for row in reduced.A]
    blocks.append("# B")
    blocks.append(_fmt(np.atleast_1d(reduced.B)))
    blocks.append("# C")
    blocks += [_fmt(row) for row in reduced.C]
    (outdir / "reduced_system.txt").write_text("\n".join(blocks) + "\n", encoding="utf-8")

    summary = {
        "r": int(basis.r),
        "n_padded": int(basis.n_padded),
        "eigenvalues": [float(v) for v in basis.eigenvalues],
        "energy_fractions": [float(v) for v in basis.energy],
        "captured_energy": float(basis.captured_energy()),
        "max_abs_output_error": float(err.max()),
        "max_rel_output_error": float(err.max() / peak),
    }
    (outdir / "pod_summary.yaml").write_text(
        yaml.safe_dump(summary, sort_keys=True), encoding="utf-8")

    probes = list(range(y_full.shape[1]))
    header = ("# t " + " ".join(f"full{p}" for p in probes) + " "
              + " ".join(f"reduced{p}" for p in probes) + " "
              + " ".join(f"abserr{p}" for p in probes))
    rows = [header]
    for k in range(t.size):
        rows.append(_fmt([t[k], *y_full[k], *y_red[k], *err[k]]))
    (outdir / "pod_comparison.txt").write_text("\n".join(rows) + "\n", encoding="utf-8")
    print(f"rom pod: r={basis.r} captured {basis.captured_energy():.6f} "
          f"max rel err {summary['max_rel_output_error']:.3e} -> {outdir}")
    return 0


def cmd_team_eval(args) -> int:
    cfg = _resolved_from_args(args)
    outdir = _prepare_outdir(cfg)
    bcfg = build_benchmark_config(cfg)
    radii = cfg["problem"]["team"]["radii"]
    r = bcfg.mid_radii() if radii is None else np.asarray(radii, dtype=float)
    turns = build_turns(r, bcfg)

    R_grid = np.linspace(args.r0, args.r1, args.nr)
    Z_grid = np.linspace(args.z0, args.z1, args.nz)
    rows, n_inside = field_map(turns, R_grid, Z_grid, order=bcfg.quad_order)

    lines = ["# R Z Br Bz"]
    for row in rows:
        lines.append(_fmt(row))
    lines.append(f"# inside_points {n_inside}")
    (outdir / "field_map.txt").write_text("\n".join(lines) + "\n", encoding="utf-8")
    if n_inside:
        print(f"warning: {n_inside} grid points inside conductors (NaN components)",
              file=sys.stderr)
    print(f"team eval: wrote {outdir}/field_map.txt "
          f"({args.nr}x{args.nz} grid, {n_inside} inside)")
    return 0


def cmd_rank(args) -> int:
    cfg = _resolved_from_args(args)
    outdir = _prepare_outdir(cfg)
    log_path = Path(args.log) if args.log else outdir / "results.jsonl"
    if not log_path.exists():
        raise ConfigError(f"results log not found: {log_path}")

    records = [r for r in iter_log_records(log_path) if r.get("record") == "individual"]
    if not records:
        raise ConfigError(f"results log {log_path} holds no individual records")
    last_gen = max(r["generation"] for r in records)
    members = [individual_from_record(r) for r in records if r["generation"] == last_gen]
    front = pareto_front(members)

    spec = build_problem(cfg)
    objectives = [
        (lambda x, j=j: float(spec.evaluate(x)[j])) for j in range(spec.n_objectives)]
    report = robustness_rank(front, objectives, h=cfg["sensitivity"]["h"],
                             bounds=(spec.lower, spec.upper))

    lines = ["# rank index " + " ".join(p.name for p in spec.parameters) + " "
             + " ".join(f"f{j + 1}" for j in range(spec.n_objectives)) + " "
             + " ".join(f"s{j + 1}" for j in range(spec.n_objectives))]
    for rank, e in enumerate(report.entries):
        svals = list(e.s) if e.s is not None else [float("nan")] * spec.n_objectives
        lines.append(f"{rank} {e.index} " + _fmt(list(e.x) + list(e.f) + svals))
    (outdir / "ranked.txt").write_text("\n".join(lines) + "\n", encoding="utf-8")
    print(f"rank: wrote {outdir}/ranked.txt ({len(report.entries)} front members, "
          f"generation {last_gen})")
    return 0


def _add_common(p: argparse.ArgumentParser, surrogate: bool = False) -> None:
    p.add_argument("--config", help="YAML run configuration")
    p.add_argument("--seed", type=int, help="override run.seed")
    p.add_argument("--out", help="override run.out output directory")
    p.add_argument("--threads", type=int, help="override run.threads")
    if surrogate:
        p.add_argument("--surrogate", choices=("on", "off"),
                       help="override surrogate.enabled")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="rdopt",
        description="robust design optimization runs, reduced-order modeling, "
                    "coil-field maps, and Pareto robustness ranking")
    sub = parser.add_subparsers(dest="command", required=True)

    p_opt = sub.add_parser("optimize", help="run the configured optimization")
    _add_common(p_opt, surrogate=True)
    p_opt.set_defaults(func=cmd_optimize)

    p_rom = sub.add_parser("rom", help="reduced-order modeling tools")
    rom_sub = p_rom.add_subparsers(dest="rom_command", required=True)
    p_ident = rom_sub.add_parser("identify", help="fit a discrete LTI model")
    _add_common(p_ident)
    p_ident.add_argument("--order", type=int, help="override rom.order")
    p_ident.add_argument("--trajectory", help="trajectory file (t, u, y rows)")
    p_ident.set_defaults(func=cmd_rom_identify)
    p_pod = rom_sub.add_parser("pod", help="project the heat model onto POD modes")
    _add_common(p_pod)
    p_pod.add_argument("--r", type=int, help="override rom.r (mode count)")
    p_pod.add_argument("--snapshots", help="snapshot file (time-stamp header row)")
    p_pod.set_defaults(func=cmd_rom_pod)

    p_team = sub.add_parser("team", help="coil-field benchmark tools")
    team_sub = p_team.add_subparsers(dest="team_command", required=True)
    p_eval = team_sub.add_parser("eval", help="write a field map over a grid")
    _add_common(p_eval)
    p_eval.add_argument("--r0", type=float, default=0.0)
    p_eval.add_argument("--r1", type=float, default=0.008)
    p_eval.add_argument("--nr", type=int, default=17)
    p_eval.add_argument("--z0", type=float, default=-0.008)
    p_eval.add_argument("--z1", type=float, default=0.008)
    p_eval.add_argument("--nz", type=int, default=17)
    p_eval.set_defaults(func=cmd_team_eval)

    p_rank = sub.add_parser("rank", help="robustness-rank a results log's final front")
    _add_common(p_rank)
    p_rank.add_argument("--log", help="results log (default: <out>/results.jsonl)")
    p_rank.set_defaults(func=cmd_rank)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ConfigError, ContractError, FileNotFoundError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except RdoptError as exc:
        print(f"runtime error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
