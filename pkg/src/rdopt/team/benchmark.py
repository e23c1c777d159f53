"""Field-uniformity benchmark problem over the turn radii.

The design variables are the radial midpoints of a stack of turns with
fixed cross-section, axial placement, and currents.  Objective F1 is the
worst-case deviation of the flux-density magnitude from the target B0
over a set of control points; F2 is a sensitivity measure comparing the
magnitude at each control point against radially shifted evaluation
points.

The shipped default geometry (10 turns, 1 A, 21 control points on a
rectangle boundary, B0 = 0.2 mT) is an artifact default chosen to put
the target field within reach of the radius bounds; only B0 is a given
of the underlying benchmark.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ..core import Parameter, ProblemSpec
from ..errors import ConfigError, DomainError
from .field import Turn, _field_sum

__all__ = [
    "ControlRegion",
    "BenchmarkConfig",
    "control_rectangle",
    "build_turns",
    "objective_f1",
    "objective_f2",
    "evaluate_objectives",
    "team_problem",
]


@dataclass(frozen=True)
class ControlRegion:
    """Control points (r_q, z_q) and the prescribed magnitude B0 (tesla)."""

    points: np.ndarray
    B0: float = 0.2e-3

    def __post_init__(self):
        pts = np.atleast_2d(np.asarray(self.points, dtype=float))
        if pts.shape[0] < 1 or pts.shape[1] != 2:
            raise ConfigError(f"control points must be (n_p, 2), got {pts.shape}")
        pts.setflags(write=False)
        object.__setattr__(self, "points", pts)
        if not self.B0 > 0:
            raise ConfigError(f"B0 must be positive, got {self.B0}")

    @property
    def n_points(self) -> int:
        return self.points.shape[0]


def control_rectangle(r_min: float, r_max: float, z_min: float, z_max: float,
                      n: int, B0: float = 0.2e-3) -> ControlRegion:
    """n points evenly spaced along the rectangle boundary, corner-first."""
    if n < 1:
        raise ConfigError("control region needs at least one point")
    w, h = r_max - r_min, z_max - z_min
    if w <= 0 or h <= 0:
        raise ConfigError("degenerate control rectangle")
    perim = 2.0 * (w + h)
    pts = []
    for k in range(n):
        s = perim * k / n
        if s < w:
            pts.append((r_min + s, z_min))
        elif s < w + h:
            pts.append((r_max, z_min + (s - w)))
        elif s < 2 * w + h:
            pts.append((r_max - (s - w - h), z_max))
        else:
            pts.append((r_min, z_max - (s - 2 * w - h)))
    return ControlRegion(np.array(pts), B0)


@dataclass(frozen=True)
class BenchmarkConfig:
    """Geometry, currents, control region, and numerical settings.

    r_bounds, z_extents and currents are per-turn; the design vector r
    holds one radial midpoint per turn.
    """

    r_bounds: tuple[tuple[float, float], ...]
    z_extents: tuple[tuple[float, float], ...]
    currents: tuple[float, ...]
    thickness: float = 1.0e-3
    control: ControlRegion = field(
        default_factory=lambda: control_rectangle(1.0e-3, 5.0e-3, -5.0e-3, 5.0e-3, 21))
    quad_order: int = 64
    delta_r: float = 0.5e-3

    def __post_init__(self):
        n = len(self.r_bounds)
        if n < 1:
            raise ConfigError("benchmark needs at least one turn")
        if len(self.z_extents) != n or len(self.currents) != n:
            raise ConfigError("r_bounds, z_extents and currents must have equal lengths")
        if self.thickness <= 0:
            raise ConfigError("turn thickness must be positive")
        for lo, hi in self.r_bounds:
            if not (lo < hi):
                raise ConfigError(f"radius bounds ({lo}, {hi}) must be increasing")
            if lo - self.thickness / 2.0 <= 0:
                raise ConfigError(
                    f"lower radius bound {lo} leaves inner radius <= 0 at "
                    f"thickness {self.thickness}")
        for z1, z2 in self.z_extents:
            if not (z1 < z2):
                raise ConfigError(f"axial extents ({z1}, {z2}) must be increasing")
        if self.quad_order < 2:
            raise ConfigError("quadrature order must be >= 2")
        if self.delta_r < 0:
            raise ConfigError("delta_r must be >= 0")

    @property
    def n_turns(self) -> int:
        return len(self.r_bounds)

    @classmethod
    def default(cls, n_turns: int = 10, r_lower: float = 10.0e-3,
                r_upper: float = 50.0e-3, turn_height: float = 1.5e-3,
                current: float = 1.0, **kwargs) -> "BenchmarkConfig":
        """Contiguous axial stack of identical turns centered about z = 0."""
        z0 = -0.5 * n_turns * turn_height
        z_extents = tuple(
            (z0 + i * turn_height, z0 + (i + 1) * turn_height) for i in range(n_turns))
        return cls(
            r_bounds=tuple((r_lower, r_upper) for _ in range(n_turns)),
            z_extents=z_extents,
            currents=tuple(current for _ in range(n_turns)),
            **kwargs,
        )

    def mid_radii(self) -> np.ndarray:
        return np.array([(lo + hi) / 2.0 for lo, hi in self.r_bounds])


def build_turns(r, cfg: BenchmarkConfig) -> list[Turn]:
    """Turns from the design radii; raises DomainError on invalid geometry."""
    r = np.asarray(r, dtype=float)
    if r.shape != (cfg.n_turns,):
        raise ConfigError(f"design vector has shape {r.shape}, expected ({cfg.n_turns},)")
    half = cfg.thickness / 2.0
    turns = []
    for i, ri in enumerate(r):
        if not np.isfinite(ri) or ri - half <= 0:
            raise DomainError(f"turn {i}: midpoint radius {ri} gives inner radius <= 0")
        z1, z2 = cfg.z_extents[i]
        turns.append(Turn(ri - half, ri + half, z1, z2, cfg.currents[i]))
    return turns


def _magnitudes(turns, pts, order):
    br, bz, inside = _field_sum(turns, pts[:, 0], pts[:, 1], order)
    if inside.any():
        raise DomainError("control point inside a conductor cross-section")
    mag = np.hypot(br, bz)
    if not np.all(np.isfinite(mag)):
        raise DomainError("field evaluation hit a conductor surface")
    return mag


def evaluate_objectives(r, cfg: BenchmarkConfig) -> np.ndarray:
    """(F1, F2) sharing one batched field evaluation.

    Invalid geometry or an invalid perturbed evaluation point encodes as
    +inf (infeasible for the optimizers).
    """
    try:
        turns = build_turns(r, cfg)
    except DomainError:
        return np.array([np.inf, np.inf])

    base = cfg.control.points
    pts = np.vstack([
        base,
        base + [cfg.delta_r, 0.0],
        base - [cfg.delta_r, 0.0],
    ])
    if np.any(pts[:, 0] < 0):
        return np.array([np.inf, np.inf])
    try:
        mag = _magnitudes(turns, pts, cfg.quad_order)
    except DomainError:
        return np.array([np.inf, np.inf])

    n_p = cfg.control.n_points
    m0 = mag[:n_p]
    m_plus = mag[n_p:2 * n_p]
    m_minus = mag[2 * n_p:]
    f1 = float(np.max(np.abs(m0 - cfg.control.B0)))
    f2 = float(np.max(np.abs(m0 - m_plus) + np.abs(m0 - m_minus)))
    return np.array([f1, f2])


def objective_f1(r, cfg: BenchmarkConfig) -> float:
    """Worst-case deviation of |B| from B0 over the control points."""
    try:
        turns = build_turns(r, cfg)
        mag = _magnitudes(turns, cfg.control.points, cfg.quad_order)
    except DomainError:
        return float("inf")
    return float(np.max(np.abs(mag - cfg.control.B0)))


def objective_f2(r, cfg: BenchmarkConfig) -> float:
    """Two-sided radial-perturbation sensitivity of |B| over the points."""
    f = evaluate_objectives(r, cfg)
    return float(f[1])


def team_problem(cfg: BenchmarkConfig | None = None) -> ProblemSpec:
    """Two-objective (F1, F2) problem over the per-turn midpoint radii."""
    if cfg is None:
        cfg = BenchmarkConfig.default()
    params = tuple(
        Parameter(f"r{i + 1}", lo, hi) for i, (lo, hi) in enumerate(cfg.r_bounds))
    return ProblemSpec(
        parameters=params,
        n_objectives=2,
        evaluator=lambda x: evaluate_objectives(x, cfg),
        name="team",
    )
