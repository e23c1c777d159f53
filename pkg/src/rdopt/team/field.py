"""Semi-analytical magnetostatic field of axisymmetric rectangular turns.

A turn is a circular conductor of rectangular cross-section
[R1, R2] x [Z1, Z2] carrying a uniformly distributed direct current.
The flux-density components at a point P(R, Z) outside the cross-section
are four-term combinations of the integrals

    g(Ri, R, Zj - Z) =  int_0^{2pi} ln[Ri - R cos(phi) + d_ij] cos(phi) dphi
    h(Ri, R, Zj - Z) = -int_0^{2pi} ln[Zj - Z + d_ij] dphi
    d_ij = sqrt(Ri^2 + R^2 - 2 Ri R cos(phi) + (Z - Zj)^2)

scaled by C = mu0 I / (4 pi (Z2 - Z1) ln(R2 / R1)), evaluated with
Gauss-Legendre quadrature over phi.  Fields of several turns superpose.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .. import _kernels
from ..errors import ContractError, DomainError, IntegrationError

MU0 = _kernels.MU0

__all__ = ["Turn", "quad_phi", "turn_field", "total_field", "field_map", "MU0"]


@dataclass(frozen=True)
class Turn:
    """One circular turn of rectangular cross-section.

    R1/R2 are the inner/outer radii, Z1/Z2 the axial extents (meters),
    I the current (amperes).
    """

    R1: float
    R2: float
    Z1: float
    Z2: float
    I: float

    def __post_init__(self):
        if not (0.0 < self.R1 < self.R2):
            raise ContractError(f"turn radii must satisfy 0 < R1 < R2, got {self.R1}, {self.R2}")
        if not (self.Z1 < self.Z2):
            raise ContractError(f"turn heights must satisfy Z1 < Z2, got {self.Z1}, {self.Z2}")

    @property
    def thickness(self) -> float:
        return self.R2 - self.R1

    def geom_row(self) -> np.ndarray:
        return np.array([self.R1, self.R2, self.Z1, self.Z2, self.I])

    def contains(self, R: float, Z: float) -> bool:
        return (self.R1 <= R <= self.R2) and (self.Z1 <= Z <= self.Z2)

    def distance_to(self, R: float, Z: float) -> float:
        """Euclidean distance from (R, Z) to the cross-section rectangle."""
        dr = max(self.R1 - R, 0.0, R - self.R2)
        dz = max(self.Z1 - Z, 0.0, Z - self.Z2)
        return float(np.hypot(dr, dz))


@lru_cache(maxsize=32)
def _phi_rule(order: int) -> tuple[np.ndarray, np.ndarray]:
    """Gauss-Legendre rule of the given order mapped onto [0, 2*pi]."""
    if order < 2:
        raise ContractError(f"quadrature order must be >= 2, got {order}")
    t, w = np.polynomial.legendre.leggauss(order)
    nodes = np.pi * (t + 1.0)
    weights = np.pi * w
    nodes.setflags(write=False)
    weights.setflags(write=False)
    return nodes, weights


def quad_phi(f, order: int) -> float:
    """Integrate f over [0, 2*pi] with a Gauss-Legendre rule of given order."""
    nodes, weights = _phi_rule(order)
    vals = np.asarray([f(phi) for phi in nodes], dtype=float)
    if not np.all(np.isfinite(vals)):
        raise IntegrationError("non-finite integrand sample in phi quadrature")
    return float(np.dot(weights, vals))


def _validate_points(turns, R, Z):
    for t in turns:
        for r, z in zip(R, Z):
            if r < 0.0:
                raise DomainError(f"evaluation radius must be >= 0, got {r}")
            if t.contains(r, z):
                raise DomainError(
                    f"point (R={r}, Z={z}) lies inside the conductor cross-section "
                    f"[{t.R1}, {t.R2}] x [{t.Z1}, {t.Z2}]"
                )


def _field_sum(turns, R, Z, order, auto_refine=True):
    """Superposed (Br, Bz) at each point; NaN components for inside points.

    Evaluation points within one turn-thickness of a conductor use a
    doubled quadrature order for that turn (near-singular integrand).
    """
    R = np.asarray(R, dtype=float)
    Z = np.asarray(Z, dtype=float)
    n = R.size
    br = np.zeros(n)
    bz = np.zeros(n)
    inside = np.zeros(n, dtype=bool)

    # group (turn, point) pairs by required quadrature order
    groups: dict[int, list[tuple[int, Turn]]] = {}
    for t in turns:
        for p in range(n):
            if R[p] < 0.0:
                raise DomainError(f"evaluation radius must be >= 0, got {R[p]}")
            if t.contains(R[p], Z[p]):
                inside[p] = True
                continue
            q = order
            if auto_refine and t.distance_to(R[p], Z[p]) < t.thickness:
                q = 2 * order
            groups.setdefault(q, []).append((p, t))

    for q, pairs in sorted(groups.items()):
        nodes, weights = _phi_rule(q)
        geom = np.array([t.geom_row() for _, t in pairs])
        pr = np.array([R[p] for p, _ in pairs])
        pz = np.array([Z[p] for p, _ in pairs])
        gbr, gbz = _kernels.field_pairs(geom, pr, pz, nodes, weights)
        for (p, _), vr, vz in zip(pairs, gbr, gbz):
            br[p] += vr
            bz[p] += vz

    br[inside] = np.nan
    bz[inside] = np.nan
    return br, bz, inside


def turn_field(turn: Turn, R: float, Z: float, order: int = 64,
               auto_refine: bool = True) -> tuple[float, float]:
    """(Br, Bz) of a single turn at P(R, Z) in tesla.

    Raises DomainError when the point lies inside the conductor
    cross-section, IntegrationError when the quadrature hits the
    conductor surface.
    """
    br, bz, inside = _field_sum([turn], [R], [Z], order, auto_refine)
    if inside[0]:
        raise DomainError(
            f"point (R={R}, Z={Z}) lies inside the conductor cross-section")
    if not (np.isfinite(br[0]) and np.isfinite(bz[0])):
        raise IntegrationError(
            f"field quadrature hit the conductor surface at (R={R}, Z={Z})")
    return float(br[0]), float(bz[0])


def total_field(turns, R: float, Z: float, order: int = 64,
                auto_refine: bool = True) -> tuple[float, float]:
    """Superposition of the partial fields of all turns at P(R, Z)."""
    br, bz, inside = _field_sum(list(turns), [R], [Z], order, auto_refine)
    if inside[0]:
        raise DomainError(
            f"point (R={R}, Z={Z}) lies inside a conductor cross-section")
    if not (np.isfinite(br[0]) and np.isfinite(bz[0])):
        raise IntegrationError(
            f"field quadrature hit a conductor surface at (R={R}, Z={Z})")
    return float(br[0]), float(bz[0])


def field_at_points(turns, R, Z, order: int = 64, auto_refine: bool = True):
    """Vectorized superposed field; raises on points inside conductors."""
    br, bz, inside = _field_sum(list(turns), R, Z, order, auto_refine)
    if inside.any():
        p = int(np.argmax(inside))
        raise DomainError(
            f"point (R={np.asarray(R, dtype=float)[p]}, Z={np.asarray(Z, dtype=float)[p]}) "
            "lies inside a conductor cross-section")
    return br, bz


def field_map(turns, R_grid, Z_grid, order: int = 64):
    """Field over a grid, row-major in Z then R.

    Grid points inside a conductor yield NaN components instead of an
    error.  Returns (rows, n_inside) where rows is an (nz*nr, 4) array
    of [R, Z, Br, Bz].
    """
    R_grid = np.asarray(R_grid, dtype=float)
    Z_grid = np.asarray(Z_grid, dtype=float)
    RR = np.concatenate([R_grid for _ in Z_grid]) if Z_grid.size else np.array([])
    ZZ = np.concatenate([np.full(R_grid.size, z) for z in Z_grid]) if Z_grid.size else np.array([])
    br, bz, inside = _field_sum(list(turns), RR, ZZ, order)
    rows = np.column_stack([RR, ZZ, br, bz])
    return rows, int(inside.sum())
