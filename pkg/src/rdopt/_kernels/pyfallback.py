"""Pure numpy implementation of the hot kernels.

Used when the compiled extension is unavailable or disabled via
``RDOPT_PURE_PYTHON=1``.  Signatures and semantics mirror ``_fastkern``.
"""

from __future__ import annotations

import numpy as np

MU0 = 4.0e-7 * np.pi


def field_pairs(geom, Rp, Zp, nodes, weights):
    """Single-turn flux density for K (turn, point) pairs.

    geom : (K, 5) array of [R1, R2, Z1, Z2, I] per pair
    Rp, Zp : (K,) evaluation point coordinates
    nodes, weights : quadrature rule on [0, 2*pi]

    Returns (br, bz), each (K,).  A pair whose log integrand hits a
    non-positive argument (evaluation point on the conductor surface)
    yields NaN for both components.
    """
    geom = np.asarray(geom, dtype=float)
    R = np.asarray(Rp, dtype=float)[:, None]
    Z = np.asarray(Zp, dtype=float)[:, None]
    cosphi = np.cos(np.asarray(nodes, dtype=float))[None, :]
    w = np.asarray(weights, dtype=float)[None, :]

    R1 = geom[:, 0][:, None]
    R2 = geom[:, 1][:, None]
    Z1 = geom[:, 2][:, None]
    Z2 = geom[:, 3][:, None]
    cur = geom[:, 4]

    K = geom.shape[0]
    br = np.zeros(K)
    bz = np.zeros(K)
    bad = np.zeros(K, dtype=bool)

    for i, Ri in enumerate((R1, R2)):
        for j, Zj in enumerate((Z1, Z2)):
            sign = 1.0 if i == j else -1.0
            d = np.sqrt(Ri * Ri + R * R - 2.0 * Ri * R * cosphi + (Z - Zj) ** 2)
            arg_g = Ri - R * cosphi + d
            arg_h = Zj - Z + d
            bad |= np.any(arg_g <= 0.0, axis=1) | np.any(arg_h <= 0.0, axis=1)
            with np.errstate(invalid="ignore", divide="ignore"):
                br += sign * np.sum(w * np.log(arg_g) * cosphi, axis=1)
                bz -= sign * np.sum(w * np.log(arg_h), axis=1)

    coef = MU0 * cur / (4.0 * np.pi * (Z2[:, 0] - Z1[:, 0]) * np.log(R2[:, 0] / R1[:, 0]))
    br *= coef
    bz *= coef
    br[R[:, 0] == 0.0] = 0.0
    br[bad] = np.nan
    bz[bad] = np.nan
    return br, bz


def lti_outputs(A, B, C, u, x0):
    """Discrete LTI recursion y_k = C x_k, x_{k+1} = A x_k + B u_k."""
    A = np.asarray(A, dtype=float)
    B = np.asarray(B, dtype=float)
    C = np.asarray(C, dtype=float)
    u = np.asarray(u, dtype=float)
    x = np.array(x0, dtype=float)
    y = np.empty(u.shape[0])
    for k in range(u.shape[0]):
        y[k] = C @ x
        x = A @ x + B * u[k]
    return y
