"""Independent reference implementations used to check the package.

Everything here is deliberately written from the definitions (plain
loops, dense solves, closed forms) rather than reusing package code.
"""

import numpy as np


def dominates_bf(a, b) -> bool:
    le, lt = True, False
    for ai, bi in zip(a, b):
        if ai > bi:
            le = False
        if ai < bi:
            lt = True
    return le and lt


def pareto_indices_bf(costs) -> list:
    out = []
    for i, ci in enumerate(costs):
        if not any(dominates_bf(cj, ci) for j, cj in enumerate(costs) if j != i):
            out.append(i)
    return out


def peeling_sort_bf(costs) -> list:
    """Non-dominated sorting by repeated front removal."""
    remaining = list(range(len(costs)))
    fronts = []
    while remaining:
        sub = [costs[i] for i in remaining]
        keep = pareto_indices_bf(sub)
        front = [remaining[k] for k in keep]
        fronts.append(front)
        remaining = [i for i in remaining if i not in set(front)]
    return fronts


def hypervolume_2d(costs, ref) -> float:
    """Dominated area between a 2-objective set and a reference point."""
    pts = [tuple(c) for c in costs
           if c[0] < ref[0] and c[1] < ref[1] and np.all(np.isfinite(c))]
    if not pts:
        return 0.0
    nd = [pts[i] for i in pareto_indices_bf(pts)]
    # drop duplicates, sort ascending in f1 (f2 is then strictly descending)
    nd = sorted(set(nd))
    hv = 0.0
    for i, (f1, f2) in enumerate(nd):
        f1_next = nd[i + 1][0] if i + 1 < len(nd) else ref[0]
        hv += (f1_next - f1) * (ref[1] - f2)
    return hv


def sbx_beta_cdf(b, eta) -> float:
    """Closed-form CDF of the SBX polynomial spread factor."""
    if b <= 0:
        return 0.0
    if b <= 1.0:
        return 0.5 * b ** (eta + 1.0)
    return 1.0 - 0.5 * b ** -(eta + 1.0)


def gp_dense_predict(X, y, xq, ell, sf, sn):
    """GP posterior by a dense solve (no cached factorization)."""
    X = np.atleast_2d(X)
    xq = np.atleast_2d(xq)

    def kern(A, B):
        d2 = ((A[:, None, :] - B[None, :, :]) / ell) ** 2
        return sf ** 2 * np.exp(-0.5 * d2.sum(axis=2))

    K = kern(X, X) + sn ** 2 * np.eye(X.shape[0])
    ybar = np.mean(y)
    ks = kern(xq, X)
    mean = ybar + ks @ np.linalg.solve(K, y - ybar)
    var = sf ** 2 - np.einsum("ij,ji->i", ks, np.linalg.solve(K, ks.T))
    return float(mean[0]), float(np.sqrt(max(var[0], 0.0)))
