#!/usr/bin/env python3
"""Timing comparison of the compiled kernels against the numpy fallback.

Run after building the extension in place:

    python benchmarks/bench_backends.py
"""

import time

import numpy as np

from rdopt._kernels import BACKEND, pyfallback

try:
    from rdopt._kernels import _fastkern
except ImportError:
    _fastkern = None


def _time(fn, *args, repeat=5):
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn(*args)
        best = min(best, time.perf_counter() - t0)
    return best


def bench_field_pairs(n_pairs=630, order=64):
    rng = np.random.default_rng(0)
    r_mid = rng.uniform(0.01, 0.05, n_pairs)
    geom = np.column_stack([
        r_mid - 5e-4, r_mid + 5e-4,
        rng.uniform(-0.01, 0.0, n_pairs), rng.uniform(0.001, 0.01, n_pairs),
        np.ones(n_pairs),
    ])
    Rp = rng.uniform(0.0, 0.006, n_pairs)
    Zp = rng.uniform(-0.005, 0.005, n_pairs)
    t, w = np.polynomial.legendre.leggauss(order)
    nodes, weights = np.pi * (t + 1.0), np.pi * w

    rows = []
    t_py = _time(pyfallback.field_pairs, geom, Rp, Zp, nodes, weights)
    rows.append(("field_pairs", "python", t_py))
    if _fastkern is not None:
        t_cy = _time(_fastkern.field_pairs, geom, Rp, Zp, nodes, weights)
        rows.append(("field_pairs", "cython", t_cy))
        br_p, bz_p = pyfallback.field_pairs(geom, Rp, Zp, nodes, weights)
        br_c, bz_c = _fastkern.field_pairs(geom, Rp, Zp, nodes, weights)
        assert np.allclose(br_p, br_c, rtol=1e-12) and np.allclose(bz_p, bz_c, rtol=1e-12)
    return rows


def bench_lti(order=4, n_steps=400, repeat=200):
    rng = np.random.default_rng(1)
    q, _ = np.linalg.qr(rng.standard_normal((order, order)))
    A = 0.95 * q
    B = rng.standard_normal(order)
    C = rng.standard_normal(order)
    u = rng.standard_normal(n_steps)
    x0 = np.zeros(order)

    def many(impl):
        def run():
            for _ in range(repeat):
                impl.lti_outputs(A, B, C, u, x0)
        return run

    rows = [("lti_outputs x%d" % repeat, "python", _time(many(pyfallback)))]
    if _fastkern is not None:
        rows.append(("lti_outputs x%d" % repeat, "cython", _time(many(_fastkern))))
        assert np.allclose(pyfallback.lti_outputs(A, B, C, u, x0),
                           _fastkern.lti_outputs(A, B, C, u, x0), rtol=1e-12)
    return rows


def main():
    print(f"active backend: {BACKEND}")
    if _fastkern is None:
        print("compiled extension not available; timing the fallback only\n")
    rows = bench_field_pairs() + bench_lti()
    print(f"{'kernel':<20} {'backend':<8} {'best time':>12}")
    by_kernel = {}
    for kernel, backend, t in rows:
        print(f"{kernel:<20} {backend:<8} {t * 1e3:>10.3f} ms")
        by_kernel.setdefault(kernel, {})[backend] = t
    for kernel, d in by_kernel.items():
        if "cython" in d and "python" in d:
            print(f"{kernel}: cython speedup {d['python'] / d['cython']:.1f}x")


if __name__ == "__main__":
    main()
