# cython: boundscheck=False, wraparound=False, cdivision=True, language_level=3
"""Compiled hot kernels: coil-field quadrature and the LTI recursion.

Semantics match rdopt._kernels.pyfallback exactly (modulo floating-point
summation order).
"""

import numpy as np

cimport numpy as cnp
from libc.math cimport cos, log, sqrt

cnp.import_array()

cdef double MU0 = 4.0e-7 * 3.14159265358979323846
cdef double PI = 3.14159265358979323846


def field_pairs(geom_in, Rp_in, Zp_in, nodes_in, weights_in):
    """Single-turn flux density for K (turn, point) pairs; see pyfallback."""
    cdef const double[:, ::1] geom = np.ascontiguousarray(geom_in, dtype=np.float64)
    cdef const double[::1] Rp = np.ascontiguousarray(Rp_in, dtype=np.float64)
    cdef const double[::1] Zp = np.ascontiguousarray(Zp_in, dtype=np.float64)
    cdef const double[::1] w = np.ascontiguousarray(weights_in, dtype=np.float64)
    cdef const double[::1] cosphi = np.cos(np.ascontiguousarray(nodes_in, dtype=np.float64))

    cdef Py_ssize_t K = geom.shape[0]
    cdef Py_ssize_t Q = w.shape[0]
    br_np = np.zeros(K, dtype=np.float64)
    bz_np = np.zeros(K, dtype=np.float64)
    cdef double[::1] br = br_np
    cdef double[::1] bz = bz_np

    cdef Py_ssize_t k, q, i, j
    cdef double R1, R2, Z1, Z2, cur, coef, R, Z, Ri, Zj, sign
    cdef double d, arg_g, arg_h, acc_r, acc_z, c, dz, dz2, rr
    cdef bint bad

    for k in range(K):
        R1 = geom[k, 0]
        R2 = geom[k, 1]
        Z1 = geom[k, 2]
        Z2 = geom[k, 3]
        cur = geom[k, 4]
        R = Rp[k]
        Z = Zp[k]
        coef = MU0 * cur / (4.0 * PI * (Z2 - Z1) * log(R2 / R1))
        acc_r = 0.0
        acc_z = 0.0
        bad = False
        rr = R * R
        for i in range(2):
            Ri = R1 if i == 0 else R2
            for j in range(2):
                Zj = Z1 if j == 0 else Z2
                sign = 1.0 if i == j else -1.0
                dz = Z - Zj
                dz2 = dz * dz
                for q in range(Q):
                    c = cosphi[q]
                    d = sqrt(Ri * Ri + rr - 2.0 * Ri * R * c + dz2)
                    arg_g = Ri - R * c + d
                    arg_h = Zj - Z + d
                    if arg_g <= 0.0 or arg_h <= 0.0:
                        bad = True
                        break
                    acc_r += sign * w[q] * log(arg_g) * c
                    acc_z -= sign * w[q] * log(arg_h)
                if bad:
                    break
            if bad:
                break
        if bad:
            br[k] = np.nan
            bz[k] = np.nan
        else:
            br[k] = 0.0 if R == 0.0 else coef * acc_r
            bz[k] = coef * acc_z
    return br_np, bz_np


def lti_outputs(A_in, B_in, C_in, u_in, x0_in):
    """Discrete LTI recursion y_k = C x_k, x_{k+1} = A x_k + B u_k."""
    cdef const double[:, ::1] A = np.ascontiguousarray(A_in, dtype=np.float64)
    cdef const double[::1] B = np.ascontiguousarray(B_in, dtype=np.float64)
    cdef const double[::1] C = np.ascontiguousarray(C_in, dtype=np.float64)
    cdef const double[::1] u = np.ascontiguousarray(u_in, dtype=np.float64)

    cdef Py_ssize_t T = u.shape[0]
    cdef Py_ssize_t n = A.shape[0]
    y_np = np.empty(T, dtype=np.float64)
    cdef double[::1] y = y_np
    x_np = np.array(x0_in, dtype=np.float64)
    cdef double[::1] x = x_np
    xn_np = np.empty(n, dtype=np.float64)
    cdef double[::1] xn = xn_np

    cdef Py_ssize_t k, i, j
    cdef double acc, uk
    cdef double[::1] tmp

    for k in range(T):
        acc = 0.0
        for i in range(n):
            acc += C[i] * x[i]
        y[k] = acc
        uk = u[k]
        for i in range(n):
            acc = B[i] * uk
            for j in range(n):
                acc += A[i, j] * x[j]
            xn[i] = acc
        tmp = x
        x = xn
        xn = tmp
    return y_np
