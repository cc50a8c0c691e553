# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled hot loops: cyclic Jacobi for Hermitian matrices and the
probability-only triple-product tensor.

Both functions mirror :mod:`refprob._fallback` exactly; the two are
compared in ``tests/test_kernels.py``.
"""
import numpy as np
cimport numpy as cnp
from libc.math cimport sqrt

cnp.import_array()

cdef extern from "complex.h" nogil:
    double cabs(double complex)
    double complex conj(double complex)
    double creal(double complex)


def jacobi_eigh(A, double tol=1e-15, int max_sweeps=60):
    """Diagonalize a Hermitian matrix with cyclic (row-order) Jacobi sweeps.

    Returns ``(w, V)`` with unsorted real eigenvalues ``w`` and unitary ``V``
    such that ``A = V diag(w) V^H``.
    """
    cdef cnp.ndarray[cnp.complex128_t, ndim=2] a = np.array(A, dtype=np.complex128, order="C", copy=True)
    cdef Py_ssize_t n = a.shape[0]
    cdef cnp.ndarray[cnp.complex128_t, ndim=2] v = np.eye(n, dtype=np.complex128)
    cdef Py_ssize_t p, q, k
    cdef int sweep
    cdef double off, frob, r, app, aqq, theta, t, c, s
    cdef double complex g, upp, upq, uqp, uqq, x, y

    frob = 0.0
    for p in range(n):
        for q in range(n):
            frob += cabs(a[p, q]) ** 2
    frob = sqrt(frob)
    if frob == 0.0:
        return np.zeros(n), v

    for sweep in range(max_sweeps):
        off = 0.0
        for p in range(n):
            for q in range(p + 1, n):
                off += cabs(a[p, q]) ** 2
        if sqrt(2.0 * off) <= tol * frob:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                r = cabs(a[p, q])
                if r <= 1e-300 or r < 1e-18 * frob:
                    continue
                g = a[p, q] / r
                app = creal(a[p, p])
                aqq = creal(a[q, q])
                theta = (aqq - app) / (2.0 * r)
                if theta >= 0:
                    t = 1.0 / (theta + sqrt(theta * theta + 1.0))
                else:
                    t = -1.0 / (-theta + sqrt(theta * theta + 1.0))
                c = 1.0 / sqrt(t * t + 1.0)
                s = t * c
                upp = c
                upq = s
                uqp = -s * conj(g)
                uqq = c * conj(g)
                for k in range(n):
                    x = a[k, p]
                    y = a[k, q]
                    a[k, p] = x * upp + y * uqp
                    a[k, q] = x * upq + y * uqq
                for k in range(n):
                    x = a[p, k]
                    y = a[q, k]
                    a[p, k] = conj(upp) * x + conj(uqp) * y
                    a[q, k] = conj(upq) * x + conj(uqq) * y
                a[p, q] = 0.0
                a[q, p] = 0.0
                a[p, p] = creal(a[p, p])
                a[q, q] = creal(a[q, q])
                for k in range(n):
                    x = v[k, p]
                    y = v[k, q]
                    v[k, p] = x * upp + y * uqp
                    v[k, q] = x * upq + y * uqq

    w = np.empty(n, dtype=np.float64)
    for p in range(n):
        w[p] = creal(a[p, p])
    return w, v


def triple_from_p(P, double d):
    """R_ijk = 1/2 [c sum_m P_im P_jm P_km - P_jk - P_ij - P_ik - d/n],
    with c = (d+1)(d+2)(n/d)."""
    cdef double[:, ::1] pm = np.ascontiguousarray(P, dtype=np.float64)
    cdef double[:, ::1] pt = np.ascontiguousarray(np.asarray(P, dtype=np.float64).T)
    cdef Py_ssize_t n = pm.shape[0]
    out_arr = np.empty((n, n, n), dtype=np.float64)
    cdef double[:, :, ::1] out = out_arr
    cdef Py_ssize_t i, j, k, m
    cdef double coeff = (d + 1.0) * (d + 2.0) * (n / d)
    cdef double bias = d / n
    cdef double w
    cdef double[::1] row
    for i in range(n):
        for j in range(n):
            row = out[i, j]
            for k in range(n):
                row[k] = 0.0
            # row_k += P_im P_jm P_km, streamed over contiguous rows of P^T
            for m in range(n):
                w = coeff * pm[i, m] * pm[j, m]
                for k in range(n):
                    row[k] += w * pt[m, k]
            for k in range(n):
                row[k] = 0.5 * (row[k] - pm[j, k] - pm[i, j] - pm[i, k] - bias)
    return out_arr
