# cython: boundscheck=False, wraparound=False, cdivision=True, language_level=3
"""Compiled coordinate-descent kernels.

Twin of the pure NumPy module ``spcor._cdkernels``: same entry points,
same update order, same convergence semantics.  Data matrices must be
Fortran-ordered so that columns are contiguous.
"""

import numpy as np

cimport numpy as cnp

cnp.import_array()

BACKEND_NAME = "c"


cdef inline double _dot(const double* a, const double* b, Py_ssize_t n) noexcept nogil:
    cdef Py_ssize_t k
    cdef double s = 0.0
    for k in range(n):
        s += a[k] * b[k]
    return s


cdef inline void _axpy(double alpha, const double* x, double* y, Py_ssize_t n) noexcept nogil:
    cdef Py_ssize_t k
    for k in range(n):
        y[k] += alpha * x[k]


cdef double _lasso_sweep(const double[::1, :] X, const double[::1] gram, double gamma,
                         double[::1] beta, double[::1] resid,
                         const long[::1] idx, Py_ssize_t n_idx,
                         long long* iterations) noexcept nogil:
    cdef Py_ssize_t n = X.shape[0]
    cdef Py_ssize_t t, j
    cdef double g, b_old, b_new, z, thr, delta, max_delta = 0.0
    for t in range(n_idx):
        j = idx[t]
        iterations[0] += 1
        g = gram[j]
        if g == 0.0:
            continue
        b_old = beta[j]
        z = _dot(&resid[0], &X[0, j], n) / g + b_old
        thr = gamma / g
        if z > thr:
            b_new = z - thr
        elif z < -thr:
            b_new = z + thr
        else:
            b_new = 0.0
        if b_new != b_old:
            _axpy(b_old - b_new, &X[0, j], &resid[0], n)
            beta[j] = b_new
            delta = b_new - b_old
            if delta < 0.0:
                delta = -delta
            if delta > max_delta:
                max_delta = delta
    return max_delta


def lasso_cd(double[::1, :] X, double[::1] gram, double gamma,
             double[::1] beta, double[::1] resid,
             double tol, long max_sweeps, bint active):
    """See ``spcor._cdkernels.lasso_cd``; identical contract."""
    cdef Py_ssize_t p = X.shape[1]
    cdef long long iterations = 0
    cdef long sweeps = 0
    cdef Py_ssize_t j, n_active
    cdef double max_delta

    cdef cnp.ndarray[long, ndim=1] all_np = np.arange(p, dtype=np.dtype("long"))
    cdef long[::1] all_idx = all_np
    cdef cnp.ndarray[long, ndim=1] act_np = np.empty(p, dtype=np.dtype("long"))
    cdef long[::1] act_idx = act_np

    if not active:
        while sweeps < max_sweeps:
            sweeps += 1
            max_delta = _lasso_sweep(X, gram, gamma, beta, resid, all_idx, p, &iterations)
            if max_delta < tol:
                return iterations, sweeps, True
        return iterations, sweeps, False

    while sweeps < max_sweeps:
        n_active = 0
        for j in range(p):
            if beta[j] != 0.0:
                act_idx[n_active] = j
                n_active += 1
        if n_active > 0:
            while sweeps < max_sweeps:
                sweeps += 1
                max_delta = _lasso_sweep(X, gram, gamma, beta, resid,
                                         act_idx, n_active, &iterations)
                if max_delta < tol:
                    break
        if sweeps >= max_sweeps:
            return iterations, sweeps, False
        sweeps += 1
        max_delta = _lasso_sweep(X, gram, gamma, beta, resid, all_idx, p, &iterations)
        if max_delta < tol:
            return iterations, sweeps, True
    return iterations, sweeps, False


cdef double _space_sweep(const double[::1, :] Y, double[::1, :] E,
                         const double[::1] c, const double[::1] xi,
                         const int[::1] pair_i, const int[::1] pair_j,
                         double lam, double[::1] rho,
                         const long[::1] idx, Py_ssize_t n_idx,
                         long long* iterations) noexcept nogil:
    cdef Py_ssize_t n = Y.shape[0]
    cdef Py_ssize_t t, k, i, j
    cdef double r, gram, a_ij, a_ji, z, thr, r_old, r_new, delta
    cdef double abs_delta, max_delta = 0.0
    for t in range(n_idx):
        k = idx[t]
        iterations[0] += 1
        i = pair_i[k]
        j = pair_j[k]
        r = c[i] / c[j]
        gram = xi[j] / (r * r) + xi[i] * (r * r)
        if gram == 0.0:
            continue
        a_ij = _dot(&E[0, j], &Y[0, i], n) * r
        a_ji = _dot(&E[0, i], &Y[0, j], n) / r
        z = (a_ij + a_ji) / gram + rho[k]
        thr = lam / gram
        if z > thr:
            r_new = z - thr
        elif z < -thr:
            r_new = z + thr
        else:
            r_new = 0.0
        r_old = rho[k]
        if r_new != r_old:
            delta = r_old - r_new
            _axpy(r * delta, &Y[0, i], &E[0, j], n)
            _axpy(delta / r, &Y[0, j], &E[0, i], n)
            rho[k] = r_new
            abs_delta = delta if delta > 0.0 else -delta
            if abs_delta > max_delta:
                max_delta = abs_delta
    return max_delta


def space_cd(double[::1, :] Y, double[::1, :] E,
             double[::1] c, double[::1] xi,
             int[::1] pair_i, int[::1] pair_j,
             double lam, double[::1] rho,
             double tol, long max_sweeps, bint active):
    """See ``spcor._cdkernels.space_cd``; identical contract."""
    cdef Py_ssize_t m = rho.shape[0]
    cdef long long iterations = 0
    cdef long sweeps = 0
    cdef Py_ssize_t k, n_active
    cdef double max_delta

    cdef cnp.ndarray[long, ndim=1] all_np = np.arange(m, dtype=np.dtype("long"))
    cdef long[::1] all_idx = all_np
    cdef cnp.ndarray[long, ndim=1] act_np = np.empty(m, dtype=np.dtype("long"))
    cdef long[::1] act_idx = act_np

    if not active:
        while sweeps < max_sweeps:
            sweeps += 1
            max_delta = _space_sweep(Y, E, c, xi, pair_i, pair_j, lam, rho,
                                     all_idx, m, &iterations)
            if max_delta < tol:
                return iterations, sweeps, True
        return iterations, sweeps, False

    while sweeps < max_sweeps:
        n_active = 0
        for k in range(m):
            if rho[k] != 0.0:
                act_idx[n_active] = k
                n_active += 1
        if n_active > 0:
            while sweeps < max_sweeps:
                sweeps += 1
                max_delta = _space_sweep(Y, E, c, xi, pair_i, pair_j, lam, rho,
                                         act_idx, n_active, &iterations)
                if max_delta < tol:
                    break
        if sweeps >= max_sweeps:
            return iterations, sweeps, False
        sweeps += 1
        max_delta = _space_sweep(Y, E, c, xi, pair_i, pair_j, lam, rho,
                                 all_idx, m, &iterations)
        if max_delta < tol:
            return iterations, sweeps, True
    return iterations, sweeps, False
