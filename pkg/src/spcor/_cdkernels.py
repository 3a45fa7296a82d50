"""Pure NumPy coordinate-descent kernels.

This module is the fallback twin of the compiled extension
``spcor._cdkernels_c``.  Both expose the same two entry points with
identical update order and convergence semantics, so results agree up to
floating-point rounding.  Callers are expected to go through
:mod:`spcor.backend` rather than importing either module directly.

Both kernels sweep coordinates in ascending index order.  One "iteration"
is one attempted coordinate update, whether or not the coefficient moves.
A sweep converges when the largest absolute coefficient change within it
falls below ``tol``.  In active mode the currently nonzero coordinates are
swept to convergence before each full sweep, and the whole solve stops
when a full sweep moves nothing beyond ``tol``.
"""

import numpy as np

BACKEND_NAME = "python"


def _lasso_sweep(X, gram, gamma, beta, resid, idx, counter):
    max_delta = 0.0
    for j in idx:
        counter[0] += 1
        g = gram[j]
        if g == 0.0:
            continue
        b_old = beta[j]
        z = resid @ X[:, j] / g + b_old
        t = gamma / g
        if z > t:
            b_new = z - t
        elif z < -t:
            b_new = z + t
        else:
            b_new = 0.0
        if b_new != b_old:
            resid += (b_old - b_new) * X[:, j]
            beta[j] = b_new
            delta = abs(b_new - b_old)
            if delta > max_delta:
                max_delta = delta
    return max_delta


def lasso_cd(X, gram, gamma, beta, resid, tol, max_sweeps, active):
    """Coordinate descent for 0.5*||y - X beta||^2 + gamma*||beta||_1.

    ``beta`` and ``resid`` hold the initial state and are updated in
    place; ``resid`` must equal ``y - X @ beta`` on entry.  Coordinates
    with a zero Gram diagonal are frozen at zero.

    Returns ``(iterations, sweeps, converged)``.
    """
    p = X.shape[1]
    counter = [0]
    sweeps = 0
    all_idx = range(p)

    if not active:
        while sweeps < max_sweeps:
            sweeps += 1
            if _lasso_sweep(X, gram, gamma, beta, resid, all_idx, counter) < tol:
                return counter[0], sweeps, True
        return counter[0], sweeps, False

    while sweeps < max_sweeps:
        active_idx = np.flatnonzero(beta).tolist()
        if active_idx:
            while sweeps < max_sweeps:
                sweeps += 1
                if _lasso_sweep(X, gram, gamma, beta, resid, active_idx, counter) < tol:
                    break
        if sweeps >= max_sweeps:
            return counter[0], sweeps, False
        sweeps += 1
        if _lasso_sweep(X, gram, gamma, beta, resid, all_idx, counter) < tol:
            return counter[0], sweeps, True
    return counter[0], sweeps, False


def _space_sweep(Y, E, c, xi, pair_i, pair_j, lam, rho, idx, counter):
    max_delta = 0.0
    for k in idx:
        counter[0] += 1
        i = pair_i[k]
        j = pair_j[k]
        r = c[i] / c[j]
        gram = xi[j] / (r * r) + xi[i] * (r * r)
        if gram == 0.0:
            continue
        a_ij = (E[:, j] @ Y[:, i]) * r
        a_ji = (E[:, i] @ Y[:, j]) / r
        z = (a_ij + a_ji) / gram + rho[k]
        t = lam / gram
        if z > t:
            r_new = z - t
        elif z < -t:
            r_new = z + t
        else:
            r_new = 0.0
        r_old = rho[k]
        if r_new != r_old:
            delta = r_old - r_new
            E[:, j] += (r * delta) * Y[:, i]
            E[:, i] += (delta / r) * Y[:, j]
            rho[k] = r_new
            if abs(delta) > max_delta:
                max_delta = abs(delta)
    return max_delta


def space_cd(Y, E, c, xi, pair_i, pair_j, lam, rho, tol, max_sweeps, active):
    """Coordinate descent over the pair space of the joint regression model.

    Parameters mirror the compiled kernel: ``Y`` is the (weighted) n x p
    data, ``E`` the n x p residual matrix updated in place, ``c`` the
    per-variable square roots of the (weighted) diagonal precision,
    ``xi`` the column squared norms of ``Y``, and ``rho`` the flat vector
    of pair coefficients updated in place.  ``pair_i``/``pair_j`` map flat
    pair positions to variable indices.

    Returns ``(iterations, sweeps, converged)``.
    """
    m = rho.shape[0]
    counter = [0]
    sweeps = 0
    all_idx = range(m)

    if not active:
        while sweeps < max_sweeps:
            sweeps += 1
            if _space_sweep(Y, E, c, xi, pair_i, pair_j, lam, rho, all_idx, counter) < tol:
                return counter[0], sweeps, True
        return counter[0], sweeps, False

    while sweeps < max_sweeps:
        active_idx = np.flatnonzero(rho).tolist()
        if active_idx:
            while sweeps < max_sweeps:
                sweeps += 1
                if _space_sweep(Y, E, c, xi, pair_i, pair_j, lam, rho,
                                active_idx, counter) < tol:
                    break
        if sweeps >= max_sweeps:
            return counter[0], sweeps, False
        sweeps += 1
        if _space_sweep(Y, E, c, xi, pair_i, pair_j, lam, rho, all_idx, counter) < tol:
            return counter[0], sweeps, True
    return counter[0], sweeps, False
