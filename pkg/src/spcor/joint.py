"""Joint sparse partial-correlation estimation.

The model regresses every variable on all others simultaneously, with the
regression coefficients tied together through the partial correlations:

    beta_ij = rho_ij * sqrt(sigma_jj / sigma_ii),

where ``rho_ij`` is the partial correlation of variables i and j and
``sigma_ii`` the i-th diagonal entry of the concentration matrix.  The
squared-error losses of the p regressions, optionally weighted per
variable, are summed and an L1 penalty ``lam * sum |rho_ij|`` is added.
Because one parameter serves both directions of a pair, the estimated
``beta_ij`` and ``beta_ji`` always share their sign.

Equivalently, stacking the weighted responses into a single length n*p
vector makes this a lasso problem over the p(p-1)/2 pair space whose
design has exactly two nonzero blocks per column.  The solver exploits
that structure: each pair update touches only the two residual columns
involved, exactly as a dense coordinate-descent step would on the stacked
design (see :func:`materialize_design` for the explicit construction,
used in verification).

Per-variable weights enter through the substitution
``sigma~_ii = sigma_ii / w_i`` together with column scaling
``Y~_i = sqrt(w_i) * Y_i``; the solver itself is weight-agnostic.

Fitting alternates a penalized solve for the partial correlations with a
closed-form update of the diagonal precision, three rounds by default,
starting from unit precision and unit weights on standardized data.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import backend
from .data import (
    DataMatrix,
    PartialCorrVector,
    Weights,
    n_pairs,
    pair_arrays,
    pair_to_flat,
    standardize,
)
from .errors import DegenerateResidual
from .solver import SolverConfig, SolverReport, soft_threshold

__all__ = [
    "JointState",
    "JointFit",
    "JointPath",
    "pair_gram",
    "max_penalty",
    "pair_correlation_update",
    "solve_partial_corr",
    "update_diag_precision",
    "compute_weights",
    "fit_joint",
    "fit_joint_path",
    "implied_coefficients",
    "residuals_from_theta",
    "materialize_design",
    "joint_kkt_violations",
]


# ---------------------------------------------------------------------------
# state containers


@dataclass
class JointState:
    """Mid-fit state: estimates plus the incrementally maintained residuals.

    ``residuals`` are on the raw (unweighted) scale, column i holding
    ``Y_i - sum_j beta_ij Y_j``; ``xi`` holds the column squared norms of
    the data.  Consistency of the maintained residuals with a from-scratch
    recomputation is a tested invariant.
    """

    data: np.ndarray
    theta: np.ndarray
    sigma: np.ndarray
    weights: np.ndarray
    residuals: np.ndarray
    xi: np.ndarray


@dataclass
class JointFit:
    """Result of one joint fit at a single penalty value."""

    theta: PartialCorrVector
    sigma: np.ndarray
    weights: Weights
    rss_per_variable: np.ndarray
    nonzero_count: int
    lam: float
    outer_iterations: int
    solver_iterations: int
    solver_sweeps: int
    converged: bool

    @property
    def p(self) -> int:
        return self.theta.p


@dataclass
class JointPath:
    """Per-penalty fits along a decreasing grid; failures recorded in place."""

    lambdas: np.ndarray
    fits: list
    errors: list

    def ok_entries(self):
        return [(lam, fit) for lam, fit in zip(self.lambdas, self.fits) if fit is not None]


# ---------------------------------------------------------------------------
# scale helpers


def _tilde(Y, sigma, weights):
    """Weighted data, per-variable scale roots, and weighted column norms."""
    sqw = np.sqrt(weights)
    Yt = np.asfortranarray(Y * sqw)
    c = np.sqrt(sigma / weights)
    xi = np.einsum("ij,ij->j", Yt, Yt)
    return Yt, c, xi


def pair_gram(i: int, j: int, sigma, weights, xi) -> float:
    """Squared norm of the stacked design column for pair (i, j).

    ``xi`` are the raw column squared norms Y_i'Y_i.  Equals
    ``w_i * xi_j * sigma_jj/sigma_ii + w_j * xi_i * sigma_ii/sigma_jj``,
    which reduces to ``xi_j + xi_i`` scaled by the precision ratio when
    the weights are uniform.
    """
    ratio = sigma[j] / sigma[i]
    return float(weights[i] * xi[j] * ratio + weights[j] * xi[i] / ratio)


def _pair_products(Yt, c, i_arr, j_arr):
    """Stacked-design inner products y'x_k and Gram diagonals for all pairs."""
    gram_mat = Yt.T @ Yt
    xi = np.diag(gram_mat)
    r = c[i_arr] / c[j_arr]
    yx = (r + 1.0 / r) * gram_mat[i_arr, j_arr]
    g = xi[j_arr] / (r * r) + xi[i_arr] * (r * r)
    return yx, g


def max_penalty(Y, sigma=None, weights=None) -> float:
    """Smallest penalty at which the fitted pair vector is identically zero.

    Computed from the initialization inner products, so the empty-model
    boundary is exact for the given precision/weight state (unit values
    by default).
    """
    Y = np.asarray(Y, dtype=np.float64)
    p = Y.shape[1]
    sigma = np.ones(p) if sigma is None else np.asarray(sigma, dtype=np.float64)
    weights = np.ones(p) if weights is None else np.asarray(weights, dtype=np.float64)
    Yt, c, _ = _tilde(Y, sigma, weights)
    i_arr, j_arr = pair_arrays(p)
    yx, _ = _pair_products(Yt, c, i_arr, j_arr)
    # relative headroom so a fit at exactly this value stays empty even
    # though the kernels re-derive the same inner products in a different
    # floating-point summation order
    return float(np.abs(yx).max()) * (1.0 + 1e-10)


def implied_coefficients(theta: np.ndarray, sigma: np.ndarray) -> np.ndarray:
    """Regression coefficient matrix B with B[i, j] = rho_ij sqrt(sigma_jj/sigma_ii).

    Row i holds the coefficients of the regression of variable i on the
    others; the diagonal is zero.  B[i, j] and B[j, i] share their sign by
    construction.
    """
    p = sigma.shape[0]
    i_arr, j_arr = pair_arrays(p)
    root = np.sqrt(sigma)
    B = np.zeros((p, p))
    B[i_arr, j_arr] = theta * root[j_arr] / root[i_arr]
    B[j_arr, i_arr] = theta * root[i_arr] / root[j_arr]
    return B


def residuals_from_theta(Y, theta, sigma) -> np.ndarray:
    """From-scratch residual matrix, column i = Y_i - sum_j beta_ij Y_j."""
    B = implied_coefficients(theta, sigma)
    return Y - Y @ B.T


# ---------------------------------------------------------------------------
# single-pair reference update


def pair_correlation_update(i: int, j: int, state: JointState, lam: float) -> float:
    """Reference single-pair coordinate update; state changes in place.

    Mirrors one kernel step on the pair (i, j): soft-threshold the
    pair-space gradient and incrementally correct the two residual
    columns involved.  Kept in plain NumPy for verification against both
    the kernels and the materialized stacked design.
    """
    Y = state.data
    w = state.weights
    p = state.sigma.shape[0]
    sigma_t = state.sigma / w
    r = np.sqrt(sigma_t[i] / sigma_t[j])
    k = pair_to_flat(i, j, p)
    # tilde-scale quantities: E~_i = sqrt(w_i) E_i, Y~_i = sqrt(w_i) Y_i
    sqw = np.sqrt(w)
    e_i = sqw[i] * state.residuals[:, i]
    e_j = sqw[j] * state.residuals[:, j]
    y_i = sqw[i] * Y[:, i]
    y_j = sqw[j] * Y[:, j]
    gram = (y_j @ y_j) * (1.0 / r) ** 2 + (y_i @ y_i) * r * r
    a_ij = (e_j @ y_i) * r
    a_ji = (e_i @ y_j) / r
    rho_old = state.theta[k]
    rho_new = float(soft_threshold((a_ij + a_ji) / gram + rho_old, lam / gram))
    if rho_new != rho_old:
        delta = rho_old - rho_new
        state.residuals[:, j] += (r * delta / sqw[j]) * y_i
        state.residuals[:, i] += (delta / (r * sqw[i])) * y_j
        state.theta[k] = rho_new
    return rho_new


# ---------------------------------------------------------------------------
# penalized solve for the partial correlations


def solve_partial_corr(Y, sigma, weights, lam, config: SolverConfig | None = None,
                       warm_start=None):
    """Minimize the weighted joint loss plus L1 penalty over all pairs.

    ``Y`` must be standardized (mean-zero columns).  Returns
    ``(theta, residuals, report)`` where ``residuals`` is the raw-scale
    n x p residual matrix consistent with ``theta``.

    Without a warm start each pair is initialized at its univariate
    soft-threshold solution; with one (for example the previous estimate
    while alternating with the precision update, or the fit at the
    previous penalty on a decreasing grid) the solve resumes from there.
    """
    if config is None:
        config = SolverConfig()
    Y = np.asarray(Y, dtype=np.float64)
    p = Y.shape[1]
    sigma = np.asarray(sigma, dtype=np.float64)
    weights = np.asarray(weights, dtype=np.float64)
    i_arr, j_arr = pair_arrays(p)

    Yt, c, xi = _tilde(Y, sigma, weights)
    if warm_start is None:
        yx, g = _pair_products(Yt, c, i_arr, j_arr)
        rho = soft_threshold(yx, lam)
        nz = g > 0
        rho[nz] /= g[nz]
        rho[~nz] = 0.0
    else:
        rho = np.array(warm_start, dtype=np.float64, copy=True)
        if rho.shape != (n_pairs(p),):
            raise ValueError("warm start has wrong length")

    # residuals of the weighted problem for the initial coefficients
    root = c
    Bt = np.zeros((p, p))
    Bt[i_arr, j_arr] = rho * root[i_arr] / root[j_arr]
    Bt[j_arr, i_arr] = rho * root[j_arr] / root[i_arr]
    E = np.asfortranarray(Yt - Yt @ Bt)

    kern = backend.kernels()
    iterations, sweeps, converged = kern.space_cd(
        Yt, E, c, xi, i_arr, j_arr, float(lam), rho,
        config.tol, config.max_sweeps, config.mode == "active_shooting",
    )
    resid_raw = E / np.sqrt(weights)
    report = SolverReport(beta=rho, iterations=int(iterations),
                          sweeps=int(sweeps), converged=bool(converged))
    return rho, resid_raw, report


def update_diag_precision(Y, theta, sigma_current) -> np.ndarray:
    """Closed-form precision update: sigma_ii = n / RSS_i.

    The residuals use the coefficients implied by the current estimates,
    ``beta_ij = rho_ij sqrt(sigma_jj_current / sigma_ii_current)``.

    Raises
    ------
    DegenerateResidual
        If some residual norm falls below 1e-12 (exact collinearity).
    """
    Y = np.asarray(Y, dtype=np.float64)
    n = Y.shape[0]
    E = residuals_from_theta(Y, theta, np.asarray(sigma_current, dtype=np.float64))
    rss = np.einsum("ij,ij->j", E, E)
    if np.any(np.sqrt(rss) < 1e-12):
        bad = int(np.argmin(rss))
        raise DegenerateResidual(f"residual of variable {bad} is numerically zero")
    return n / rss


def compute_weights(scheme: str, theta=None, sigma=None, p: int | None = None) -> Weights:
    """Weights for the next outer iteration.

    uniform: all ones.  residual_variance: the current diagonal precision
    estimates.  degree: proportional to the number of nonzero partial
    correlations per variable, with degree-zero variables floored at one
    before the vector is normalized to mean one (so the penalty keeps a
    comparable scale across iterations).
    """
    if scheme == "uniform":
        if p is None:
            raise ValueError("p is required for uniform weights")
        return Weights(np.ones(p), "uniform")
    if scheme == "residual_variance":
        if sigma is None:
            raise ValueError("sigma is required for residual_variance weights")
        return Weights(np.asarray(sigma, dtype=np.float64).copy(), "residual_variance")
    if scheme == "degree":
        if theta is None:
            raise ValueError("theta is required for degree weights")
        deg = theta.degrees().astype(np.float64) if isinstance(theta, PartialCorrVector) \
            else _degrees_from_flat(theta, p)
        raw = np.where(deg > 0, deg, 1.0)
        return Weights(raw / raw.mean(), "degree")
    raise ValueError(f"unknown weight scheme {scheme!r}")


def _degrees_from_flat(theta, p):
    i_arr, j_arr = pair_arrays(p)
    deg = np.zeros(p)
    nz = theta != 0.0
    np.add.at(deg, i_arr[nz], 1.0)
    np.add.at(deg, j_arr[nz], 1.0)
    return deg


# ---------------------------------------------------------------------------
# full fits


def _as_standardized_values(data) -> np.ndarray:
    if isinstance(data, DataMatrix):
        return standardize(data).values
    return standardize(DataMatrix(np.asarray(data, dtype=np.float64))).values


def _fit_std(Y, lam, scheme, config, outer_iterations, warm_start):
    n, p = Y.shape
    sigma = np.ones(p)
    weights = np.ones(p)
    theta = warm_start
    total_iter = 0
    total_sweeps = 0
    converged = True
    for _ in range(outer_iterations):
        theta, _, report = solve_partial_corr(Y, sigma, weights, lam, config,
                                              warm_start=theta)
        total_iter += report.iterations
        total_sweeps += report.sweeps
        converged = converged and report.converged
        sigma = update_diag_precision(Y, theta, sigma)
        weights = compute_weights(scheme, theta=PartialCorrVector(theta, p),
                                  sigma=sigma, p=p).w

    E = residuals_from_theta(Y, theta, sigma)
    rss = np.einsum("ij,ij->j", E, E)
    vec = PartialCorrVector(theta, p)
    return JointFit(
        theta=vec,
        sigma=sigma,
        weights=Weights(weights, scheme),
        rss_per_variable=rss,
        nonzero_count=vec.nonzero_count,
        lam=float(lam),
        outer_iterations=outer_iterations,
        solver_iterations=total_iter,
        solver_sweeps=total_sweeps,
        converged=converged,
    )


def fit_joint(data, lam: float, scheme: str = "uniform",
              config: SolverConfig | None = None, outer_iterations: int = 3,
              warm_start=None) -> JointFit:
    """Fit the joint model at one penalty value.

    The data are standardized, the diagonal precision starts at one and
    the weights at one regardless of scheme, and the procedure then
    alternates ``outer_iterations`` times between the penalized solve for
    the partial correlations (warm-started from the previous round) and
    the precision/weight updates.
    """
    if config is None:
        config = SolverConfig()
    Y = _as_standardized_values(data)
    return _fit_std(Y, lam, scheme, config, outer_iterations, warm_start)


def fit_joint_path(data, lambdas, scheme: str = "uniform",
                   config: SolverConfig | None = None,
                   outer_iterations: int = 3) -> JointPath:
    """Fit along a strictly decreasing penalty grid with warm starts.

    Each fit starts from its predecessor's estimate.  A failure at one
    grid point is recorded and the path continues; the nonzero count
    typically grows as the penalty decreases, which callers may inspect
    but which is not enforced.
    """
    lambdas = np.asarray(lambdas, dtype=np.float64)
    if lambdas.ndim != 1 or lambdas.size == 0:
        raise ValueError("need a nonempty 1-d penalty grid")
    if np.any(lambdas <= 0) or np.any(np.diff(lambdas) >= 0):
        raise ValueError("penalty grid must be strictly decreasing and positive")
    if config is None:
        config = SolverConfig()
    Y = _as_standardized_values(data)

    fits = []
    errors = []
    warm = None
    for lam in lambdas:
        try:
            fit = _fit_std(Y, lam, scheme, config, outer_iterations, warm)
            fits.append(fit)
            errors.append(None)
            warm = fit.theta.rho
        except Exception as exc:  # record and continue along the grid
            fits.append(None)
            errors.append(f"{type(exc).__name__}: {exc}")
    return JointPath(lambdas=lambdas, fits=fits, errors=errors)


# ---------------------------------------------------------------------------
# explicit stacked design (verification aid)


def materialize_design(Y, sigma, weights):
    """Explicit stacked response and design of the equivalent lasso problem.

    Returns ``(y_big, X_big)`` with ``y_big`` of length n*p and ``X_big``
    of shape (n*p, p(p-1)/2); column k for pair (i, j) carries
    ``sqrt(sigma~_jj/sigma~_ii) Y~_j`` in block i and the mirrored factor
    in block j.  Only intended for small p: the joint solver never forms
    this matrix.
    """
    Y = np.asarray(Y, dtype=np.float64)
    n, p = Y.shape
    sigma = np.asarray(sigma, dtype=np.float64)
    weights = np.asarray(weights, dtype=np.float64)
    Yt, c, _ = _tilde(Y, sigma, weights)
    m = n_pairs(p)
    y_big = Yt.T.reshape(-1)
    X_big = np.zeros((n * p, m))
    i_arr, j_arr = pair_arrays(p)
    for k in range(m):
        i, j = int(i_arr[k]), int(j_arr[k])
        X_big[i * n:(i + 1) * n, k] = (c[j] / c[i]) * Yt[:, j]
        X_big[j * n:(j + 1) * n, k] = (c[i] / c[j]) * Yt[:, i]
    return y_big, X_big


def joint_kkt_violations(Y, sigma, weights, theta, lam) -> np.ndarray:
    """Per-pair optimality violations of the penalized joint loss.

    Recomputes residuals from scratch, so this is independent of the
    kernels' incremental bookkeeping.  Scaled by the pair Gram diagonal,
    comparable to the solver tolerance.
    """
    Y = np.asarray(Y, dtype=np.float64)
    p = Y.shape[1]
    sigma = np.asarray(sigma, dtype=np.float64)
    weights = np.asarray(weights, dtype=np.float64)
    i_arr, j_arr = pair_arrays(p)
    Yt, c, xi = _tilde(Y, sigma, weights)

    Bt = np.zeros((p, p))
    Bt[i_arr, j_arr] = theta * c[i_arr] / c[j_arr]
    Bt[j_arr, i_arr] = theta * c[j_arr] / c[i_arr]
    E = Yt - Yt @ Bt
    M = Yt.T @ E
    r = c[i_arr] / c[j_arr]
    grad = M[i_arr, j_arr] * r + M[j_arr, i_arr] / r
    g = xi[j_arr] / (r * r) + xi[i_arr] * (r * r)
    g = np.where(g > 0, g, 1.0)

    active = theta != 0
    viol = np.empty(theta.shape[0])
    viol[active] = np.abs(grad[active] - lam * np.sign(theta[active])) / g[active]
    viol[~active] = np.maximum(np.abs(grad[~active]) - lam, 0.0) / g[~active]
    return viol
