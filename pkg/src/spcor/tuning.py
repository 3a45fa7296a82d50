"""Penalty selection: BIC-type criteria and the quantile-based shared penalty.

For each variable the criterion is

    BIC_i = n * log(RSS_i) + log(n) * df_i,

where RSS_i is the residual sum of squares of the i-th regression under
the fitted coefficients and df_i counts that variable's nonzero partners.
The total over all variables is minimized over a penalty grid, with ties
broken toward the larger penalty (the sparser model).  Note that one edge
contributes to the df term of both of its endpoints.

For the per-variable baseline regressions the same criterion is applied
row by row, so each variable may pick its own penalty.  Alternatively a
single penalty shared by all rows can be derived from a false-discovery
level alpha via the standard-normal quantile,

    lam(alpha) = sqrt(n) * Phi^{-1}(1 - alpha / (2 p^2)),

valid on data standardized to unit sample standard deviation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .data import DataMatrix, standardize
from .errors import DegenerateRSS, InvalidAlpha
from .joint import JointFit, JointPath, residuals_from_theta
from .neighborhood import NeighborhoodFit, fit_neighborhoods
from .solver import SolverConfig

__all__ = [
    "BicRecord",
    "bic_joint",
    "bic_neighborhood",
    "select_penalty_joint",
    "select_penalty_neighborhood",
    "penalty_from_alpha",
    "normal_quantile",
    "penalty_grid",
]


@dataclass(frozen=True)
class BicRecord:
    lam: float
    bic_per_variable: np.ndarray
    bic_total: float
    df_per_variable: np.ndarray


def _bic_from_parts(lam, rss, df, n) -> BicRecord:
    if np.any(rss <= 0):
        bad = int(np.argmin(rss))
        raise DegenerateRSS(f"RSS of variable {bad} is not positive")
    per_var = n * np.log(rss) + math.log(n) * df
    return BicRecord(lam=float(lam), bic_per_variable=per_var,
                     bic_total=float(per_var.sum()),
                     df_per_variable=df.astype(np.int64))


def _standardized_values(data) -> np.ndarray:
    if not isinstance(data, DataMatrix):
        data = DataMatrix(np.asarray(data, dtype=np.float64))
    return standardize(data).values


def bic_joint(fit: JointFit, data) -> BicRecord:
    """Criterion for a joint fit, recomputed directly from the data.

    Residuals use the fitted coefficients implied by the final estimates,
    on the standardized scale the model was fitted on.
    """
    Y = _standardized_values(data)
    E = residuals_from_theta(Y, fit.theta.rho, fit.sigma)
    rss = np.einsum("ij,ij->j", E, E)
    df = fit.theta.degrees()
    return _bic_from_parts(fit.lam, rss, df, Y.shape[0])


def bic_neighborhood(fit: NeighborhoodFit, data) -> BicRecord:
    """Criterion for a per-variable baseline fit (row-wise df and RSS)."""
    Y = _standardized_values(data)
    E = Y - Y @ fit.beta.T
    rss = np.einsum("ij,ij->j", E, E)
    df = np.count_nonzero(fit.beta, axis=1)
    lam = float(fit.lambda_per_variable[0]) if np.all(
        fit.lambda_per_variable == fit.lambda_per_variable[0]) else float("nan")
    return _bic_from_parts(lam, rss, df, Y.shape[0])


def select_penalty_joint(path: JointPath, data):
    """Entry of the path minimizing the total criterion.

    Returns ``(lam, fit, record)``.  Ties go to the larger penalty; path
    entries that failed to fit are skipped.
    """
    best = None
    for lam, fit in path.ok_entries():
        record = bic_joint(fit, data)
        if best is None or record.bic_total < best[2].bic_total:
            best = (float(lam), fit, record)
    if best is None:
        raise ValueError("path contains no successful fits")
    return best


def select_penalty_neighborhood(data, lambda_grid, config: SolverConfig | None = None):
    """Per-variable penalty selection for the baseline regressions.

    Every row regression is evaluated at each grid value (descending,
    warm-started) and keeps the penalty minimizing its own criterion,
    ties toward the larger penalty.  Returns ``(lambda_per_variable,
    fit)`` where ``fit`` stacks each row at its selected penalty.
    """
    grid = np.sort(np.asarray(lambda_grid, dtype=np.float64))[::-1]
    if grid.size == 0:
        raise ValueError("penalty grid is empty")
    Y = _standardized_values(data)
    n, p = Y.shape
    logn = math.log(n)

    best_bic = np.full(p, np.inf)
    best_lambda = np.zeros(p)
    best_beta = np.zeros((p, p))
    best_rss = np.zeros(p)
    warm = None
    for lam in grid:
        fit = fit_neighborhoods(DataMatrix(Y), lam, config, warm_start=warm)
        warm = fit.beta
        df = np.count_nonzero(fit.beta, axis=1)
        bic = n * np.log(fit.rss_per_variable) + logn * df
        better = bic < best_bic
        best_bic[better] = bic[better]
        best_lambda[better] = lam
        best_beta[better] = fit.beta[better]
        best_rss[better] = fit.rss_per_variable[better]

    return best_lambda, NeighborhoodFit(
        beta=best_beta, lambda_per_variable=best_lambda,
        rss_per_variable=best_rss, iterations=0, converged=True)


# ---------------------------------------------------------------------------
# standard-normal quantile and the alpha-based penalty

# rational approximation coefficients (Acklam); refined below by one
# Halley step against erfc, giving near machine-precision quantiles
_A = (-3.969683028665376e+01, 2.209460984245205e+02, -2.759285104469687e+02,
      1.383577518672690e+02, -3.066479806614716e+01, 2.506628277459239e+00)
_B = (-5.447609879822406e+01, 1.615858368580409e+02, -1.556989798598866e+02,
      6.680131188771972e+01, -1.328068155288572e+01)
_C = (-7.784894002430293e-03, -3.223964580411365e-01, -2.400758277161838e+00,
      -2.549732539343734e+00, 4.374664141464968e+00, 2.938163982698783e+00)
_D = (7.784695709041462e-03, 3.224671290700398e-01, 2.445134137142996e+00,
      3.754408661907416e+00)


def normal_quantile(q: float) -> float:
    """Inverse standard-normal CDF for q in (0, 1)."""
    if not 0.0 < q < 1.0:
        raise ValueError("quantile argument must lie strictly between 0 and 1")
    if q > 0.5:
        # reflect so the refinement below always runs on the lower tail,
        # where the CDF via erfc is free of cancellation
        return -normal_quantile(1.0 - q)
    p_low = 0.02425
    if q < p_low:
        u = math.sqrt(-2.0 * math.log(q))
        x = ((((((_C[0] * u + _C[1]) * u + _C[2]) * u + _C[3]) * u + _C[4]) * u + _C[5])
             / ((((_D[0] * u + _D[1]) * u + _D[2]) * u + _D[3]) * u + 1.0))
    else:
        u = q - 0.5
        t = u * u
        x = ((((((_A[0] * t + _A[1]) * t + _A[2]) * t + _A[3]) * t + _A[4]) * t + _A[5]) * u
             / (((((_B[0] * t + _B[1]) * t + _B[2]) * t + _B[3]) * t + _B[4]) * t + 1.0))
    # one Halley refinement against the exact CDF expressed via erfc
    err = 0.5 * math.erfc(-x / math.sqrt(2.0)) - q
    u = err * math.sqrt(2.0 * math.pi) * math.exp(0.5 * x * x)
    return x - u / (1.0 + 0.5 * x * u)


def penalty_from_alpha(n: int, p: int, alpha: float) -> float:
    """Shared penalty controlling false discovery at level alpha.

    Requires data standardized to unit sample standard deviation; strictly
    increasing in n and p, decreasing in alpha.
    """
    if not 0.0 < alpha < 1.0:
        raise InvalidAlpha(f"alpha must lie in (0, 1), got {alpha}")
    return math.sqrt(n) * normal_quantile(1.0 - alpha / (2.0 * p * p))


def penalty_grid(lam_max: float, lam_min: float | None = None, count: int = 20) -> np.ndarray:
    """Descending log-spaced penalty grid, by default down to lam_max / 100."""
    if count < 1:
        raise ValueError("count must be at least 1")
    if lam_min is None:
        lam_min = lam_max / 100.0
    if not 0 < lam_min <= lam_max:
        raise ValueError("need 0 < lam_min <= lam_max")
    if count == 1:
        return np.array([lam_max])
    return np.geomspace(lam_max, lam_min, count)
