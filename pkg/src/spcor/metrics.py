"""Edge-recovery metrics, hub ranking, ROC traces, and diagnostics.

Sensitivity is the fraction of true edges that were detected; specificity
is the fraction of detected edges that are true.  Boundary conventions:
with no true edges sensitivity is 1, and with no detected edges
specificity is 1 (no false claims were made).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.stats import rankdata

from .data import PartialCorrVector, pair_arrays
from .joint import JointPath

__all__ = [
    "RecoveryMetrics",
    "RocTrace",
    "recovery",
    "hub_average_rank",
    "roc_trace",
    "sigma_rmse",
    "pd_check",
]


@dataclass(frozen=True)
class RecoveryMetrics:
    n_true: int
    n_detected: int
    n_correct: int
    sensitivity: float
    specificity: float


@dataclass(frozen=True)
class RocTrace:
    """Per-penalty recovery metrics along a decreasing penalty grid."""

    lambdas: np.ndarray
    n_detected: np.ndarray
    n_correct: np.ndarray
    sensitivity: np.ndarray
    specificity: np.ndarray


def _as_edge_set(edges) -> set:
    return {(int(i), int(j)) if i < j else (int(j), int(i)) for i, j in edges}


def recovery(est_edges, true_edges) -> RecoveryMetrics:
    """Compare an estimated edge set against the truth."""
    est = _as_edge_set(est_edges)
    true = _as_edge_set(true_edges)
    n_correct = len(est & true)
    sensitivity = n_correct / len(true) if true else 1.0
    specificity = n_correct / len(est) if est else 1.0
    return RecoveryMetrics(n_true=len(true), n_detected=len(est),
                           n_correct=n_correct, sensitivity=sensitivity,
                           specificity=specificity)


def hub_average_rank(est_theta: PartialCorrVector, true_hubs) -> float:
    """Mean rank of the true hubs when variables are ranked by degree.

    Degrees count nonzero partial correlations; rank 1 goes to the
    highest degree and ties receive the mean of the positions they
    occupy, so the result does not depend on how tied variables are
    ordered.  With k hubs the best possible value is (k + 1) / 2.
    """
    true_hubs = list(true_hubs)
    if not true_hubs:
        raise ValueError("need at least one hub label")
    deg = est_theta.degrees()
    ranks = rankdata(-deg, method="average")
    return float(np.mean(ranks[true_hubs]))


def roc_trace(path: JointPath, true_edges, threshold: float = 0.0) -> RocTrace:
    """Recovery metrics at every successful entry of a penalty path.

    An edge is detected when its estimated partial correlation exceeds
    ``threshold`` in absolute value; the default keeps the solver's exact
    zeros as the detection rule.
    """
    entries = path.ok_entries()
    if not entries:
        raise ValueError("path contains no successful fits")
    true = _as_edge_set(true_edges)
    lams, nd, nc, sens, spec = [], [], [], [], []
    for lam, fit in entries:
        i_arr, j_arr = pair_arrays(fit.p)
        detected = np.abs(fit.theta.rho) > threshold
        est = {(int(i), int(j)) for i, j in zip(i_arr[detected], j_arr[detected])}
        met = recovery(est, true)
        lams.append(lam)
        nd.append(met.n_detected)
        nc.append(met.n_correct)
        sens.append(met.sensitivity)
        spec.append(met.specificity)
    return RocTrace(lambdas=np.asarray(lams), n_detected=np.asarray(nd),
                    n_correct=np.asarray(nc), sensitivity=np.asarray(sens),
                    specificity=np.asarray(spec))


def sigma_rmse(est_sigma, true_A) -> float:
    """Root mean squared error of the diagonal precision estimates.

    The reference values are the diagonal of the true concentration
    matrix of the (correlation-normalized) covariance, which equals the
    diagonal of the inverse of the generated matrix ``true_A``.
    """
    est_sigma = np.asarray(est_sigma, dtype=np.float64)
    true_A = np.asarray(true_A, dtype=np.float64)
    truth = np.diag(np.linalg.inv(true_A))
    if truth.shape != est_sigma.shape:
        raise ValueError("dimension mismatch")
    return float(np.sqrt(np.mean((est_sigma - truth) ** 2)))


def pd_check(theta: PartialCorrVector, sigma) -> tuple[bool, float]:
    """Positive definiteness of the implied concentration matrix.

    Reconstructs Omega with Omega_ii = sigma_ii and
    Omega_ij = -rho_ij * sqrt(sigma_ii * sigma_jj), symmetrizes, and
    reports (is_pd, smallest eigenvalue).
    """
    sigma = np.asarray(sigma, dtype=np.float64)
    p = theta.p
    root = np.sqrt(sigma)
    i_arr, j_arr = pair_arrays(p)
    omega = np.zeros((p, p))
    off = -theta.rho * root[i_arr] * root[j_arr]
    omega[i_arr, j_arr] = off
    omega[j_arr, i_arr] = off
    omega[np.arange(p), np.arange(p)] = sigma
    omega = 0.5 * (omega + omega.T)
    min_eig = float(np.linalg.eigvalsh(omega)[0])
    return min_eig > 0.0, min_eig
