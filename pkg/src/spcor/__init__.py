"""Sparse partial-correlation network estimation.

Estimates which pairs of variables have nonzero partial correlation from
n samples of p variables, by jointly fitting all p regressions with a
shared L1-penalized pair parameterization, alongside a per-variable
neighborhood-selection baseline, penalty tuning, synthetic network
generators, and edge-recovery metrics.
"""

from .backend import active_backend, available_backends
from .data import (
    DataMatrix,
    DiagPrecision,
    PairIndex,
    PartialCorrVector,
    Weights,
    flat_to_pair,
    pair_to_flat,
    standardize,
)
from .joint import (
    JointFit,
    JointPath,
    fit_joint,
    fit_joint_path,
    max_penalty,
)
from .metrics import RecoveryMetrics, hub_average_rank, pd_check, recovery, roc_trace, sigma_rmse
from .neighborhood import NeighborhoodFit, fit_neighborhoods, neighborhood_edges
from .networks import (
    CovarianceSpec,
    NetworkGraph,
    PrecisionSpec,
    concentration_to_covariance,
    generate_network,
    sample_gaussian,
    sample_t,
)
from .solver import LassoProblem, SolverConfig, SolverReport, soft_threshold, solve
from .tuning import (
    BicRecord,
    bic_joint,
    bic_neighborhood,
    penalty_from_alpha,
    penalty_grid,
    select_penalty_joint,
    select_penalty_neighborhood,
)

__version__ = "0.1.0"
