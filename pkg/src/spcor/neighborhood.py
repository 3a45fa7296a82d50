"""Neighborhood selection baseline: one lasso regression per variable.

Each variable is regressed on all the others with an L1 penalty, giving a
p x p coefficient matrix with zero diagonal.  Because the p regressions
are fitted independently, nothing ties ``beta_ij`` to ``beta_ji``: the
two can disagree in sign, or exactly one of them can be zero, so the
implied neighborhoods may contradict each other.  Edges are therefore
declared by combining the two directions with either an "or" rule (union,
the default) or an "and" rule (intersection).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .data import DataMatrix, standardize
from .solver import LassoProblem, SolverConfig, solve

__all__ = ["NeighborhoodFit", "fit_neighborhoods", "neighborhood_edges"]


@dataclass
class NeighborhoodFit:
    """Stacked per-variable lasso fits.

    ``beta[i, j]`` is the coefficient of variable j in the regression of
    variable i; the diagonal is identically zero.
    """

    beta: np.ndarray
    lambda_per_variable: np.ndarray
    rss_per_variable: np.ndarray
    iterations: int
    converged: bool

    @property
    def p(self) -> int:
        return self.beta.shape[0]


def fit_neighborhoods(data, lambdas, config: SolverConfig | None = None,
                      warm_start=None) -> NeighborhoodFit:
    """Fit the p row regressions at the given penalties.

    ``lambdas`` is a scalar (shared by all rows) or a length-p sequence
    with one penalty per variable.  Data are standardized before fitting.
    ``warm_start`` may carry a previous coefficient matrix, used row by
    row on decreasing penalty grids.
    """
    if config is None:
        config = SolverConfig()
    Y = standardize(data if isinstance(data, DataMatrix)
                    else DataMatrix(np.asarray(data, dtype=np.float64))).values
    n, p = Y.shape
    lambdas = np.broadcast_to(np.asarray(lambdas, dtype=np.float64), (p,)).copy()
    if np.any(lambdas < 0):
        raise ValueError("penalties must be nonnegative")

    others = np.arange(p)
    beta = np.zeros((p, p))
    rss = np.zeros(p)
    iterations = 0
    converged = True
    for i in range(p):
        cols = others[others != i]
        problem = LassoProblem(Y[:, cols], Y[:, i], lambdas[i])
        ws = warm_start[i, cols] if warm_start is not None else None
        report = solve(problem, config, warm_start=ws)
        beta[i, cols] = report.beta
        resid = Y[:, i] - Y[:, cols] @ report.beta
        rss[i] = resid @ resid
        iterations += report.iterations
        converged = converged and report.converged
    return NeighborhoodFit(beta=beta, lambda_per_variable=lambdas,
                           rss_per_variable=rss, iterations=iterations,
                           converged=converged)


def neighborhood_edges(fit: NeighborhoodFit, rule: str = "or") -> set[tuple[int, int]]:
    """Combine the two directed coefficients of every pair into an edge set.

    "or": edge when either coefficient is nonzero.  "and": edge only when
    both are.  The and-set is always contained in the or-set.
    """
    if rule not in ("or", "and"):
        raise ValueError(f"unknown combination rule {rule!r}")
    b = fit.beta
    upper = b != 0.0
    combined = (upper | upper.T) if rule == "or" else (upper & upper.T)
    i_arr, j_arr = np.nonzero(np.triu(combined, k=1))
    return {(int(i), int(j)) for i, j in zip(i_arr, j_arr)}
