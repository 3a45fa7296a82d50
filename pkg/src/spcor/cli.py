"""Batch command line: simulate benchmarks, fit, tune, evaluate, benchmark.

Commands

  simulate   draw a synthetic network, its covariance, and samples
  fit        fit one model at a single penalty
  path       fit along a penalty grid and tabulate the criterion
  tune       pick the penalty and write the selected fit
  evaluate   compare an estimated edge list against the truth
  bench      compare shooting and active-shooting iteration counts

Exit codes: 0 success, 2 usage error, 3 generation failure, 4 unreadable
or ill-formed data.  All commands are deterministic given their flags.
"""

from __future__ import annotations

import argparse
import sys

import numpy as np

from . import fileio
from .data import DataMatrix, PartialCorrVector, pair_arrays, pair_to_flat, standardize
from .errors import DataFormatError, GenerationFailed, SpcorError
from .joint import JointFit, fit_joint, fit_joint_path, max_penalty
from .metrics import hub_average_rank, pd_check, recovery
from .neighborhood import NeighborhoodFit, fit_neighborhoods, neighborhood_edges
from .networks import concentration_to_covariance, generate_network, sample_gaussian, sample_t
from .solver import SolverConfig, benchmark_instance, solve
from .tuning import (
    bic_joint,
    bic_neighborhood,
    penalty_from_alpha,
    penalty_grid,
    select_penalty_joint,
    select_penalty_neighborhood,
)

JOINT_SCHEMES = {
    "space": "uniform",
    "space_sw": "residual_variance",
    "space_dew": "degree",
}
METHODS = (*JOINT_SCHEMES, "mb_sep", "mb_alpha")
KINDS = ("hub", "powerlaw", "uniform", "ar", "circle")

USAGE_ERROR, GENERATION_ERROR, DATA_ERROR = 2, 3, 4


class _CliError(Exception):
    def __init__(self, code: int, message: str):
        self.code = code
        super().__init__(message)


# ---------------------------------------------------------------------------
# shared helpers


def _load_data(path) -> DataMatrix:
    try:
        return fileio.read_data(path)
    except DataFormatError as exc:
        raise _CliError(DATA_ERROR, str(exc)) from None


def _solver_config(args) -> SolverConfig:
    return SolverConfig(tol=args.tol, max_sweeps=args.max_sweeps)


def _joint_edges(fit: JointFit):
    i_arr, j_arr = pair_arrays(fit.p)
    nz = fit.theta.rho != 0.0
    edges = list(zip(i_arr[nz].tolist(), j_arr[nz].tolist()))
    return edges, fit.theta.rho[nz]


def _neighborhood_edge_values(fit: NeighborhoodFit):
    """Or-rule edges with a symmetric strength proxy.

    When both directed coefficients are nonzero the proxy is
    sign(b_ij) * sqrt(|b_ij b_ji|); otherwise the single nonzero
    coefficient is reported.
    """
    edges = sorted(neighborhood_edges(fit, "or"))
    values = []
    for i, j in edges:
        bij, bji = fit.beta[i, j], fit.beta[j, i]
        if bij != 0.0 and bji != 0.0:
            values.append(np.sign(bij) * np.sqrt(abs(bij * bji)))
        else:
            values.append(bij if bij != 0.0 else bji)
    return edges, np.asarray(values)


def _neighborhood_sigma(fit: NeighborhoodFit, n: int) -> np.ndarray:
    return n / fit.rss_per_variable


def _fit_any(data: DataMatrix, method: str, lam: float | None, args):
    """Dispatch one fit; returns (edges, values, sigma, converged)."""
    config = _solver_config(args)
    if method in JOINT_SCHEMES:
        fit = fit_joint(data, lam, scheme=JOINT_SCHEMES[method], config=config,
                        outer_iterations=args.iters)
        edges, values = _joint_edges(fit)
        return edges, values, fit.sigma, fit.converged
    if method == "mb_sep":
        fit = fit_neighborhoods(data, lam, config=config)
    else:  # mb_alpha
        lam = penalty_from_alpha(data.n, data.p, args.alpha)
        fit = fit_neighborhoods(data, lam, config=config)
    edges, values = _neighborhood_edge_values(fit)
    return edges, values, _neighborhood_sigma(fit, data.n), fit.converged


def _default_grid(data: DataMatrix, method: str, args) -> np.ndarray:
    if args.lambda_max is not None:
        lam_max = args.lambda_max
    else:
        Y = standardize(data).values
        if method in JOINT_SCHEMES:
            lam_max = max_penalty(Y)
        else:
            gram = Y.T @ Y
            np.fill_diagonal(gram, 0.0)
            lam_max = float(np.abs(gram).max()) * (1.0 + 1e-10)
    lam_min = args.lambda_min if args.lambda_min is not None else lam_max / 100.0
    if args.log_grid:
        return penalty_grid(lam_max, lam_min, args.lambda_count)
    if args.lambda_count == 1:
        return np.array([lam_max])
    return np.linspace(lam_max, lam_min, args.lambda_count)


# ---------------------------------------------------------------------------
# commands


def _cmd_simulate(args) -> int:
    if args.kind in ("ar", "circle"):
        if args.p is None:
            raise _CliError(USAGE_ERROR, f"--p is required for kind {args.kind}")
        spec = generate_network(args.kind, args.seed, p=args.p)
    else:
        spec = generate_network(args.kind, args.seed, modules=args.modules)
    cov = concentration_to_covariance(spec)
    if args.df and args.df > 0:
        data = sample_t(cov.Sigma, args.n, args.df, args.seed + 1)
    else:
        data = sample_gaussian(cov.Sigma, args.n, args.seed + 1)

    fileio.write_data(f"{args.output}.data.csv", data)
    rho = cov.true_partial_corr
    edges = list(spec.graph.edges)
    values = [rho.get(i, j) for i, j in edges]
    fileio.write_edges(f"{args.output}.edges.tsv", edges, values)
    fileio.write_sigma(f"{args.output}.sigma.tsv", cov.precision_diag)
    if spec.graph.hub_labels:
        fileio.write_hubs(f"{args.output}.hubs.tsv", spec.graph.hub_labels)
    print(f"simulated kind={args.kind} p={spec.graph.p} n={args.n} "
          f"edges={spec.graph.n_edges} -> {args.output}.*")
    return 0


def _cmd_fit(args) -> int:
    data = _load_data(args.input)
    if args.method != "mb_alpha" and args.lam is None:
        raise _CliError(USAGE_ERROR, "--lambda is required for this method")
    edges, values, sigma, converged = _fit_any(data, args.method, args.lam, args)
    fileio.write_edges(f"{args.output}.edges.tsv", edges, values)
    fileio.write_sigma(f"{args.output}.sigma.tsv", sigma)
    if not converged:
        print("warning: solver hit the sweep budget; estimates are the best iterate",
              file=sys.stderr)
    print(f"fit method={args.method} edges={len(edges)} -> {args.output}.*")
    return 0


def _path_rows_joint(data, method, grid, args):
    config = _solver_config(args)
    path = fit_joint_path(data, grid, scheme=JOINT_SCHEMES[method], config=config,
                          outer_iterations=args.iters)
    rows = []
    for lam, fit, err in zip(path.lambdas, path.fits, path.errors):
        if fit is None:
            rows.append((lam, -1, float("nan"), 0, f"error:{err}"))
            continue
        bic = bic_joint(fit, data)
        flag = "ok" if fit.converged else "not_converged"
        rows.append((lam, fit.nonzero_count, bic.bic_total, fit.solver_iterations, flag))
    return rows


def _path_rows_neighborhood(data, grid, args):
    config = _solver_config(args)
    rows = []
    warm = None
    for lam in grid:
        fit = fit_neighborhoods(data, lam, config=config, warm_start=warm)
        warm = fit.beta
        bic = bic_neighborhood(fit, data)
        n_edges = len(neighborhood_edges(fit, "or"))
        flag = "ok" if fit.converged else "not_converged"
        rows.append((lam, n_edges, bic.bic_total, fit.iterations, flag))
    return rows


def _cmd_path(args) -> int:
    data = _load_data(args.input)
    if args.method == "mb_alpha":
        grid = np.array([penalty_from_alpha(data.n, data.p, args.alpha)])
    else:
        grid = _default_grid(data, args.method, args)
    if args.method in JOINT_SCHEMES:
        rows = _path_rows_joint(data, args.method, grid, args)
    else:
        rows = _path_rows_neighborhood(data, grid, args)
    out = f"{args.output}.path.tsv"
    with open(out, "w", encoding="utf-8") as fh:
        fh.write("lambda\tn_detected\tbic_total\titerations\tstatus\n")
        for lam, nd, bic, iters, flag in rows:
            fh.write(f"{lam:.6g}\t{nd}\t{bic:.6f}\t{iters}\t{flag}\n")
    print(f"path method={args.method} points={len(rows)} -> {out}")
    return 0


def _cmd_tune(args) -> int:
    data = _load_data(args.input)
    config = _solver_config(args)
    if args.method in JOINT_SCHEMES:
        grid = _default_grid(data, args.method, args)
        path = fit_joint_path(data, grid, scheme=JOINT_SCHEMES[args.method],
                              config=config, outer_iterations=args.iters)
        lam, fit, record = select_penalty_joint(path, data)
        edges, values = _joint_edges(fit)
        sigma = fit.sigma
        print(f"selected_lambda: {lam:.6g}")
        print(f"bic_total: {record.bic_total:.6f}")
    elif args.method == "mb_sep":
        grid = _default_grid(data, args.method, args)
        lambdas, fit = select_penalty_neighborhood(data, grid, config)
        edges, values = _neighborhood_edge_values(fit)
        sigma = _neighborhood_sigma(fit, data.n)
        fileio.write_sigma(f"{args.output}.lambdas.tsv", lambdas)
        print(f"selected_lambda: per-variable (range {lambdas.min():.6g} "
              f"to {lambdas.max():.6g}) -> {args.output}.lambdas.tsv")
    else:  # mb_alpha
        lam = penalty_from_alpha(data.n, data.p, args.alpha)
        fit = fit_neighborhoods(data, lam, config=config)
        edges, values = _neighborhood_edge_values(fit)
        sigma = _neighborhood_sigma(fit, data.n)
        print(f"selected_lambda: {lam:.6g}")
    fileio.write_edges(f"{args.output}.edges.tsv", edges, values)
    fileio.write_sigma(f"{args.output}.sigma.tsv", sigma)
    print(f"tune method={args.method} edges={len(edges)} -> {args.output}.*")
    return 0


def _cmd_evaluate(args) -> int:
    try:
        est_edges, est_values = fileio.read_edges(args.est)
        true_edges, _ = fileio.read_edges(args.truth)
    except DataFormatError as exc:
        raise _CliError(DATA_ERROR, str(exc)) from None
    p = args.p
    for name, edges in (("estimate", est_edges), ("truth", true_edges)):
        if any(j >= p for _, j in edges):
            raise _CliError(DATA_ERROR, f"{name} contains vertices beyond p={p}")

    met = recovery(est_edges, true_edges)
    lines = [
        f"n_true: {met.n_true}",
        f"n_detected: {met.n_detected}",
        f"n_correct: {met.n_correct}",
        f"sensitivity: {met.sensitivity:.6f}",
        f"specificity: {met.specificity:.6f}",
    ]

    theta = None
    if args.hubs or args.est_sigma:
        rho = np.zeros(p * (p - 1) // 2)
        for (i, j), v in zip(est_edges, est_values):
            rho[pair_to_flat(i, j, p)] = v if v != 0.0 else 1.0
        theta = PartialCorrVector(rho, p)

    if args.hubs:
        try:
            hubs = fileio.read_hubs(args.hubs)
        except DataFormatError as exc:
            raise _CliError(DATA_ERROR, str(exc)) from None
        if any(h >= p or h < 0 for h in hubs):
            raise _CliError(DATA_ERROR, f"hub labels exceed p={p}")
        lines.append(f"hub_average_rank: {hub_average_rank(theta, hubs):.6f}")

    if args.est_sigma:
        try:
            sigma = fileio.read_sigma(args.est_sigma)
        except DataFormatError as exc:
            raise _CliError(DATA_ERROR, str(exc)) from None
        if sigma.shape[0] != p:
            raise _CliError(DATA_ERROR, f"sigma sidecar has {sigma.shape[0]} entries, expected {p}")
        is_pd, min_eig = pd_check(theta, sigma)
        lines.append(f"positive_definite: {'true' if is_pd else 'false'}")
        lines.append(f"min_eigenvalue: {min_eig:.6g}")

    print("\n".join(lines))
    return 0


def _cmd_bench(args) -> int:
    if args.n < 2 or args.p < 1:
        raise _CliError(USAGE_ERROR, "need n >= 2 and p >= 1")
    problem = benchmark_instance(args.n, args.p, args.seed,
                                 gamma=args.lam if args.lam is not None else 2.0)
    shoot = solve(problem, SolverConfig(tol=args.tol, max_sweeps=args.max_sweeps,
                                        mode="shooting"))
    active = solve(problem, SolverConfig(tol=args.tol, max_sweeps=args.max_sweeps,
                                         mode="active_shooting"))
    diff = float(np.abs(shoot.beta - active.beta).max())
    print("p\tnonzero\tshooting_iters\tactive_iters\tmax_coef_diff")
    print(f"{args.p}\t{np.count_nonzero(active.beta)}\t{shoot.iterations}"
          f"\t{active.iterations}\t{diff:.3g}")
    return 0


# ---------------------------------------------------------------------------
# argument parsing


def _add_solver_flags(sub):
    sub.add_argument("--tol", type=float, default=1e-6, help="coordinate-change tolerance")
    sub.add_argument("--max-sweeps", type=int, default=10000, help="sweep budget per solve")
    sub.add_argument("--iters", type=int, default=3,
                     help="outer iterations between correlations and precision")


def _add_grid_flags(sub):
    sub.add_argument("--lambda-min", type=float, default=None)
    sub.add_argument("--lambda-max", type=float, default=None)
    sub.add_argument("--lambda-count", type=int, default=20)
    sub.add_argument("--log-grid", action=argparse.BooleanOptionalAction, default=True,
                     help="log-spaced grid (default) or linear with --no-log-grid")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="spcor",
        description="Sparse partial-correlation network estimation",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    sim = sub.add_parser("simulate", help="generate a benchmark network and samples")
    sim.add_argument("--kind", choices=KINDS, required=True)
    sim.add_argument("--modules", type=int, default=1, help="number of 100-node modules")
    sim.add_argument("--p", type=int, default=None, help="size for ar/circle networks")
    sim.add_argument("--n", type=int, required=True, help="number of samples")
    sim.add_argument("--seed", type=int, required=True)
    sim.add_argument("--df", type=float, default=0,
                     help="0 for Gaussian sampling, otherwise t degrees of freedom")
    sim.add_argument("--output", required=True, help="output path prefix")

    fit = sub.add_parser("fit", help="fit one model at a single penalty")
    fit.add_argument("--input", required=True)
    fit.add_argument("--method", choices=METHODS, required=True)
    fit.add_argument("--lambda", dest="lam", type=float, default=None)
    fit.add_argument("--alpha", type=float, default=0.05)
    fit.add_argument("--output", required=True)
    _add_solver_flags(fit)

    path = sub.add_parser("path", help="fit along a penalty grid")
    path.add_argument("--input", required=True)
    path.add_argument("--method", choices=METHODS, required=True)
    path.add_argument("--alpha", type=float, default=0.05)
    path.add_argument("--output", required=True)
    _add_grid_flags(path)
    _add_solver_flags(path)

    tune = sub.add_parser("tune", help="select the penalty and write its fit")
    tune.add_argument("--input", required=True)
    tune.add_argument("--method", choices=METHODS, required=True)
    tune.add_argument("--alpha", type=float, default=0.05)
    tune.add_argument("--output", required=True)
    _add_grid_flags(tune)
    _add_solver_flags(tune)

    ev = sub.add_parser("evaluate", help="compare estimated edges against the truth")
    ev.add_argument("--est", required=True, help="estimated edge list")
    ev.add_argument("--truth", required=True, help="true edge list")
    ev.add_argument("--p", type=int, required=True, help="number of variables")
    ev.add_argument("--est-sigma", default=None, help="sigma sidecar of the estimate")
    ev.add_argument("--hubs", default=None, help="true hub labels, one 1-based index per line")

    bench = sub.add_parser("bench", help="shooting vs active-shooting iteration counts")
    bench.add_argument("--n", type=int, default=100)
    bench.add_argument("--p", type=int, required=True)
    bench.add_argument("--lambda", dest="lam", type=float, default=2.0)
    bench.add_argument("--seed", type=int, default=0)
    # tight enough that the two modes agree to well under 1e-8
    bench.add_argument("--tol", type=float, default=1e-9)
    bench.add_argument("--max-sweeps", type=int, default=500000)

    return parser


_HANDLERS = {
    "simulate": _cmd_simulate,
    "fit": _cmd_fit,
    "path": _cmd_path,
    "tune": _cmd_tune,
    "evaluate": _cmd_evaluate,
    "bench": _cmd_bench,
}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return _HANDLERS[args.command](args)
    except _CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.code
    except GenerationFailed as exc:
        print(f"error: {exc}", file=sys.stderr)
        return GENERATION_ERROR
    except DataFormatError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return DATA_ERROR
    except (SpcorError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return USAGE_ERROR


if __name__ == "__main__":
    sys.exit(main())
