import numpy as np
import pytest
from hypothesis import given, strategies as st

from spcor.solver import (
    LassoProblem,
    SolverConfig,
    benchmark_instance,
    coordinate_update,
    init_coefficients,
    kkt_violations,
    lasso_objective,
    soft_threshold,
    solve,
)

TIGHT = SolverConfig(tol=1e-12, max_sweeps=200000)


def random_problem(seed, n=60, p=25, gamma=8.0, sparsity=5):
    rng = np.random.default_rng(seed)
    X = rng.standard_normal((n, p))
    beta = np.zeros(p)
    beta[:sparsity] = rng.normal(0, 1.5, size=sparsity)
    y = X @ beta + 0.4 * rng.standard_normal(n)
    return LassoProblem(X, y, gamma)


def grid_search_2d(X, y, gamma, span=3.0, levels=4, width=201):
    """Independent oracle: refined dense grid over (b1, b2)."""
    center = np.zeros(2)
    for level in range(levels):
        b1 = np.linspace(center[0] - span, center[0] + span, width)
        b2 = np.linspace(center[1] - span, center[1] + span, width)
        B1, B2 = np.meshgrid(b1, b2, indexing="ij")
        resid = y[:, None, None] - X[:, 0][:, None, None] * B1 - X[:, 1][:, None, None] * B2
        obj = 0.5 * (resid ** 2).sum(axis=0) + gamma * (np.abs(B1) + np.abs(B2))
        k = np.unravel_index(np.argmin(obj), obj.shape)
        center = np.array([B1[k], B2[k]])
        span = span * 2.2 / width
    return center


class TestSoftThreshold:
    def test_definition(self):
        assert soft_threshold(5.0, 2.0) == 3.0

    def test_below_threshold(self):
        assert soft_threshold(-1.5, 2.0) == 0.0

    @given(st.floats(-1e6, 1e6, allow_nan=False))
    def test_zero_penalty_is_identity(self, z):
        assert soft_threshold(z, 0.0) == z

    @given(st.floats(-100, 100), st.floats(0, 100))
    def test_magnitude_never_grows(self, z, gamma):
        out = soft_threshold(z, gamma)
        assert abs(out) <= abs(z) + 1e-12
        assert out * z >= 0.0


class TestInit:
    def test_large_penalty_gives_zero(self, rng):
        X = rng.standard_normal((30, 8))
        y = rng.standard_normal(30)
        gamma = float(np.abs(y @ X).max()) * (1.0 + 1e-12)
        beta0 = init_coefficients(LassoProblem(X, y, gamma))
        assert np.all(beta0 == 0.0)

    def test_orthonormal_zero_penalty_univariate_ols(self, rng):
        q, _ = np.linalg.qr(rng.standard_normal((40, 5)))
        y = rng.standard_normal(40)
        beta0 = init_coefficients(LassoProblem(q, y, 0.0))
        np.testing.assert_allclose(beta0, y @ q, atol=1e-12)

    def test_one_dimensional_problem_already_optimal(self, rng):
        x = rng.standard_normal((50, 1))
        y = 2.0 * x[:, 0] + 0.1 * rng.standard_normal(50)
        prob = LassoProblem(x, y, 3.0)
        closed_form = soft_threshold(y @ x[:, 0], 3.0) / (x[:, 0] @ x[:, 0])
        beta0 = init_coefficients(prob)
        assert beta0[0] == pytest.approx(closed_form, abs=1e-14)
        report = solve(prob, SolverConfig(tol=1e-10, max_sweeps=10, mode="shooting"))
        assert report.converged and report.sweeps == 1
        assert report.beta[0] == pytest.approx(closed_form, abs=1e-12)

    def test_warm_start_overrides(self, rng):
        prob = random_problem(0)
        warm = rng.standard_normal(prob.p)
        np.testing.assert_array_equal(init_coefficients(prob, warm), warm)


class TestCoordinateUpdate:
    def test_fixed_point_unchanged(self):
        prob = random_problem(1)
        report = solve(prob, TIGHT)
        beta = report.beta.copy()
        resid = prob.y - prob.X @ beta
        j = int(np.flatnonzero(beta)[0])
        before = beta[j]
        coordinate_update(j, beta, resid, prob)
        assert beta[j] == pytest.approx(before, abs=1e-10)

    def test_single_coordinate_reaches_closed_form(self, rng):
        x = rng.standard_normal((50, 1))
        y = -1.3 * x[:, 0] + 0.2 * rng.standard_normal(50)
        prob = LassoProblem(x, y, 2.0)
        beta = np.zeros(1)
        resid = prob.y.copy()
        coordinate_update(0, beta, resid, prob)
        expected = soft_threshold(y @ x[:, 0], 2.0) / (x[:, 0] @ x[:, 0])
        assert beta[0] == pytest.approx(expected, abs=1e-14)

    def test_residual_consistency_after_updates(self, rng):
        prob = random_problem(2)
        beta = init_coefficients(prob)
        resid = prob.y - prob.X @ beta
        for j in rng.integers(0, prob.p, size=200):
            coordinate_update(int(j), beta, resid, prob)
        np.testing.assert_allclose(resid, prob.y - prob.X @ beta, atol=1e-10)

    def test_objective_monotone_across_updates(self):
        prob = random_problem(3)
        beta = init_coefficients(prob)
        resid = prob.y - prob.X @ beta
        obj = lasso_objective(prob, beta)
        for _ in range(4):
            for j in range(prob.p):
                coordinate_update(j, beta, resid, prob)
                new_obj = lasso_objective(prob, beta)
                assert new_obj <= obj + 1e-12
                obj = new_obj


class TestSolve:
    def test_large_penalty_zero_vector_one_sweep(self, rng, kernel_backend):
        X = rng.standard_normal((40, 12))
        y = rng.standard_normal(40)
        gamma = float(np.abs(y @ X).max()) * 1.001
        for mode in ("shooting", "active_shooting"):
            report = solve(LassoProblem(X, y, gamma), SolverConfig(mode=mode))
            assert np.all(report.beta == 0.0)
            assert report.converged
            assert report.sweeps == 1

    @pytest.mark.parametrize("seed", [0, 1, 2])
    def test_modes_agree_and_satisfy_kkt(self, seed, kernel_backend):
        prob = random_problem(seed, n=80, p=60, gamma=6.0)
        shoot = solve(prob, SolverConfig(tol=1e-12, max_sweeps=200000, mode="shooting"))
        active = solve(prob, SolverConfig(tol=1e-12, max_sweeps=200000, mode="active_shooting"))
        assert shoot.converged and active.converged
        np.testing.assert_allclose(shoot.beta, active.beta, atol=1e-8)
        assert kkt_violations(prob, shoot.beta).max() < 1e-6
        assert kkt_violations(prob, active.beta).max() < 1e-6

    def test_backends_agree(self):
        from spcor import backend

        if len(backend.available_backends()) < 2:
            pytest.skip("compiled backend not built")
        prob = random_problem(7, n=70, p=40, gamma=5.0)
        results = {}
        for name in backend.available_backends():
            with backend.use(name):
                results[name] = solve(prob, TIGHT)
        betas = list(results.values())
        np.testing.assert_allclose(betas[0].beta, betas[1].beta, atol=1e-12)
        assert betas[0].iterations == betas[1].iterations
        assert betas[0].sweeps == betas[1].sweeps

    def test_two_predictor_grid_search_oracle(self, kernel_backend):
        rng = np.random.default_rng(5)
        z = rng.standard_normal(50)
        X = np.column_stack([z + 0.3 * rng.standard_normal(50),
                             z + 0.3 * rng.standard_normal(50)])
        y = 1.2 * X[:, 0] - 0.4 * X[:, 1] + 0.5 * rng.standard_normal(50)
        gamma = 10.0
        prob = LassoProblem(X, y, gamma)
        report = solve(prob, TIGHT)
        oracle = grid_search_2d(X, y, gamma)
        np.testing.assert_allclose(report.beta, oracle, atol=1e-4)

    def test_shooting_iterations_count_every_attempt(self):
        prob = random_problem(11)
        report = solve(prob, SolverConfig(tol=1e-8, max_sweeps=5000, mode="shooting"))
        assert report.iterations == report.sweeps * prob.p

    def test_sweep_budget_exhaustion_is_soft(self):
        prob = random_problem(12, n=50, p=40, gamma=0.01)
        report = solve(prob, SolverConfig(tol=1e-14, max_sweeps=2, mode="shooting"))
        assert not report.converged
        assert report.beta.shape == (prob.p,)
        assert np.isfinite(report.beta).all()

    def test_zero_column_frozen(self, rng):
        X = rng.standard_normal((30, 5))
        X[:, 2] = 0.0
        y = rng.standard_normal(30)
        report = solve(LassoProblem(X, y, 1.0), TIGHT)
        assert report.converged
        assert report.beta[2] == 0.0

    def test_warm_start_never_worse_than_cold(self, kernel_backend):
        prob_large = random_problem(20, gamma=12.0)
        warm_source = solve(prob_large, TIGHT).beta
        prob = LassoProblem(prob_large.X, prob_large.y, 8.0)
        cold = solve(prob, SolverConfig())
        warm = solve(prob, SolverConfig(), warm_start=warm_source)
        cold_obj = lasso_objective(prob, cold.beta)
        warm_obj = lasso_objective(prob, warm.beta)
        assert warm_obj <= cold_obj + 1e-9 * max(1.0, abs(cold_obj))


class TestBenchmarkFamily:
    def test_instance_is_deterministic(self):
        a = benchmark_instance(100, 200, seed=3)
        b = benchmark_instance(100, 200, seed=3)
        np.testing.assert_array_equal(a.X, b.X)
        np.testing.assert_array_equal(a.y, b.y)

    def test_active_mode_needs_far_fewer_iterations(self):
        prob = benchmark_instance(100, 200, seed=1)
        cfg = dict(tol=1e-6, max_sweeps=500000)
        shoot = solve(prob, SolverConfig(mode="shooting", **cfg))
        active = solve(prob, SolverConfig(mode="active_shooting", **cfg))
        assert shoot.converged and active.converged
        assert active.iterations < 0.5 * shoot.iterations
        np.testing.assert_allclose(shoot.beta, active.beta, atol=1e-5)
