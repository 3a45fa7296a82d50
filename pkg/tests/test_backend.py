import numpy as np
import pytest

from spcor import backend
from spcor.data import DataMatrix, pair_arrays, standardize
from spcor.joint import max_penalty, solve_partial_corr
from spcor.solver import SolverConfig

from conftest import make_correlated_data


def test_compiled_backend_is_built_and_default():
    assert "python" in backend.available_backends()
    assert "c" in backend.available_backends(), "compiled kernels missing from the build"
    assert backend.active_backend() in backend.available_backends()


def test_use_restores_previous_backend():
    before = backend.active_backend()
    with backend.use("python"):
        assert backend.active_backend() == "python"
    assert backend.active_backend() == before


def test_unknown_backend_rejected():
    with pytest.raises(ImportError):
        backend.set_backend("fortran")


def test_pair_solver_identical_across_backends():
    if len(backend.available_backends()) < 2:
        pytest.skip("compiled backend not built")
    Y = standardize(DataMatrix(make_correlated_data(60, 12, 5, strength=0.6))).values
    lam = 0.25 * max_penalty(Y)
    sigma = np.full(12, 1.1)
    weights = np.linspace(0.5, 2.0, 12)
    results = {}
    for name in backend.available_backends():
        with backend.use(name):
            theta, E, rep = solve_partial_corr(Y, sigma, weights, lam,
                                               SolverConfig(tol=1e-10, max_sweeps=50000))
        results[name] = (theta, E, rep)
    t_c, e_c, r_c = results["c"]
    t_py, e_py, r_py = results["python"]
    np.testing.assert_allclose(t_c, t_py, atol=1e-10)
    np.testing.assert_allclose(e_c, e_py, atol=1e-9)
    assert r_c.iterations == r_py.iterations
    assert r_c.sweeps == r_py.sweeps
    assert r_c.converged and r_py.converged
