import numpy as np
import pytest

from spcor import backend


@pytest.fixture(params=sorted(backend.available_backends()))
def kernel_backend(request):
    """Run the decorated test under every installed kernel backend."""
    with backend.use(request.param):
        yield request.param


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)


def make_correlated_data(n, p, seed, strength=0.4):
    """Gaussian data with a sparse chain of conditional dependencies."""
    rng = np.random.default_rng(seed)
    A = np.eye(p)
    for i in range(p - 1):
        A[i, i + 1] = A[i + 1, i] = strength * (-1) ** i / 2
    Sigma = np.linalg.inv(A)
    d = np.sqrt(np.diag(Sigma))
    Sigma = Sigma / np.outer(d, d)
    L = np.linalg.cholesky(Sigma)
    return rng.standard_normal((n, p)) @ L.T
