"""Core domain types: data matrices, pair indexing, and standardization.

Conventions used throughout the package:

* variables are indexed ``0 .. p-1`` in code; the file formats written by
  the CLI use 1-based indices,
* the p(p-1)/2 unordered variable pairs are enumerated lexicographically,
  ``(0,1), (0,2), ..., (0,p-1), (1,2), ..., (p-2,p-1)``, and a "flat" index
  into that enumeration addresses one stored partial correlation,
* sample standard deviations use the n-1 denominator.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import InvalidPair, ZeroVarianceColumn

__all__ = [
    "DataMatrix",
    "PairIndex",
    "PartialCorrVector",
    "DiagPrecision",
    "Weights",
    "WEIGHT_SCHEMES",
    "standardize",
    "n_pairs",
    "pair_to_flat",
    "flat_to_pair",
    "pair_arrays",
    "make_pair_index",
]

WEIGHT_SCHEMES = ("uniform", "residual_variance", "degree")


@dataclass(frozen=True)
class DataMatrix:
    """n samples by p variables of real observations.

    Rejects non-finite entries, fewer than two samples, or fewer than two
    variables at construction.  Instances are treated as immutable and may
    be shared freely across parallel workers.
    """

    values: np.ndarray
    variable_names: tuple[str, ...] | None = None

    def __post_init__(self):
        values = np.asarray(self.values, dtype=np.float64)
        if values.ndim != 2:
            raise ValueError("data must be a 2-d array of shape (n, p)")
        n, p = values.shape
        if n < 2:
            raise ValueError("need at least 2 samples to form a sample standard deviation")
        if p < 2:
            raise ValueError("need at least 2 variables")
        if not np.all(np.isfinite(values)):
            raise ValueError("data contains non-finite entries")
        if self.variable_names is not None:
            names = tuple(self.variable_names)
            if len(names) != p:
                raise ValueError("variable_names length does not match number of columns")
            object.__setattr__(self, "variable_names", names)
        object.__setattr__(self, "values", values)

    @property
    def n(self) -> int:
        return self.values.shape[0]

    @property
    def p(self) -> int:
        return self.values.shape[1]


def standardize(data: DataMatrix) -> DataMatrix:
    """Center each column to mean zero and scale to sample sd one.

    The divisor is the (n-1)-denominator sample standard deviation.
    Idempotent to floating-point precision.

    Raises
    ------
    ZeroVarianceColumn
        If some column is constant.
    """
    values = data.values
    mean = values.mean(axis=0)
    centered = values - mean
    sd = centered.std(axis=0, ddof=1)
    for j in np.flatnonzero(sd == 0.0):
        raise ZeroVarianceColumn(int(j))
    return DataMatrix(centered / sd, data.variable_names)


def n_pairs(p: int) -> int:
    """Number of unordered variable pairs, p(p-1)/2."""
    return p * (p - 1) // 2


@dataclass(frozen=True)
class PairIndex:
    """One unordered variable pair (i < j) and its flat position."""

    i: int
    j: int
    flat: int


def pair_to_flat(i: int, j: int, p: int) -> int:
    """Flat index of pair (i, j), 0 <= i < j < p, in lexicographic order."""
    if not (0 <= i < j < p):
        raise InvalidPair(f"need 0 <= i < j < p, got (i={i}, j={j}, p={p})")
    return i * p - i * (i + 1) // 2 + (j - i - 1)


def flat_to_pair(flat: int, p: int) -> tuple[int, int]:
    """Inverse of :func:`pair_to_flat`."""
    m = n_pairs(p)
    if not (0 <= flat < m):
        raise InvalidPair(f"flat index {flat} outside [0, {m})")
    # row offsets: pairs with first index < i occupy the first offset[i] slots
    i = 0
    offset = 0
    while offset + (p - i - 1) <= flat:
        offset += p - i - 1
        i += 1
    j = flat - offset + i + 1
    return i, j


def make_pair_index(i: int, j: int, p: int) -> PairIndex:
    return PairIndex(i, j, pair_to_flat(i, j, p))


def pair_arrays(p: int) -> tuple[np.ndarray, np.ndarray]:
    """Index arrays (i_arr, j_arr) for all pairs in flat order."""
    i_arr, j_arr = np.triu_indices(p, k=1)
    return i_arr.astype(np.int32), j_arr.astype(np.int32)


@dataclass(frozen=True)
class PartialCorrVector:
    """The p(p-1)/2 partial correlations, one stored value per unordered pair."""

    rho: np.ndarray
    p: int

    def __post_init__(self):
        rho = np.asarray(self.rho, dtype=np.float64)
        if rho.shape != (n_pairs(self.p),):
            raise ValueError(f"expected {n_pairs(self.p)} entries for p={self.p}")
        object.__setattr__(self, "rho", rho)

    def get(self, i: int, j: int) -> float:
        """Value for the unordered pair {i, j}; symmetric by construction."""
        if i == j:
            raise InvalidPair("no self-pairs")
        a, b = (i, j) if i < j else (j, i)
        return float(self.rho[pair_to_flat(a, b, self.p)])

    def as_matrix(self) -> np.ndarray:
        """Symmetric p x p matrix with zero diagonal."""
        mat = np.zeros((self.p, self.p))
        i_arr, j_arr = pair_arrays(self.p)
        mat[i_arr, j_arr] = self.rho
        mat[j_arr, i_arr] = self.rho
        return mat

    def degrees(self) -> np.ndarray:
        """Per-variable count of nonzero partial correlations."""
        deg = np.zeros(self.p, dtype=np.int64)
        i_arr, j_arr = pair_arrays(self.p)
        nz = self.rho != 0.0
        np.add.at(deg, i_arr[nz], 1)
        np.add.at(deg, j_arr[nz], 1)
        return deg

    def nonzero_pairs(self) -> set:
        """Edge set view: the (i, j) pairs with nonzero stored value."""
        i_arr, j_arr = pair_arrays(self.p)
        nz = self.rho != 0.0
        return set(zip(i_arr[nz].tolist(), j_arr[nz].tolist()))

    @property
    def nonzero_count(self) -> int:
        return int(np.count_nonzero(self.rho))


@dataclass(frozen=True)
class DiagPrecision:
    """Diagonal entries of the concentration matrix (inverse variances)."""

    sigma_diag: np.ndarray

    def __post_init__(self):
        sigma = np.asarray(self.sigma_diag, dtype=np.float64)
        if sigma.ndim != 1:
            raise ValueError("sigma_diag must be 1-d")
        if not np.all(sigma > 0):
            raise ValueError("all diagonal precision entries must be strictly positive")
        object.__setattr__(self, "sigma_diag", sigma)

    @property
    def p(self) -> int:
        return self.sigma_diag.shape[0]


@dataclass(frozen=True)
class Weights:
    """Per-variable loss weights and the scheme that produced them."""

    w: np.ndarray
    scheme: str = "uniform"

    def __post_init__(self):
        w = np.asarray(self.w, dtype=np.float64)
        if w.ndim != 1:
            raise ValueError("weights must be 1-d")
        if not np.all(w > 0):
            raise ValueError("weights must be strictly positive")
        if self.scheme not in WEIGHT_SCHEMES:
            raise ValueError(f"unknown weight scheme {self.scheme!r}")
        object.__setattr__(self, "w", w)

    @property
    def p(self) -> int:
        return self.w.shape[0]
