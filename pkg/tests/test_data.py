import numpy as np
import pytest
from hypothesis import given, strategies as st

from spcor.data import (
    DataMatrix,
    DiagPrecision,
    PartialCorrVector,
    Weights,
    flat_to_pair,
    make_pair_index,
    n_pairs,
    pair_arrays,
    pair_to_flat,
    standardize,
)
from spcor.errors import InvalidPair, ZeroVarianceColumn


class TestDataMatrix:
    def test_rejects_non_finite(self):
        bad = np.ones((5, 3))
        bad[2, 1] = np.nan
        with pytest.raises(ValueError, match="non-finite"):
            DataMatrix(bad)
        bad[2, 1] = np.inf
        with pytest.raises(ValueError, match="non-finite"):
            DataMatrix(bad)

    def test_rejects_single_sample(self):
        with pytest.raises(ValueError):
            DataMatrix(np.ones((1, 3)))

    def test_rejects_single_variable(self):
        with pytest.raises(ValueError):
            DataMatrix(np.ones((5, 1)))

    def test_names_must_match_width(self):
        with pytest.raises(ValueError):
            DataMatrix(np.ones((3, 2)), variable_names=("a",))


class TestStandardize:
    def test_symmetric_three_point_column(self):
        data = DataMatrix(np.column_stack([[1.0, 2.0, 3.0], [5.0, 5.0, 8.0]]))
        out = standardize(data)
        np.testing.assert_allclose(out.values[:, 0], [-1.0, 0.0, 1.0], atol=1e-14)

    def test_idempotent(self, rng):
        data = DataMatrix(rng.normal(3.0, 2.5, size=(40, 6)))
        once = standardize(data)
        twice = standardize(once)
        assert np.abs(twice.values - once.values).max() < 1e-12

    def test_moments_against_direct_summation(self, rng):
        # independent oracle: recompute the moments with explicit loops
        data = DataMatrix(rng.normal(-1.0, 4.0, size=(50, 5)))
        out = standardize(data).values
        n = 50
        for j in range(5):
            total = 0.0
            for k in range(n):
                total += out[k, j]
            mean = total / n
            ss = 0.0
            for k in range(n):
                ss += (out[k, j] - mean) ** 2
            sd = (ss / (n - 1)) ** 0.5
            assert abs(mean) < 1e-12
            assert abs(sd - 1.0) < 1e-12

    def test_zero_variance_column(self):
        values = np.ones((10, 3))
        values[:, 0] = np.arange(10)
        values[:, 2] = np.arange(10) ** 2
        with pytest.raises(ZeroVarianceColumn) as err:
            standardize(DataMatrix(values))
        assert err.value.index == 1


class TestPairIndexing:
    def test_lexicographic_enumeration_p3(self):
        assert [pair_to_flat(0, 1, 3), pair_to_flat(0, 2, 3), pair_to_flat(1, 2, 3)] == [0, 1, 2]

    def test_last_pair_p5(self):
        assert pair_to_flat(3, 4, 5) == n_pairs(5) - 1 == 9

    @pytest.mark.parametrize("p", range(2, 31))
    def test_exhaustive_roundtrip(self, p):
        seen = set()
        flat = 0
        for i in range(p):
            for j in range(i + 1, p):
                k = pair_to_flat(i, j, p)
                assert k == flat
                assert flat_to_pair(k, p) == (i, j)
                seen.add(k)
                flat += 1
        assert seen == set(range(n_pairs(p)))

    def test_invalid_pairs(self):
        with pytest.raises(InvalidPair):
            pair_to_flat(2, 2, 5)
        with pytest.raises(InvalidPair):
            pair_to_flat(3, 2, 5)
        with pytest.raises(InvalidPair):
            pair_to_flat(0, 5, 5)
        with pytest.raises(InvalidPair):
            flat_to_pair(10, 5)

    @given(st.integers(2, 200), st.data())
    def test_roundtrip_property(self, p, data):
        i = data.draw(st.integers(0, p - 2))
        j = data.draw(st.integers(i + 1, p - 1))
        idx = make_pair_index(i, j, p)
        assert flat_to_pair(idx.flat, p) == (i, j)

    def test_pair_arrays_match_scalar_map(self):
        p = 12
        i_arr, j_arr = pair_arrays(p)
        for k in range(n_pairs(p)):
            assert (i_arr[k], j_arr[k]) == flat_to_pair(k, p)


class TestPartialCorrVector:
    def test_symmetric_lookup_and_matrix(self):
        vec = PartialCorrVector(np.array([0.5, 0.0, -0.25]), p=3)
        assert vec.get(0, 1) == vec.get(1, 0) == 0.5
        mat = vec.as_matrix()
        assert np.array_equal(mat, mat.T)
        assert np.all(np.diag(mat) == 0)
        assert mat[1, 2] == -0.25

    def test_degrees_and_nonzero_count(self):
        vec = PartialCorrVector(np.array([0.5, 0.0, -0.25]), p=3)
        assert vec.nonzero_count == 2
        np.testing.assert_array_equal(vec.degrees(), [1, 2, 1])
        assert vec.nonzero_pairs() == {(0, 1), (1, 2)}

    def test_length_validated(self):
        with pytest.raises(ValueError):
            PartialCorrVector(np.zeros(4), p=3)


def test_diag_precision_requires_positive():
    DiagPrecision(np.array([0.5, 2.0]))
    with pytest.raises(ValueError):
        DiagPrecision(np.array([0.5, 0.0]))


def test_weights_validate_scheme_and_positivity():
    Weights(np.ones(3), "degree")
    with pytest.raises(ValueError):
        Weights(np.ones(3), "unknown")
    with pytest.raises(ValueError):
        Weights(np.array([1.0, -1.0, 1.0]), "uniform")
