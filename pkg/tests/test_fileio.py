import numpy as np
import pytest

from spcor import fileio
from spcor.data import DataMatrix
from spcor.errors import DataFormatError


class TestDataFiles:
    def test_roundtrip_without_header(self, tmp_path, rng):
        path = tmp_path / "d.csv"
        data = DataMatrix(rng.normal(size=(12, 4)))
        fileio.write_data(path, data)
        back = fileio.read_data(path)
        np.testing.assert_array_equal(back.values, data.values)
        assert back.variable_names is None

    def test_roundtrip_with_header_byte_identical(self, tmp_path, rng):
        path1 = tmp_path / "a.csv"
        path2 = tmp_path / "b.csv"
        data = DataMatrix(rng.normal(size=(7, 3)) * 1e-3,
                          variable_names=("x1", "x2", "x3"))
        fileio.write_data(path1, data)
        fileio.write_data(path2, fileio.read_data(path1))
        assert path1.read_bytes() == path2.read_bytes()

    def test_rejects_ragged_and_nonnumeric(self, tmp_path):
        bad = tmp_path / "bad.csv"
        bad.write_text("1.0,2.0\n3.0\n")
        with pytest.raises(DataFormatError):
            fileio.read_data(bad)
        bad.write_text("1.0,2.0\n3.0,oops\n")
        with pytest.raises(DataFormatError):
            fileio.read_data(bad)

    def test_missing_file(self, tmp_path):
        with pytest.raises(DataFormatError):
            fileio.read_data(tmp_path / "nope.csv")

    def test_empty_file(self, tmp_path):
        empty = tmp_path / "e.csv"
        empty.write_text("")
        with pytest.raises(DataFormatError):
            fileio.read_data(empty)


class TestEdgeFiles:
    def test_header_and_one_based_indices(self, tmp_path):
        path = tmp_path / "e.tsv"
        fileio.write_edges(path, [(0, 1), (2, 5)], [0.123456789, -1e-4])
        lines = path.read_text().splitlines()
        assert lines[0] == "i\tj\trho"
        assert lines[1] == "1\t2\t0.123457"
        assert lines[2] == "3\t6\t-0.0001"

    def test_file_level_roundtrip_stable(self, tmp_path):
        p1 = tmp_path / "a.tsv"
        p2 = tmp_path / "b.tsv"
        fileio.write_edges(p1, [(0, 3), (1, 2)], [0.5, -0.25])
        edges, values = fileio.read_edges(p1)
        fileio.write_edges(p2, edges, values)
        assert p1.read_bytes() == p2.read_bytes()

    def test_empty_edge_list(self, tmp_path):
        path = tmp_path / "empty.tsv"
        fileio.write_edges(path, [], [])
        edges, values = fileio.read_edges(path)
        assert edges == [] and values.size == 0

    def test_rejects_bad_header_and_rows(self, tmp_path):
        path = tmp_path / "bad.tsv"
        path.write_text("a\tb\tc\n")
        with pytest.raises(DataFormatError):
            fileio.read_edges(path)
        path.write_text("i\tj\trho\n2\t1\t0.5\n")
        with pytest.raises(DataFormatError):
            fileio.read_edges(path)


class TestSigmaFiles:
    def test_roundtrip(self, tmp_path):
        path = tmp_path / "s.tsv"
        sigma = np.array([1.0256410256410255, 2.0, 0.3333333333333333])
        fileio.write_sigma(path, sigma)
        np.testing.assert_array_equal(fileio.read_sigma(path), sigma)

    def test_must_cover_contiguous_indices(self, tmp_path):
        path = tmp_path / "s.tsv"
        path.write_text("1\t1.0\n3\t2.0\n")
        with pytest.raises(DataFormatError):
            fileio.read_sigma(path)


def test_hub_sidecar_roundtrip(tmp_path):
    path = tmp_path / "h.tsv"
    fileio.write_hubs(path, [0, 5, 17])
    assert fileio.read_hubs(path) == [0, 5, 17]
    assert path.read_text() == "1\n6\n18\n"
