"""Plain-text interchange formats used by the command line.

* data matrix: UTF-8 CSV, '.' decimals, optional header row of variable
  names, one sample per row,
* edge list: tab-separated with header ``i<TAB>j<TAB>rho``; indices are
  1-based with i < j, values printed with 6 significant digits,
* sigma sidecar: one ``index<TAB>sigma_ii`` line per variable, 1-based,
* hub sidecar: one 1-based vertex index per line.

Data and sigma values are written with the shortest exact float
representation, so write/read round-trips reproduce them bit for bit.
"""

from __future__ import annotations

import numpy as np

from .data import DataMatrix
from .errors import DataFormatError

__all__ = [
    "write_data",
    "read_data",
    "write_edges",
    "read_edges",
    "write_sigma",
    "read_sigma",
    "write_hubs",
    "read_hubs",
]


def _fmt(v: float) -> str:
    return repr(float(v))


def write_data(path, data: DataMatrix) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        if data.variable_names is not None:
            fh.write(",".join(data.variable_names) + "\n")
        for row in data.values:
            fh.write(",".join(_fmt(v) for v in row) + "\n")


def _is_float(token: str) -> bool:
    try:
        float(token)
        return True
    except ValueError:
        return False


def read_data(path) -> DataMatrix:
    try:
        with open(path, encoding="utf-8") as fh:
            lines = [ln.strip() for ln in fh if ln.strip()]
    except OSError as exc:
        raise DataFormatError(f"cannot read {path}: {exc}") from None
    if not lines:
        raise DataFormatError(f"{path} is empty")
    first = lines[0].split(",")
    names = None
    start = 0
    if not all(_is_float(tok) for tok in first):
        names = tuple(tok.strip() for tok in first)
        start = 1
    rows = []
    for ln in lines[start:]:
        toks = ln.split(",")
        try:
            rows.append([float(t) for t in toks])
        except ValueError:
            raise DataFormatError(f"non-numeric value in {path}: {ln!r}") from None
    if not rows:
        raise DataFormatError(f"{path} has no data rows")
    widths = {len(r) for r in rows}
    if len(widths) != 1:
        raise DataFormatError(f"{path} has ragged rows")
    try:
        return DataMatrix(np.asarray(rows, dtype=np.float64), names)
    except ValueError as exc:
        raise DataFormatError(f"{path}: {exc}") from None


def write_edges(path, edges, values) -> None:
    """Edge list with 1-based indices; ``edges`` holds 0-based pairs."""
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("i\tj\trho\n")
        for (i, j), v in zip(edges, values):
            a, b = (i, j) if i < j else (j, i)
            fh.write(f"{a + 1}\t{b + 1}\t{float(v):.6g}\n")


def read_edges(path):
    """Returns (edges, values) with 0-based pairs."""
    try:
        with open(path, encoding="utf-8") as fh:
            lines = [ln.rstrip("\n") for ln in fh if ln.strip()]
    except OSError as exc:
        raise DataFormatError(f"cannot read {path}: {exc}") from None
    if not lines or lines[0].split("\t")[:3] != ["i", "j", "rho"]:
        raise DataFormatError(f"{path} lacks the edge-list header")
    edges = []
    values = []
    for ln in lines[1:]:
        toks = ln.split("\t")
        if len(toks) != 3:
            raise DataFormatError(f"malformed edge line in {path}: {ln!r}")
        try:
            i, j, v = int(toks[0]), int(toks[1]), float(toks[2])
        except ValueError:
            raise DataFormatError(f"malformed edge line in {path}: {ln!r}") from None
        if not (1 <= i < j):
            raise DataFormatError(f"edge indices must satisfy 1 <= i < j, got {ln!r}")
        edges.append((i - 1, j - 1))
        values.append(v)
    return edges, np.asarray(values, dtype=np.float64)


def write_sigma(path, sigma) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for idx, v in enumerate(np.asarray(sigma, dtype=np.float64), start=1):
            fh.write(f"{idx}\t{_fmt(v)}\n")


def read_sigma(path) -> np.ndarray:
    try:
        with open(path, encoding="utf-8") as fh:
            lines = [ln.strip() for ln in fh if ln.strip()]
    except OSError as exc:
        raise DataFormatError(f"cannot read {path}: {exc}") from None
    values = {}
    for ln in lines:
        toks = ln.split("\t")
        if len(toks) != 2:
            raise DataFormatError(f"malformed sigma line in {path}: {ln!r}")
        try:
            values[int(toks[0])] = float(toks[1])
        except ValueError:
            raise DataFormatError(f"malformed sigma line in {path}: {ln!r}") from None
    p = len(values)
    if sorted(values) != list(range(1, p + 1)):
        raise DataFormatError(f"{path} does not cover indices 1..{p}")
    return np.array([values[k] for k in range(1, p + 1)])


def write_hubs(path, hubs) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for h in hubs:
            fh.write(f"{int(h) + 1}\n")


def read_hubs(path):
    try:
        with open(path, encoding="utf-8") as fh:
            return [int(ln.strip()) - 1 for ln in fh if ln.strip()]
    except (OSError, ValueError) as exc:
        raise DataFormatError(f"cannot read hub file {path}: {exc}") from None
