"""Synthetic benchmark networks, concentration matrices, and samplers.

Random module graphs (100 nodes each) come in three flavors:

* hub: three high-degree nodes (degree 13..17) among 97 nodes of degree
  at most four,
* power-law: degrees drawn from P(d) proportional to d^(-alpha),
* uniform: degrees uniform on {0, ..., 4}.

Degree sequences are realized with a configuration model.  Hub and
uniform modules are wired to their exact degree sequence by pairing stubs
and repairing self-loops and duplicate edges with degree-preserving edge
swaps; power-law sequences, whose heavy tail often makes an exact simple
realization impractical, are simplified instead (self-loops and duplicate
edges dropped).

Given a graph, a concentration-like matrix is built by drawing symmetric
edge weights uniformly from [-1, -0.5] u [0.5, 1], dividing every
off-diagonal entry by 1.5 times its row's absolute off-diagonal sum,
averaging the result with its transpose, and setting the diagonal to one.
This favors diagonal dominance but does not guarantee positive
definiteness (a high-degree node whose neighbors have few other edges can
break it), so draws are screened by their minimum eigenvalue and redrawn
from the seeded stream when necessary; :func:`generate_network` also
redraws the graph itself if weights alone cannot fix a draw.

Deterministic chain (AR) and ring matrices are built exactly with
off-diagonal entries 0.25 and 0.3 respectively.

The covariance is the correlation-normalized inverse of the concentration
matrix, and samples are drawn as Z @ L' with L its lower Cholesky factor,
optionally divided per sample by sqrt(chi2_df / df) for multivariate-t
observations.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field

import numpy as np

from .data import DataMatrix, PartialCorrVector, pair_arrays
from .errors import CholeskyFailed, GenerationFailed, SingularConcentration, SpcorError

__all__ = [
    "MODULE_SIZE",
    "NetworkGraph",
    "PrecisionSpec",
    "CovarianceSpec",
    "gen_hub_module",
    "gen_powerlaw_module",
    "gen_uniform_module",
    "gen_ar_precision",
    "gen_circle_precision",
    "build_concentration",
    "concentration_to_covariance",
    "assemble_modules",
    "generate_network",
    "sample_gaussian",
    "sample_t",
]

MODULE_SIZE = 100

# validity floor for the smallest eigenvalue of generated concentration
# matrices; draws below it are rejected and redrawn
MIN_EIGENVALUE = 1e-3


@dataclass(frozen=True)
class NetworkGraph:
    """Undirected simple graph on vertices 0..p-1."""

    p: int
    edges: tuple
    hub_labels: tuple = ()

    def __post_init__(self):
        edges = tuple(sorted((int(i), int(j)) for i, j in self.edges))
        for i, j in edges:
            if not (0 <= i < j < self.p):
                raise ValueError(f"edge ({i}, {j}) out of range for p={self.p}")
        if len(set(edges)) != len(edges):
            raise ValueError("duplicate edges")
        object.__setattr__(self, "edges", edges)
        object.__setattr__(self, "hub_labels", tuple(sorted(int(h) for h in self.hub_labels)))

    @property
    def n_edges(self) -> int:
        return len(self.edges)

    def edge_set(self) -> set:
        return set(self.edges)

    def degrees(self) -> np.ndarray:
        deg = np.zeros(self.p, dtype=np.int64)
        for i, j in self.edges:
            deg[i] += 1
            deg[j] += 1
        return deg


@dataclass(frozen=True)
class PrecisionSpec:
    """A generated concentration-like matrix together with its graph."""

    A: np.ndarray
    graph: NetworkGraph
    condition_estimate: float


@dataclass(frozen=True)
class CovarianceSpec:
    """Covariance implied by a concentration draw, plus ground truth."""

    Sigma: np.ndarray
    true_partial_corr: PartialCorrVector
    precision_diag: np.ndarray
    graph: NetworkGraph


# ---------------------------------------------------------------------------
# degree-sequence realization


def _key(x: int, y: int) -> tuple:
    return (x, y) if x < y else (y, x)


def _edges_from_stubs(degrees, rng):
    stubs = np.repeat(np.arange(len(degrees)), degrees)
    rng.shuffle(stubs)
    return stubs[0::2].copy(), stubs[1::2].copy()


def _bad_slots(u, v):
    cnt = Counter()
    for x, y in zip(u, v):
        if x != y:
            cnt[_key(x, y)] += 1
    seen = set()
    bad = []
    for t in range(len(u)):
        if u[t] == v[t]:
            bad.append(t)
            continue
        k = _key(u[t], v[t])
        if cnt[k] > 1 and k in seen:
            bad.append(t)
        seen.add(k)
    return bad, cnt


def _realize_exact(degrees, rng, max_rounds: int = 60):
    """Simple graph with exactly the given degrees, or None on failure.

    Pairs stubs uniformly, then repairs self-loops and duplicates with
    random degree-preserving double edge swaps, reshuffling from scratch
    when a repair round makes no progress.
    """
    degrees = np.asarray(degrees, dtype=np.int64)
    if degrees.sum() % 2:
        raise ValueError("degree sum must be even")
    m = int(degrees.sum()) // 2
    if m == 0:
        return []
    u, v = _edges_from_stubs(degrees, rng)
    for _ in range(max_rounds):
        bad, cnt = _bad_slots(u, v)
        if not bad:
            return [(int(x), int(y)) if x < y else (int(y), int(x))
                    for x, y in zip(u, v)]
        progress = False
        for t in bad:
            fixed = False
            for _attempt in range(30):
                s = int(rng.integers(m))
                if s == t:
                    continue
                if rng.integers(2):
                    e1 = (u[t], v[s])
                    e2 = (u[s], v[t])
                else:
                    e1 = (u[t], u[s])
                    e2 = (v[s], v[t])
                if e1[0] == e1[1] or e2[0] == e2[1]:
                    continue
                k1, k2 = _key(*e1), _key(*e2)
                if k1 == k2:
                    continue
                # temporarily remove the two slots being rewired
                for slot in (t, s):
                    if u[slot] != v[slot]:
                        cnt[_key(u[slot], v[slot])] -= 1
                if cnt[k1] == 0 and cnt[k2] == 0:
                    u[t], v[t] = e1
                    u[s], v[s] = e2
                    cnt[k1] += 1
                    cnt[k2] += 1
                    fixed = True
                else:
                    for slot in (t, s):
                        if u[slot] != v[slot]:
                            cnt[_key(u[slot], v[slot])] += 1
                if fixed:
                    break
            progress = progress or fixed
        if not progress:
            u, v = _edges_from_stubs(degrees, rng)
    return None


def _realize_simplified(degrees, rng):
    """Configuration-model draw with self-loops and duplicates removed."""
    u, v = _edges_from_stubs(np.asarray(degrees, dtype=np.int64), rng)
    edges = set()
    for x, y in zip(u, v):
        if x != y:
            edges.add(_key(int(x), int(y)))
    return sorted(edges)


def _even_up(degrees, rng, cap):
    """Make the degree sum even by incrementing one node below the cap."""
    if degrees.sum() % 2:
        room = np.flatnonzero(degrees < cap)
        degrees[rng.choice(room)] += 1
    return degrees


# ---------------------------------------------------------------------------
# module graph generators


def gen_hub_module(seed) -> NetworkGraph:
    """100-node module: three hubs of degree 13..17, the rest of degree <= 4.

    Non-hub degrees are Binomial(4, 0.47), chosen so that five modules
    carry about 568 edges in total.  The exact degree sequence is wired
    by stub pairing with edge-swap repair.
    """
    rng = np.random.default_rng(seed)
    for _ in range(200):
        degrees = np.empty(MODULE_SIZE, dtype=np.int64)
        degrees[:3] = rng.integers(13, 18, size=3)
        degrees[3:] = rng.binomial(4, 0.47, size=MODULE_SIZE - 3)
        if degrees.sum() % 2:
            room = 3 + np.flatnonzero(degrees[3:] < 4)
            degrees[rng.choice(room)] += 1
        edges = _realize_exact(degrees, rng)
        if edges is not None:
            return NetworkGraph(MODULE_SIZE, edges, hub_labels=(0, 1, 2))
    raise GenerationFailed("could not realize a hub degree sequence")


def gen_powerlaw_module(seed, alpha: float = 2.3) -> NetworkGraph:
    """100-node module with power-law degrees P(d) ~ d^(-alpha), d >= 1.

    Degrees are truncated at 99 and the tail mass renormalized; an odd
    degree sum is evened by incrementing one node.  Wiring uses the
    configuration model with simplification, so realized degrees can fall
    slightly below their targets.
    """
    if alpha <= 1:
        raise ValueError("power-law exponent must exceed 1")
    rng = np.random.default_rng(seed)
    support = np.arange(1, MODULE_SIZE)
    weights = support.astype(np.float64) ** (-alpha)
    weights /= weights.sum()
    degrees = rng.choice(support, size=MODULE_SIZE, p=weights)
    degrees = _even_up(degrees, rng, cap=MODULE_SIZE - 1)
    edges = _realize_simplified(degrees, rng)
    hubs = tuple(int(i) for i in np.argsort(degrees)[::-1][:3])
    return NetworkGraph(MODULE_SIZE, edges, hub_labels=hubs)


def gen_uniform_module(seed) -> NetworkGraph:
    """100-node module with degrees uniform on {0, ..., 4}, wired exactly."""
    rng = np.random.default_rng(seed)
    for _ in range(200):
        degrees = rng.integers(0, 5, size=MODULE_SIZE)
        degrees = _even_up(degrees, rng, cap=4)
        edges = _realize_exact(degrees, rng)
        if edges is not None:
            return NetworkGraph(MODULE_SIZE, edges)
    raise GenerationFailed("could not realize a uniform degree sequence")


# ---------------------------------------------------------------------------
# deterministic matrices


def gen_ar_precision(p: int) -> PrecisionSpec:
    """Chain matrix: unit diagonal, first off-diagonals 0.25."""
    if p < 2:
        raise ValueError("need p >= 2")
    A = np.eye(p)
    idx = np.arange(p - 1)
    A[idx, idx + 1] = 0.25
    A[idx + 1, idx] = 0.25
    graph = NetworkGraph(p, [(int(i), int(i + 1)) for i in range(p - 1)])
    eigs = np.linalg.eigvalsh(A)
    return PrecisionSpec(A=A, graph=graph, condition_estimate=float(eigs[-1] / eigs[0]))


def gen_circle_precision(p: int) -> PrecisionSpec:
    """Ring matrix: unit diagonal, neighbors 0.3, wrap-around corner 0.3."""
    if p < 3:
        raise ValueError("need p >= 3")
    A = np.eye(p)
    idx = np.arange(p - 1)
    A[idx, idx + 1] = 0.3
    A[idx + 1, idx] = 0.3
    A[0, p - 1] = A[p - 1, 0] = 0.3
    edges = [(int(i), int(i + 1)) for i in range(p - 1)] + [(0, p - 1)]
    graph = NetworkGraph(p, edges)
    eigs = np.linalg.eigvalsh(A)
    return PrecisionSpec(A=A, graph=graph, condition_estimate=float(eigs[-1] / eigs[0]))


# ---------------------------------------------------------------------------
# concentration draws and covariance


def _draw_concentration(graph: NetworkGraph, rng) -> np.ndarray:
    p = graph.p
    S = np.zeros((p, p))
    for i, j in graph.edges:
        w = rng.uniform(0.5, 1.0) * (1.0 if rng.integers(2) else -1.0)
        S[i, j] = S[j, i] = w
    rowsum = np.abs(S).sum(axis=1)
    B = np.zeros_like(S)
    nz = rowsum > 0
    B[nz] = S[nz] / (1.5 * rowsum[nz, None])
    A = 0.5 * (B + B.T)
    np.fill_diagonal(A, 1.0)
    return A


def build_concentration(graph: NetworkGraph, seed, max_tries: int = 64) -> PrecisionSpec:
    """Random concentration matrix supported exactly on the graph's edges.

    Draws edge weights from the seeded stream and applies the rescaling
    described in the module docstring.  Draws whose minimum eigenvalue
    falls below the validity floor are redrawn with fresh weights.

    Raises
    ------
    GenerationFailed
        If no weight draw yields a valid matrix; the graph structure
        itself can make that happen, in which case the caller should
        redraw the graph (``generate_network`` does).
    """
    rng = np.random.default_rng(seed)
    for _ in range(max_tries):
        A = _draw_concentration(graph, rng)
        eigs = np.linalg.eigvalsh(A)
        if eigs[0] > MIN_EIGENVALUE:
            return PrecisionSpec(A=A, graph=graph,
                                 condition_estimate=float(eigs[-1] / eigs[0]))
    raise GenerationFailed(
        f"no positive definite weight draw in {max_tries} tries for this graph")


def concentration_to_covariance(spec: PrecisionSpec) -> CovarianceSpec:
    """Correlation-normalized inverse, with the implied ground truth.

    Returns the covariance (unit diagonal by construction), the true
    partial correlations, and the diagonal of the true concentration
    matrix of the covariance.
    """
    A = spec.A
    p = A.shape[0]
    try:
        A_inv = np.linalg.inv(A)
    except np.linalg.LinAlgError as exc:
        raise SingularConcentration(str(exc)) from None
    d = np.sqrt(np.diag(A_inv))
    Sigma = A_inv / np.outer(d, d)
    try:
        np.linalg.cholesky(Sigma)
    except np.linalg.LinAlgError:
        raise CholeskyFailed("implied covariance is not positive definite") from None

    # Sigma^{-1} = D A D with D = diag(d), so the partial correlations are
    # -A_ij exactly and the true precision diagonal is diag(A^{-1})
    i_arr, j_arr = pair_arrays(p)
    rho = -A[i_arr, j_arr]
    support = {(int(i), int(j)) for i, j in zip(i_arr[rho != 0], j_arr[rho != 0])}
    if support != spec.graph.edge_set():
        raise SpcorError("partial-correlation support does not match the graph")
    return CovarianceSpec(Sigma=Sigma,
                          true_partial_corr=PartialCorrVector(rho, p),
                          precision_diag=np.diag(A_inv).copy(),
                          graph=spec.graph)


def assemble_modules(specs) -> PrecisionSpec:
    """Block-diagonal concatenation of module matrices and graphs."""
    specs = list(specs)
    if not specs:
        raise ValueError("need at least one module")
    if len(specs) == 1:
        return specs[0]
    p_total = sum(s.A.shape[0] for s in specs)
    A = np.zeros((p_total, p_total))
    edges = []
    hubs = []
    lo = 0
    min_eig = np.inf
    max_eig = -np.inf
    for s in specs:
        k = s.A.shape[0]
        A[lo:lo + k, lo:lo + k] = s.A
        edges.extend((i + lo, j + lo) for i, j in s.graph.edges)
        hubs.extend(h + lo for h in s.graph.hub_labels)
        eigs = np.linalg.eigvalsh(s.A)
        min_eig = min(min_eig, eigs[0])
        max_eig = max(max_eig, eigs[-1])
        lo += k
    graph = NetworkGraph(p_total, edges, hub_labels=tuple(hubs))
    return PrecisionSpec(A=A, graph=graph, condition_estimate=float(max_eig / min_eig))


_MODULE_GENERATORS = {
    "hub": gen_hub_module,
    "powerlaw": gen_powerlaw_module,
    "uniform": gen_uniform_module,
}


def generate_network(kind: str, seed, modules: int = 1, p: int | None = None) -> PrecisionSpec:
    """One call from network kind to a valid concentration matrix.

    For the module kinds (hub, powerlaw, uniform) this draws ``modules``
    disjoint 100-node modules, retrying the graph and weights together
    until the concentration draw clears the validity floor, and
    assembles them block-diagonally.  For "ar" and "circle" the exact
    matrices of size ``p`` are returned.  Deterministic given the seed.
    """
    if kind in ("ar", "circle"):
        if p is None:
            raise ValueError(f"kind {kind!r} requires p")
        return gen_ar_precision(p) if kind == "ar" else gen_circle_precision(p)
    if kind not in _MODULE_GENERATORS:
        raise ValueError(f"unknown network kind {kind!r}")
    if modules < 1:
        raise ValueError("need at least one module")
    gen = _MODULE_GENERATORS[kind]
    rng = np.random.default_rng(seed)
    specs = []
    for _ in range(modules):
        spec = None
        for _attempt in range(300):
            graph = gen(rng)
            try:
                spec = build_concentration(graph, rng, max_tries=4)
                break
            except GenerationFailed:
                continue
        if spec is None:
            raise GenerationFailed(f"could not generate a valid {kind} module")
        specs.append(spec)
    return assemble_modules(specs)


# ---------------------------------------------------------------------------
# samplers


def sample_gaussian(Sigma, n: int, seed) -> DataMatrix:
    """n i.i.d. mean-zero Gaussian rows with the given covariance."""
    Sigma = np.asarray(Sigma, dtype=np.float64)
    try:
        L = np.linalg.cholesky(Sigma)
    except np.linalg.LinAlgError:
        raise CholeskyFailed("covariance is not positive definite") from None
    rng = np.random.default_rng(seed)
    Z = rng.standard_normal((n, Sigma.shape[0]))
    return DataMatrix(Z @ L.T)


def sample_t(Sigma, n: int, df: float, seed) -> DataMatrix:
    """n i.i.d. multivariate-t rows with scale matrix Sigma.

    Each Gaussian row is divided by sqrt(chi2_df / df), so for df > 2 the
    covariance of the rows is df/(df-2) times Sigma.
    """
    if df <= 0:
        raise ValueError("degrees of freedom must be positive")
    Sigma = np.asarray(Sigma, dtype=np.float64)
    try:
        L = np.linalg.cholesky(Sigma)
    except np.linalg.LinAlgError:
        raise CholeskyFailed("scale matrix is not positive definite") from None
    rng = np.random.default_rng(seed)
    Z = rng.standard_normal((n, Sigma.shape[0]))
    chi = rng.chisquare(df, size=n)
    return DataMatrix((Z @ L.T) / np.sqrt(chi / df)[:, None])
