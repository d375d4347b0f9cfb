"""kNN base-graph construction over embedding rows, exact or approximate."""

from dataclasses import dataclass

import numpy as np

from . import _kernels
from ._rng import substream
from .errors import ConfigError, DegenerateEmbedding, KTooLarge, SizeMismatch
from .graph import SparseGraph

EXACT = "exact"
APPROXIMATE = "approx"


@dataclass
class KnnConfig:
    k: int
    mode: str = EXACT
    approx_ef: int | None = None  # search breadth; defaults to 2k
    seed: int = 0

    def __post_init__(self):
        if self.k < 1:
            raise ConfigError(f"k must be >= 1, got {self.k}")
        if self.mode not in (EXACT, APPROXIMATE):
            raise ConfigError(f"unknown kNN mode {self.mode!r}")
        if self.approx_ef is None:
            self.approx_ef = 2 * self.k
        if self.approx_ef < self.k:
            raise ConfigError(f"approx_ef={self.approx_ef} must be >= k={self.k}")


def knn_neighbors(emb: np.ndarray, cfg: KnnConfig) -> np.ndarray:
    """(n, k) neighbor ids per node, before symmetrization.

    Exact mode scans all pairs; ties on distance go to the smaller id.
    Approximate mode queries a navigable-small-world index built in a seeded
    random insertion order.
    """
    emb = np.asarray(emb, dtype=np.float64)
    if emb.ndim != 2:
        raise ConfigError("embedding must be a 2-d array")
    n = emb.shape[0]
    if n < 2:
        raise ConfigError("need at least two rows to build a kNN graph")
    if cfg.k > n - 1:
        raise KTooLarge(f"k={cfg.k} exceeds n-1={n - 1}")
    if np.all(emb == emb[0]):
        raise DegenerateEmbedding("all embedding rows identical; kNN graph undefined")
    if cfg.mode == EXACT:
        return _kernels.exact_knn(emb, cfg.k)
    order = substream(cfg.seed, "knn").permutation(n).astype(np.int64)
    return _kernels.nsw_knn(emb, cfg.k, cfg.approx_ef, order)


def build_knn_graph(emb: np.ndarray, cfg: KnnConfig) -> SparseGraph:
    """Union-symmetrized kNN graph with unit edge weights: (i, j) is an edge
    iff j is among i's k nearest rows or vice versa."""
    nbrs = knn_neighbors(emb, cfg)
    n = nbrs.shape[0]
    src = np.repeat(np.arange(n, dtype=np.int64), nbrs.shape[1])
    dst = nbrs.reshape(-1)
    lo = np.minimum(src, dst)
    hi = np.maximum(src, dst)
    codes = np.unique(lo * n + hi)
    return SparseGraph.from_edges(n, codes // n, codes % n)


def knn_recall(approx: SparseGraph, exact: SparseGraph) -> float:
    """|edges(approx) ∩ edges(exact)| / |edges(exact)|."""
    if approx.n != exact.n:
        raise SizeMismatch(f"node counts differ: {approx.n} vs {exact.n}")
    exact_set = exact.edge_set()
    if not exact_set:
        return 1.0
    return len(approx.edge_set() & exact_set) / len(exact_set)
