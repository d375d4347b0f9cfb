"""Shared test utilities: graph generators and dense reference constructions."""

import numpy as np

from garnet import SparseGraph, normalized_operator


def random_graph(n, p, rng, weighted=False) -> SparseGraph:
    """Erdos-Renyi graph, optionally with uniform random weights in [0.5, 2]."""
    iu, ju = np.triu_indices(n, 1)
    mask = rng.random(iu.shape[0]) < p
    w = rng.uniform(0.5, 2.0, int(mask.sum())) if weighted else None
    return SparseGraph.from_edges(n, iu[mask], ju[mask], w)


def random_connected_graph(n, p, rng, weighted=False) -> SparseGraph:
    """Random graph plus a random spanning path, so it is always connected."""
    g = random_graph(n, p, rng, weighted)
    order = rng.permutation(n)
    ei, ej, ew = g.edge_arrays()
    path_w = rng.uniform(0.5, 2.0, n - 1) if weighted else np.ones(n - 1)
    return SparseGraph.from_edges(
        n,
        np.concatenate([ei, order[:-1]]),
        np.concatenate([ej, order[1:]]),
        np.concatenate([ew, path_w]),
    )


def dense_normalized_adjacency(g: SparseGraph) -> np.ndarray:
    op = normalized_operator(g)
    isd = op.inv_sqrt_deg
    return isd[:, None] * g.to_csr().toarray() * isd[None, :]


def dense_normalized_laplacian(g: SparseGraph) -> np.ndarray:
    return np.eye(g.n) - dense_normalized_adjacency(g)


def brute_force_neighbors(points: np.ndarray, k: int) -> np.ndarray:
    """All-pairs exact kNN oracle: full distance matrix + stable lexsort,
    ties broken by smaller id."""
    n = points.shape[0]
    ids = np.arange(n)
    out = np.empty((n, k), dtype=np.int64)
    for i in range(n):
        d2 = np.sum((points - points[i]) ** 2, axis=1)
        d2[i] = np.inf
        out[i] = np.lexsort((ids, d2))[:k]
    return out


def triangle_graph() -> SparseGraph:
    return SparseGraph.from_edges(3, [0, 0, 1], [1, 2, 2])


def path_graph(n) -> SparseGraph:
    return SparseGraph.from_edges(n, np.arange(n - 1), np.arange(1, n))
