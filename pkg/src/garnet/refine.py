"""Edge pruning on the base graph driven by the likelihood gradient of an
attractive Gaussian Markov random field whose precision matrix is the graph
Laplacian plus I/sigma^2.

Full mode scores each base edge by the spectral embedding distortion
  s_ij = ||U_i - U_j||^2 / ||V_i - V_j||^2,
where U comes from the base graph's own Laplacian eigenpairs reweighted by
1/sqrt(lambda_k + 1/sigma^2); edges with s below the threshold are pruned.
Simplified mode scores d_ij = ||V_i - V_j||^2 directly with the opposite
polarity (large distance means prunable). A dense log-likelihood oracle and
its analytic per-edge gradient are included for verification at small n.
"""

import logging
import warnings
from dataclasses import dataclass

import numpy as np
import scipy.linalg
from scipy.sparse.linalg import ArpackError, ArpackNoConvergence, LinearOperator, eigsh

from . import _kernels
from ._rng import start_vector
from .errors import (
    ConfigError,
    DenseLimitExceeded,
    DimensionMismatch,
    EmptyResultWarning,
    NoConvergence,
    NotPositiveDefinite,
    RankTooLarge,
)
from .graph import SparseGraph
from .spectral import BASE_GRAPH_U, DENSE_LIMIT, EmbeddingMatrix, _fix_signs

log = logging.getLogger(__name__)

FULL = "full"
SIMPLIFIED = "simplified"


@dataclass
class RefineConfig:
    gamma: float | None = None  # pruning threshold; resolve percentile first
    mode: str = SIMPLIFIED
    sigma_sq: float = np.inf
    r_base: int | None = None  # base-graph eigenpairs (full mode); defaults to V's r
    tol: float = 1e-8
    seed: int = 0

    def __post_init__(self):
        if self.mode not in (FULL, SIMPLIFIED):
            raise ConfigError(f"unknown refine mode {self.mode!r}")
        if self.gamma is not None and not self.gamma >= 0:
            raise ConfigError(f"gamma must be nonnegative, got {self.gamma}")
        if not self.sigma_sq > 0:
            raise ConfigError(f"sigma_sq must be positive or inf, got {self.sigma_sq}")


@dataclass(frozen=True)
class EdgeScore:
    i: int
    j: int
    distortion: float


class EdgeScores:
    """Per-edge scores aligned with the base graph's (i < j) edge order."""

    def __init__(self, ei, ej, score):
        self.ei = np.asarray(ei, dtype=np.int64)
        self.ej = np.asarray(ej, dtype=np.int64)
        self.score = np.asarray(score, dtype=np.float64)

    def __len__(self):
        return self.score.shape[0]

    def __getitem__(self, t) -> EdgeScore:
        return EdgeScore(int(self.ei[t]), int(self.ej[t]), float(self.score[t]))

    def __iter__(self):
        for t in range(len(self)):
            yield self[t]


def combinatorial_laplacian_eigenpairs(g: SparseGraph, r: int, tol: float = 1e-8,
                                       max_iter: int | None = None, seed: int = 0):
    """Smallest r eigenpairs of L = D - A via Lanczos on the shifted operator
    cI - L (c above the spectrum), matrix-free."""
    n = g.n
    if not 1 <= r <= n - 1:
        raise RankTooLarge(f"need 1 <= r <= n-1, got r={r} with n={n}")
    if max_iter is None:
        max_iter = 50 * r
    deg = g.degrees
    c = 2.0 * float(deg.max()) if deg.size else 1.0
    if c <= 0:
        c = 1.0
    a = g.to_csr()

    def shifted(x):
        x = np.asarray(x, dtype=np.float64)
        return c * x - (deg * x - a.dot(x))

    op = LinearOperator((n, n), matvec=shifted, dtype=np.float64)
    v0 = start_vector(seed, "base-eigensolver", n)
    ncv = min(n, max(3 * r, 20))
    try:
        mu, vecs = eigsh(op, k=r, which="LA", v0=v0, tol=tol * 1e-1,
                         maxiter=max_iter, ncv=ncv)
    except (ArpackNoConvergence, ArpackError) as exc:
        raise NoConvergence(f"base-graph eigensolver failed: {exc}") from exc
    lam = c - mu
    order = np.argsort(lam, kind="stable")
    lam = lam[order]
    vecs = _fix_signs(vecs[:, order])
    np.clip(lam, 0.0, None, out=lam)
    scale = max(1.0, c)
    for k in range(r):
        res = np.linalg.norm(deg * vecs[:, k] - a.dot(vecs[:, k]) - lam[k] * vecs[:, k])
        if res > tol * scale:
            raise NoConvergence(f"base-graph residual {res:.3e} exceeds {tol * scale:g}")
    return lam, vecs


def base_graph_embedding(g_base: SparseGraph, r_base: int, sigma_sq: float = np.inf,
                         tol: float = 1e-8, seed: int = 0) -> EmbeddingMatrix:
    """Base-graph embedding U: column k is u_k / sqrt(lambda_k + 1/sigma_sq).

    With sigma_sq infinite the weight is 1/sqrt(lambda_k), so zero eigenvalues
    are excluded: their eigenvectors are constant per connected component and
    contribute nothing to any intra-component edge difference.
    """
    lam, vecs = combinatorial_laplacian_eigenpairs(g_base, r_base, tol=tol, seed=seed)
    if np.isinf(sigma_sq):
        zero_tol = 1e-8 * max(1.0, float(g_base.degrees.max()) if g_base.num_edges else 1.0)
        keep = lam > zero_tol
        dropped = int((~keep).sum())
        if dropped:
            log.info("dropping %d zero-eigenvalue column(s) from base embedding", dropped)
        lam, vecs = lam[keep], vecs[:, keep]
        denom = np.sqrt(lam)
    else:
        denom = np.sqrt(lam + 1.0 / sigma_sq)
    return EmbeddingMatrix(data=vecs / denom[None, :] if lam.size else vecs[:, :0],
                           source=BASE_GRAPH_U)


def _check_rows(g_base: SparseGraph, emb: EmbeddingMatrix):
    if emb.n != g_base.n:
        raise DimensionMismatch(f"embedding rows {emb.n} != graph nodes {g_base.n}")


def score_edges_simplified(g_base: SparseGraph, v_emb: EmbeddingMatrix) -> EdgeScores:
    """d_ij = ||V_i - V_j||^2 per base edge; larger means less critical."""
    _check_rows(g_base, v_emb)
    ei, ej, _ = g_base.edge_arrays()
    return EdgeScores(ei, ej, _kernels.edge_sqdist(v_emb.data, ei, ej))


def score_edges_full(g_base: SparseGraph, v_emb: EmbeddingMatrix, cfg: RefineConfig,
                     u_emb: EmbeddingMatrix | None = None) -> EdgeScores:
    """Spectral embedding distortion s_ij per base edge.

    Edges whose adversarial-embedding distance is zero score +inf: the
    embedding sees the endpoints as identical, which marks the edge as
    maximally critical, so it is never pruned.
    """
    _check_rows(g_base, v_emb)
    ei, ej, _ = g_base.edge_arrays()
    if ei.size == 0:
        return EdgeScores(ei, ej, np.empty(0))
    if u_emb is None:
        r_base = cfg.r_base if cfg.r_base is not None else v_emb.r
        u_emb = base_graph_embedding(g_base, r_base, sigma_sq=cfg.sigma_sq,
                                     tol=cfg.tol, seed=cfg.seed)
    _check_rows(g_base, u_emb)
    dv = _kernels.edge_sqdist(v_emb.data, ei, ej)
    if u_emb.r == 0:
        du = np.zeros_like(dv)
    else:
        du = _kernels.edge_sqdist(u_emb.data, ei, ej)
    # distances at round-off level (identical rows up to float noise) count
    # as zero denominators
    row_sq = np.sum(v_emb.data * v_emb.data, axis=1)
    zero = dv <= 1e-24 * np.maximum(row_sq[ei] + row_sq[ej], 1e-300)
    s = np.where(zero, np.inf, du / np.where(zero, 1.0, dv))
    return EdgeScores(ei, ej, s)


def prune_edges(g_base: SparseGraph, scores: EdgeScores, cfg: RefineConfig) -> SparseGraph:
    """Keep edges with distortion >= gamma (full mode) or distance <= gamma
    (simplified mode); never introduces edges."""
    if cfg.gamma is None:
        raise ConfigError("gamma is unset; resolve a percentile into a value first")
    ei, ej, ew = g_base.edge_arrays()
    if len(scores) != ei.size or not (np.array_equal(scores.ei, ei) and np.array_equal(scores.ej, ej)):
        raise ConfigError("scores do not cover the base graph's edge set")
    if cfg.mode == FULL:
        keep = scores.score >= cfg.gamma
    else:
        keep = scores.score <= cfg.gamma
    if ei.size and not keep.any():
        warnings.warn("all edges pruned; refined graph is empty", EmptyResultWarning)
    return SparseGraph.from_edges(g_base.n, ei[keep], ej[keep], ew[keep])


def resolve_gamma_percentile(scores: EdgeScores, percentile: float) -> float:
    """Absolute threshold at the given percentile of the score distribution.

    In full mode this prunes roughly the given percentage of lowest-distortion
    edges; in simplified mode it keeps that percentage of shortest edges.
    """
    if not 0 <= percentile <= 100:
        raise ConfigError(f"percentile must be in [0, 100], got {percentile}")
    if len(scores) == 0:
        raise ConfigError("cannot take a percentile of an empty score set")
    finite = scores.score[np.isfinite(scores.score)]
    if finite.size == 0:
        raise ConfigError("all scores are infinite; percentile undefined")
    return float(np.percentile(finite, percentile))


def dump_scores_csv(scores: EdgeScores, path) -> None:
    """CSV "i,j,score" sorted ascending by score (ties by edge)."""
    order = np.lexsort((scores.ej, scores.ei, scores.score))
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("i,j,score\n")
        for t in order:
            fh.write(f"{scores.ei[t]},{scores.ej[t]},{scores.score[t]:.17g}\n")


# ---------------------------------------------------------------------------
# dense oracle
# ---------------------------------------------------------------------------


def dense_laplacian(g: SparseGraph) -> np.ndarray:
    lap = -g.to_csr().toarray()
    lap[np.diag_indices_from(lap)] = g.degrees
    return lap


def _as_dense_laplacian(g_or_lap, dense_limit):
    if isinstance(g_or_lap, SparseGraph):
        if g_or_lap.n > dense_limit:
            raise DenseLimitExceeded(f"n={g_or_lap.n} exceeds dense limit {dense_limit}")
        return dense_laplacian(g_or_lap)
    lap = np.asarray(g_or_lap, dtype=np.float64)
    if lap.shape[0] > dense_limit:
        raise DenseLimitExceeded(f"n={lap.shape[0]} exceeds dense limit {dense_limit}")
    return lap


def log_likelihood_oracle(g_or_lap, v_emb, sigma_sq: float,
                          dense_limit: int = DENSE_LIMIT) -> float:
    """Exact dense evaluation of log det(Theta) - tr(V V^T Theta) / r with
    Theta = L + I/sigma_sq. Requires finite sigma_sq so Theta is positive
    definite; test-oracle only."""
    if not np.isfinite(sigma_sq) or sigma_sq <= 0:
        raise NotPositiveDefinite("oracle needs finite positive sigma_sq")
    lap = _as_dense_laplacian(g_or_lap, dense_limit)
    theta = lap + np.eye(lap.shape[0]) / sigma_sq
    data = v_emb.data if isinstance(v_emb, EmbeddingMatrix) else np.asarray(v_emb, dtype=np.float64)
    if data.shape[0] != theta.shape[0]:
        raise DimensionMismatch(f"embedding rows {data.shape[0]} != nodes {theta.shape[0]}")
    try:
        chol = np.linalg.cholesky(theta)
    except np.linalg.LinAlgError as exc:
        raise NotPositiveDefinite(f"precision matrix is not positive definite: {exc}") from exc
    logdet = 2.0 * float(np.sum(np.log(np.diag(chol))))
    trace_term = float(np.sum(data * (theta @ data))) / data.shape[1]
    return logdet - trace_term


def pair_gradient_dense(g_or_lap, v_emb, sigma_sq: float, i: int, j: int,
                        dense_limit: int = DENSE_LIMIT) -> float:
    """Analytic d/dw_ij of the dense log-likelihood:
    e_ij^T Theta^-1 e_ij - ||V^T e_ij||^2 / r."""
    if not np.isfinite(sigma_sq) or sigma_sq <= 0:
        raise NotPositiveDefinite("gradient oracle needs finite positive sigma_sq")
    lap = _as_dense_laplacian(g_or_lap, dense_limit)
    n = lap.shape[0]
    theta = lap + np.eye(n) / sigma_sq
    data = v_emb.data if isinstance(v_emb, EmbeddingMatrix) else np.asarray(v_emb, dtype=np.float64)
    e = np.zeros(n)
    e[i] = 1.0
    e[j] = -1.0
    try:
        cho = scipy.linalg.cho_factor(theta)
    except scipy.linalg.LinAlgError as exc:
        raise NotPositiveDefinite(f"precision matrix is not positive definite: {exc}") from exc
    first = float(e @ scipy.linalg.cho_solve(cho, e))
    second = float(np.sum((data.T @ e) ** 2)) / data.shape[1]
    return first - second
