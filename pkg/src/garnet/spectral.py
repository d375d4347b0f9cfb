"""Iterative extreme eigenpairs of the normalized Laplacian, the weighted
spectral embedding built from them, and the dense low-rank reconstruction
used by the TSVD baseline."""

import logging
from dataclasses import dataclass

import numpy as np
from scipy.sparse.linalg import ArpackError, ArpackNoConvergence, LinearOperator, eigsh

from ._rng import start_vector
from .errors import (
    ConfigError,
    DenseLimitExceeded,
    DimensionMismatch,
    NoConvergence,
    RankTooLarge,
)
from .graph import ADJACENCY, LAPLACIAN, NormalizedOperator

log = logging.getLogger(__name__)

DENSE_LIMIT = 5000

ADVERSARIAL_V = "adversarial"
BASE_GRAPH_U = "base"


@dataclass(frozen=True)
class SpectralPair:
    """Smallest eigenvalues of a normalized Laplacian with orthonormal
    eigenvectors, ascending and sign-fixed."""

    eigenvalues: np.ndarray  # (r,)
    eigenvectors: np.ndarray  # (n, r)
    residual_norms: np.ndarray  # (r,)

    @property
    def r(self):
        return self.eigenvalues.shape[0]


@dataclass(frozen=True)
class EmbeddingMatrix:
    """Per-node embedding rows; source tags which construction produced it."""

    data: np.ndarray  # (n, r)
    source: str = ADVERSARIAL_V

    @property
    def n(self):
        return self.data.shape[0]

    @property
    def r(self):
        return self.data.shape[1]


def _fix_signs(vecs: np.ndarray) -> np.ndarray:
    """Flip each column so its largest-magnitude entry is positive (ties:
    lowest index wins via argmax)."""
    out = vecs.copy()
    for k in range(out.shape[1]):
        j = int(np.argmax(np.abs(out[:, k])))
        if out[j, k] < 0:
            out[:, k] = -out[:, k]
    return out


def top_r_eigenpairs(op: NormalizedOperator, r: int, tol: float = 1e-8,
                     max_iter: int | None = None, seed: int = 0) -> SpectralPair:
    """The r smallest eigenpairs of L_norm via implicitly restarted Lanczos
    on the matrix-free normalized adjacency (largest algebraic eigenvalues of
    A_norm are the smallest of L_norm = I - A_norm). Never forms a dense
    matrix; deterministic for a given seed via the start vector.
    """
    if op.kind != LAPLACIAN:
        raise ConfigError("eigensolver expects a normalized-Laplacian operator")
    n = op.n
    if not 1 <= r <= n - 1:
        raise RankTooLarge(f"need 1 <= r <= n-1, got r={r} with n={n}")
    if max_iter is None:
        max_iter = 50 * r
    v0 = start_vector(seed, "eigensolver", n)
    a_op = LinearOperator((n, n), matvec=op.adjacency_matvec, dtype=np.float64)
    ncv = min(n, max(3 * r, 20))
    try:
        # ARPACK's tol is a looser internal criterion; the explicit residual
        # check below enforces the contract.
        mu, vecs = eigsh(a_op, k=r, which="LA", v0=v0, tol=tol * 1e-1,
                         maxiter=max_iter, ncv=ncv)
    except ArpackNoConvergence as exc:
        raise NoConvergence(
            f"eigensolver converged {len(exc.eigenvalues)}/{r} pairs in {max_iter} iterations",
            residual_norms=None,
        ) from exc
    except ArpackError as exc:
        raise NoConvergence(f"eigensolver failed: {exc}") from exc

    lam = 1.0 - mu
    order = np.argsort(lam, kind="stable")
    lam = lam[order]
    vecs = vecs[:, order]
    # Lanczos round-off can put the bottom eigenvalue a hair below 0.
    tiny = lam > -1e-9
    if not tiny.all():
        raise NoConvergence(f"spurious negative eigenvalue {lam.min():.3e}")
    np.clip(lam, 0.0, None, out=lam)
    vecs = _fix_signs(vecs)

    res = np.empty(r)
    for k in range(r):
        res[k] = np.linalg.norm(op.matvec(vecs[:, k]) - lam[k] * vecs[:, k])
    if np.any(res > tol):
        raise NoConvergence(
            f"residual norms exceed tol={tol:g} (worst {res.max():.3e})",
            residual_norms=res,
        )
    if lam[-1] > 1.0:
        log.info("largest retained eigenvalue %.6f exceeds 1; embedding weights use |1-lambda|", lam[-1])
    return SpectralPair(eigenvalues=lam, eigenvectors=vecs, residual_norms=res)


def choose_r(num_classes: int, n: int, override: int | None = None) -> int:
    """Embedding rank: ten per class, clamped to the solver's n-2 headroom."""
    if override is not None:
        return int(override)
    if num_classes < 1 or n < 2:
        raise ConfigError("need num_classes >= 1 and n >= 2")
    return max(1, min(10 * num_classes, n - 2))


def weighted_embedding(sp: SpectralPair) -> EmbeddingMatrix:
    """Column k of the embedding is sqrt(|1 - lambda_k|) * v_k."""
    scale = np.sqrt(np.abs(1.0 - sp.eigenvalues))
    return EmbeddingMatrix(data=sp.eigenvectors * scale[None, :], source=ADVERSARIAL_V)


def low_rank_reconstruct(emb: EmbeddingMatrix, dense_limit: int = DENSE_LIMIT) -> np.ndarray:
    """Dense rank-r reconstruction V V^T (TSVD-baseline comparator)."""
    n = emb.n
    if n > dense_limit:
        raise DenseLimitExceeded(f"n={n} exceeds dense limit {dense_limit}")
    return emb.data @ emb.data.T


def embedding_with_features(emb: EmbeddingMatrix, features: np.ndarray,
                            feature_scale: float = 1.0) -> np.ndarray:
    """[V | feature_scale * row-normalized X]; zero feature rows stay zero."""
    x = np.asarray(features, dtype=np.float64)
    if x.ndim != 2 or x.shape[0] != emb.n:
        raise DimensionMismatch(
            f"feature rows {x.shape[0] if x.ndim == 2 else '?'} != embedding rows {emb.n}")
    norms = np.linalg.norm(x, axis=1)
    scaled = np.zeros_like(x)
    nz = norms > 0
    scaled[nz] = x[nz] / norms[nz, None] * feature_scale
    return np.hstack([emb.data, scaled])


def embedding_edge_energy(sp: SpectralPair, op: NormalizedOperator) -> float:
    """Sum over embedding columns of |1-lambda_k| times the normalized-Laplacian
    quadratic form of v_k: the total degree-normalized edge stretch of the
    embedding. Bounded by 0.25 r whenever lambda_r <= 1."""
    total = 0.0
    for k in range(sp.r):
        total += abs(1.0 - sp.eigenvalues[k]) * op.quad_form(sp.eigenvectors[:, k])
    return total


def dump_embedding_csv(emb, path) -> None:
    """n x r CSV with 17-significant-digit decimals."""
    data = emb.data if isinstance(emb, EmbeddingMatrix) else np.asarray(emb)
    np.savetxt(path, data, fmt="%.17g", delimiter=",")
