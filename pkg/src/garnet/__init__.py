"""Reduced-rank graph topology learning: purify an adversarially perturbed
graph via weighted spectral embedding, kNN base-graph construction, and
likelihood-gradient edge pruning, then measure the effect with a small GCN."""

from .attack import (
    AttackConfig,
    attack,
    gaussian_features,
    generate_sbm,
    random_split,
)
from .gcn import (
    GcnHyper,
    GcnParams,
    LabeledDataset,
    evaluate,
    recovery_metrics,
    train_gcn,
)
from .graph import (
    ADJACENCY,
    LAPLACIAN,
    NormalizedOperator,
    SparseGraph,
    homophily_score,
    load_edge_list,
    load_labels,
    normalized_operator,
    write_edge_list,
)
from .knn import KnnConfig, build_knn_graph, knn_neighbors, knn_recall
from .refine import (
    EdgeScore,
    EdgeScores,
    RefineConfig,
    base_graph_embedding,
    log_likelihood_oracle,
    pair_gradient_dense,
    prune_edges,
    resolve_gamma_percentile,
    score_edges_full,
    score_edges_simplified,
)
from .spectral import (
    EmbeddingMatrix,
    SpectralPair,
    choose_r,
    embedding_edge_energy,
    embedding_with_features,
    low_rank_reconstruct,
    top_r_eigenpairs,
    weighted_embedding,
)

__version__ = "0.1.0"

__all__ = [
    "ADJACENCY",
    "LAPLACIAN",
    "AttackConfig",
    "EdgeScore",
    "EdgeScores",
    "EmbeddingMatrix",
    "GcnHyper",
    "GcnParams",
    "KnnConfig",
    "LabeledDataset",
    "NormalizedOperator",
    "RefineConfig",
    "SparseGraph",
    "SpectralPair",
    "attack",
    "base_graph_embedding",
    "build_knn_graph",
    "choose_r",
    "embedding_edge_energy",
    "embedding_with_features",
    "evaluate",
    "gaussian_features",
    "generate_sbm",
    "homophily_score",
    "knn_neighbors",
    "knn_recall",
    "load_edge_list",
    "load_labels",
    "log_likelihood_oracle",
    "low_rank_reconstruct",
    "normalized_operator",
    "pair_gradient_dense",
    "prune_edges",
    "random_split",
    "recovery_metrics",
    "resolve_gamma_percentile",
    "score_edges_full",
    "score_edges_simplified",
    "top_r_eigenpairs",
    "train_gcn",
    "weighted_embedding",
    "write_edge_list",
]
