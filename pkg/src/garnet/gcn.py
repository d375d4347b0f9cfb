"""Minimal two-layer GCN (numpy, full batch) and neighborhood recovery
metrics. This is the evaluation yardstick for purification quality, not a
general-purpose GNN library."""

import json
from dataclasses import dataclass, field

import numpy as np
import scipy.sparse as sp

from ._rng import substream
from .errors import (
    ConfigError,
    DimensionMismatch,
    MaskEmpty,
    NonFiniteLoss,
    ProbeOutOfRange,
)
from .graph import SparseGraph


@dataclass
class LabeledDataset:
    features: np.ndarray  # (n, d)
    labels: np.ndarray  # (n,) int in [0, c)
    train_mask: np.ndarray
    val_mask: np.ndarray
    test_mask: np.ndarray

    def __post_init__(self):
        self.features = np.asarray(self.features, dtype=np.float64)
        self.labels = np.asarray(self.labels, dtype=np.int64)
        n = self.labels.shape[0]
        if self.features.ndim != 2 or self.features.shape[0] != n or self.features.shape[1] < 1:
            raise DimensionMismatch("features must be (n, d) with d >= 1")
        for name in ("train_mask", "val_mask", "test_mask"):
            m = np.asarray(getattr(self, name), dtype=bool)
            if m.shape != (n,):
                raise DimensionMismatch(f"{name} must have length {n}")
            setattr(self, name, m)
        if np.any(self.train_mask & self.val_mask) or np.any(self.train_mask & self.test_mask) \
                or np.any(self.val_mask & self.test_mask):
            raise ConfigError("train/val/test masks overlap")
        if self.labels.min() < 0:
            raise ConfigError("labels must be nonnegative")
        train_classes = set(np.unique(self.labels[self.train_mask]).tolist())
        all_classes = set(np.unique(self.labels).tolist())
        if train_classes != all_classes:
            raise ConfigError("every class must appear in the training mask")

    @property
    def n(self):
        return self.labels.shape[0]

    @property
    def num_classes(self):
        return int(self.labels.max()) + 1

    def mask(self, which):
        if isinstance(which, str):
            try:
                return getattr(self, f"{which}_mask")
            except AttributeError:
                raise ConfigError(f"unknown split {which!r}") from None
        return np.asarray(which, dtype=bool)


@dataclass
class GcnHyper:
    hidden: int = 64
    lr: float = 0.01
    weight_decay: float = 5e-4
    dropout: float = 0.5
    epochs: int = 200
    patience: int = 30
    seed: int = 0


@dataclass
class GcnParams:
    W1: np.ndarray
    W2: np.ndarray
    hyper: GcnHyper
    train_losses: list = field(default_factory=list, repr=False)
    best_epoch: int = -1

    @property
    def h(self):
        return self.W1.shape[1]


def renormalized_propagation(g):
    """Self-loop renormalized propagation D~^-1/2 (A + I) D~^-1/2.

    Accepts a SparseGraph (sparse result) or a dense adjacency (dense result,
    as produced by the low-rank baseline; rows with nonpositive total weight
    get zeroed scaling)."""
    if isinstance(g, SparseGraph):
        a = g.to_csr() + sp.eye(g.n, format="csr")
        deg = np.asarray(a.sum(axis=1)).ravel()
        inv_sqrt = np.zeros_like(deg)
        pos = deg > 0
        inv_sqrt[pos] = 1.0 / np.sqrt(deg[pos])
        d = sp.diags(inv_sqrt)
        return (d @ a @ d).tocsr()
    a = np.asarray(g, dtype=np.float64) + np.eye(g.shape[0])
    deg = a.sum(axis=1)
    inv_sqrt = np.zeros_like(deg)
    pos = deg > 1e-12
    inv_sqrt[pos] = 1.0 / np.sqrt(deg[pos])
    return a * inv_sqrt[:, None] * inv_sqrt[None, :]


def _softmax_rows(z):
    z = z - z.max(axis=1, keepdims=True)
    e = np.exp(z)
    return e / e.sum(axis=1, keepdims=True)


def loss_and_grads(W1, W2, prop, X, y, train_mask, weight_decay, drop_mask=None):
    """Cross-entropy on the train mask plus L2 penalty; returns
    (loss, gW1, gW2). drop_mask is the (n, h) inverted-dropout multiplier or
    None for the deterministic path."""
    a1 = prop @ X
    z1 = a1 @ W1
    h1 = np.maximum(z1, 0.0)
    h1d = h1 if drop_mask is None else h1 * drop_mask
    a2 = prop @ h1d
    z2 = a2 @ W2

    m = int(train_mask.sum())
    if m == 0:
        raise MaskEmpty("training mask is empty")
    zs = z2 - z2.max(axis=1, keepdims=True)
    logp = zs - np.log(np.exp(zs).sum(axis=1, keepdims=True))
    data_loss = -float(logp[train_mask, y[train_mask]].mean())
    reg = 0.5 * weight_decay * (float(np.sum(W1 * W1)) + float(np.sum(W2 * W2)))
    loss = data_loss + reg

    g2 = np.exp(logp)
    g2[np.arange(y.shape[0]), y] -= 1.0
    g2 *= train_mask[:, None] / m
    gW2 = a2.T @ g2 + weight_decay * W2
    ga2 = g2 @ W2.T
    gh1d = prop @ ga2  # propagation is symmetric
    gh1 = gh1d if drop_mask is None else gh1d * drop_mask
    gz1 = gh1 * (z1 > 0.0)
    gW1 = a1.T @ gz1 + weight_decay * W1
    return loss, gW1, gW2


def _predict(W1, W2, prop, X):
    h1 = np.maximum((prop @ X) @ W1, 0.0)
    return (prop @ h1) @ W2


def _glorot(rng, fan_in, fan_out):
    limit = np.sqrt(6.0 / (fan_in + fan_out))
    return rng.uniform(-limit, limit, size=(fan_in, fan_out))


def train_gcn(g, data: LabeledDataset, hyper: GcnHyper | None = None) -> GcnParams:
    """Full-batch training with Adam, early-stopped on validation accuracy
    (best parameters restored). Deterministic for a given hyper.seed."""
    hyper = hyper or GcnHyper()
    if isinstance(g, SparseGraph) and g.n != data.n:
        raise DimensionMismatch(f"graph has {g.n} nodes, dataset has {data.n}")
    if not data.train_mask.any():
        raise MaskEmpty("training mask is empty")
    prop = renormalized_propagation(g)
    X, y = data.features, data.labels
    c = data.num_classes
    init = substream(hyper.seed, "gcn-init")
    drop_rng = substream(hyper.seed, "dropout")
    W1 = _glorot(init, X.shape[1], hyper.hidden)
    W2 = _glorot(init, hyper.hidden, c)

    m1 = np.zeros_like(W1)
    v1 = np.zeros_like(W1)
    m2 = np.zeros_like(W2)
    v2 = np.zeros_like(W2)
    beta1, beta2, eps = 0.9, 0.999, 1e-8

    has_val = bool(data.val_mask.any())
    best_val = -1.0
    best = (W1.copy(), W2.copy())
    best_epoch = 0
    losses = []
    for epoch in range(1, hyper.epochs + 1):
        if hyper.dropout > 0:
            keep = 1.0 - hyper.dropout
            drop_mask = (drop_rng.random((data.n, hyper.hidden)) < keep) / keep
        else:
            drop_mask = None
        loss, gW1, gW2 = loss_and_grads(W1, W2, prop, X, y, data.train_mask,
                                        hyper.weight_decay, drop_mask)
        if not np.isfinite(loss):
            raise NonFiniteLoss(f"loss diverged at epoch {epoch}")
        losses.append(loss)
        for wmat, grad, mm, vv in ((W1, gW1, m1, v1), (W2, gW2, m2, v2)):
            mm *= beta1
            mm += (1 - beta1) * grad
            vv *= beta2
            vv += (1 - beta2) * grad * grad
            mhat = mm / (1 - beta1 ** epoch)
            vhat = vv / (1 - beta2 ** epoch)
            wmat -= hyper.lr * mhat / (np.sqrt(vhat) + eps)
        if not (np.isfinite(W1).all() and np.isfinite(W2).all()):
            raise NonFiniteLoss(f"parameters diverged at epoch {epoch}")
        if has_val:
            pred = _predict(W1, W2, prop, X).argmax(axis=1)
            val_acc = float((pred[data.val_mask] == y[data.val_mask]).mean())
            if val_acc > best_val:
                best_val = val_acc
                best = (W1.copy(), W2.copy())
                best_epoch = epoch
            elif epoch - best_epoch > hyper.patience:
                break
    if not has_val:
        best = (W1.copy(), W2.copy())
        best_epoch = len(losses)
    return GcnParams(W1=best[0], W2=best[1], hyper=hyper,
                     train_losses=losses, best_epoch=best_epoch)


def evaluate(params: GcnParams, g, data: LabeledDataset, mask="test") -> float:
    """Fraction of mask nodes whose argmax prediction matches the label."""
    m = data.mask(mask)
    if not m.any():
        raise MaskEmpty("evaluation mask is empty")
    prop = renormalized_propagation(g)
    pred = _predict(params.W1, params.W2, prop, data.features).argmax(axis=1)
    return float((pred[m] == data.labels[m]).mean())


# ---------------------------------------------------------------------------
# neighborhood recovery metrics
# ---------------------------------------------------------------------------


def k_hop_set(g: SparseGraph, node: int, hops: int) -> np.ndarray:
    """Boolean mask of nodes within `hops` hops of `node`, excluding it."""
    reached = np.zeros(g.n, dtype=bool)
    frontier = np.array([node], dtype=np.int64)
    reached[node] = True
    for _ in range(hops):
        if frontier.size == 0:
            break
        nxt = []
        for u in frontier:
            nxt.append(g.neighbors(u))
        cand = np.unique(np.concatenate(nxt)) if nxt else np.empty(0, np.int64)
        frontier = cand[~reached[cand]]
        reached[frontier] = True
    reached[node] = False
    return reached


def recovery_metrics(g_clean: SparseGraph, g_purified: SparseGraph, probe_nodes,
                     hops: int = 2):
    """Mean recall and precision of `hops`-hop neighborhoods in the purified
    graph against the clean graph, averaged over probe nodes. Empty reference
    or candidate neighborhoods contribute 0 to the respective metric."""
    if g_clean.n != g_purified.n:
        raise ConfigError(f"node counts differ: {g_clean.n} vs {g_purified.n}")
    probes = list(probe_nodes)
    if not probes:
        raise ConfigError("need at least one probe node")
    recalls, precisions = [], []
    for p in probes:
        if not 0 <= p < g_clean.n:
            raise ProbeOutOfRange(f"probe {p} out of range for n={g_clean.n}")
        n_clean = k_hop_set(g_clean, p, hops)
        n_pur = k_hop_set(g_purified, p, hops)
        inter = int(np.sum(n_clean & n_pur))
        nc = int(n_clean.sum())
        ng = int(n_pur.sum())
        recalls.append(inter / nc if nc else 0.0)
        precisions.append(inter / ng if ng else 0.0)
    return float(np.mean(recalls)), float(np.mean(precisions))


# ---------------------------------------------------------------------------
# dataset file helpers
# ---------------------------------------------------------------------------


def load_features(path) -> np.ndarray:
    path = str(path)
    if path.endswith(".npy"):
        return np.load(path).astype(np.float64)
    return np.loadtxt(path, dtype=np.float64, ndmin=2)


def load_split(path, n: int):
    with open(path, "r", encoding="utf-8") as fh:
        raw = json.load(fh)
    masks = []
    for key in ("train", "val", "test"):
        if key not in raw:
            raise ConfigError(f"{path}: missing split {key!r}")
        m = np.zeros(n, dtype=bool)
        ids = np.asarray(raw[key], dtype=np.int64)
        if ids.size and (ids.min() < 0 or ids.max() >= n):
            raise ConfigError(f"{path}: split {key!r} has out-of-range ids")
        m[ids] = True
        masks.append(m)
    return tuple(masks)


def save_split(train, val, test, path) -> None:
    payload = {
        "train": np.where(train)[0].tolist(),
        "val": np.where(val)[0].tolist(),
        "test": np.where(test)[0].tolist(),
    }
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(payload, fh)
        fh.write("\n")
