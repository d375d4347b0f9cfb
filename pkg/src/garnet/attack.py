"""Label-aware structural attack simulation and synthetic SBM datasets.

The DICE-style attack ("delete internally, connect externally") is a
training-free stand-in for gradient-based poisoning: each move either removes
a random same-label edge or inserts a random absent cross-label edge.
"""

from dataclasses import dataclass, field

import numpy as np

from ._rng import substream
from .errors import BudgetInfeasible, ConfigError, InvalidProbability
from .graph import SparseGraph

DICE_GLOBAL = "dice_global"
RANDOM_FLIP = "random_flip"
TARGETED_DICE = "targeted_dice"


@dataclass
class AttackConfig:
    kind: str = DICE_GLOBAL
    ptb_ratio: float = 0.0  # fraction of |E| to perturb
    targets: list[int] | None = None
    perturbations_per_target: int = 0
    seed: int = 0

    def __post_init__(self):
        if self.kind not in (DICE_GLOBAL, RANDOM_FLIP, TARGETED_DICE):
            raise ConfigError(f"unknown attack kind {self.kind!r}")
        if not 0.0 <= self.ptb_ratio <= 1.0:
            raise ConfigError(f"ptb_ratio must be in [0, 1], got {self.ptb_ratio}")
        if self.kind == TARGETED_DICE and not self.targets:
            raise ConfigError("targeted attack requires a nonempty target list")


class _EdgeState:
    """Mutable unordered-pair edge set with per-category sampling support."""

    def __init__(self, g: SparseGraph):
        self.n = g.n
        ei, ej, ew = g.edge_arrays()
        self.weights = {(int(a), int(b)): float(w) for a, b, w in zip(ei, ej, ew)}

    def __contains__(self, pair):
        return pair in self.weights

    def insert(self, i, j):
        self.weights[(min(i, j), max(i, j))] = 1.0

    def delete(self, i, j):
        del self.weights[(min(i, j), max(i, j))]

    def to_graph(self) -> SparseGraph:
        if not self.weights:
            return SparseGraph.empty(self.n)
        pairs = np.array(sorted(self.weights), dtype=np.int64)
        w = np.array([self.weights[(int(a), int(b))] for a, b in pairs])
        return SparseGraph.from_edges(self.n, pairs[:, 0], pairs[:, 1], w)


def _sample_absent_inter(rng, state, labels, absent_count, max_tries=2000):
    """Uniform absent cross-label pair, by rejection with an exact fallback."""
    n = state.n
    for _ in range(max_tries):
        i = int(rng.integers(n))
        j = int(rng.integers(n))
        if i == j or labels[i] == labels[j]:
            continue
        pair = (min(i, j), max(i, j))
        if pair not in state:
            return pair
    # dense regime: enumerate and index directly
    absent = [
        (i, j)
        for i in range(n)
        for j in range(i + 1, n)
        if labels[i] != labels[j] and (i, j) not in state
    ]
    assert len(absent) == absent_count
    return absent[int(rng.integers(len(absent)))]


def attack(g_clean: SparseGraph, labels, cfg: AttackConfig):
    """Perturb the graph per cfg; returns (attacked graph, move log).

    The move log is a list of ("del"|"ins", i, j) tuples with i < j, in the
    order the moves were applied. Deterministic given cfg.seed.
    """
    labels = np.asarray(labels)
    if labels.shape[0] != g_clean.n:
        raise ConfigError(f"expected {g_clean.n} labels, got {labels.shape[0]}")
    rng = substream(cfg.seed, "attack")
    state = _EdgeState(g_clean)
    moves: list[tuple[str, int, int]] = []

    if cfg.kind == TARGETED_DICE:
        for t in cfg.targets:
            if not 0 <= t < g_clean.n:
                raise ConfigError(f"target {t} out of range")
            _dice_target(rng, state, labels, t, cfg.perturbations_per_target, moves)
        return state.to_graph(), moves

    budget = int(round(cfg.ptb_ratio * g_clean.num_edges))
    if cfg.kind == RANDOM_FLIP:
        _random_flip(rng, state, budget, moves)
    else:
        _dice_global(rng, state, labels, budget, moves)
    return state.to_graph(), moves


def _dice_global(rng, state, labels, budget, moves):
    intra = [p for p in state.weights if labels[p[0]] == labels[p[1]]]
    intra_pos = {p: t for t, p in enumerate(intra)}
    classes, counts = np.unique(labels, return_counts=True)
    n = labels.shape[0]
    total_inter = (n * (n - 1) // 2 - int(np.sum(counts * (counts - 1) // 2)))
    inter_edges = len(state.weights) - len(intra)

    for _ in range(budget):
        can_delete = len(intra) > 0
        can_insert = (total_inter - inter_edges) > 0
        if not can_delete and not can_insert:
            raise BudgetInfeasible("no intra-class edge to delete and no absent inter-class pair to insert",
                                   moves_completed=len(moves))
        want_delete = bool(rng.integers(2)) if (can_delete and can_insert) else can_delete
        if want_delete:
            t = int(rng.integers(len(intra)))
            pair = intra[t]
            last = intra.pop()
            if last is not pair:
                intra[t] = last
                intra_pos[last] = t
            del intra_pos[pair]
            state.delete(*pair)
            moves.append(("del", pair[0], pair[1]))
        else:
            pair = _sample_absent_inter(rng, state, labels, total_inter - inter_edges)
            state.insert(*pair)
            inter_edges += 1
            moves.append(("ins", pair[0], pair[1]))


def _dice_target(rng, state, labels, target, per_target, moves):
    same = labels == labels[target]
    n = labels.shape[0]
    for _ in range(per_target):
        intra = [j for j in range(n)
                 if j != target and same[j] and (min(target, j), max(target, j)) in state]
        absent_inter = [j for j in range(n)
                        if not same[j] and (min(target, j), max(target, j)) not in state]
        if not intra and not absent_inter:
            raise BudgetInfeasible(f"no legal move incident to target {target}",
                                   moves_completed=len(moves))
        want_delete = bool(rng.integers(2)) if (intra and absent_inter) else bool(intra)
        if want_delete:
            j = intra[int(rng.integers(len(intra)))]
            state.delete(target, j)
            moves.append(("del", min(target, j), max(target, j)))
        else:
            j = absent_inter[int(rng.integers(len(absent_inter)))]
            state.insert(target, j)
            moves.append(("ins", min(target, j), max(target, j)))


def _random_flip(rng, state, budget, moves):
    n = state.n
    touched: set[tuple[int, int]] = set()
    total_pairs = n * (n - 1) // 2
    for _ in range(budget):
        if len(touched) >= total_pairs:
            raise BudgetInfeasible("every node pair already flipped", moves_completed=len(moves))
        while True:
            i = int(rng.integers(n))
            j = int(rng.integers(n))
            if i == j:
                continue
            pair = (min(i, j), max(i, j))
            if pair not in touched:
                break
        touched.add(pair)
        if pair in state:
            state.delete(*pair)
            moves.append(("del", pair[0], pair[1]))
        else:
            state.insert(*pair)
            moves.append(("ins", pair[0], pair[1]))


def write_move_log(moves, path) -> None:
    """CSV "op,i,j" in application order."""
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("op,i,j\n")
        for op, i, j in moves:
            fh.write(f"{op},{i},{j}\n")


# ---------------------------------------------------------------------------
# synthetic datasets
# ---------------------------------------------------------------------------


def _bernoulli_indices(rng, total: int, p: float) -> np.ndarray:
    """Indices of successes in `total` Bernoulli(p) trials, via geometric
    skip sampling (linear in the number of successes)."""
    if total <= 0 or p <= 0.0:
        return np.empty(0, dtype=np.int64)
    if p >= 1.0:
        return np.arange(total, dtype=np.int64)
    log_q = np.log1p(-p)
    out = []
    pos = -1
    chunk = max(64, int(total * p * 1.2) + 16)
    while pos < total - 1:
        u = rng.random(chunk)
        u[u == 0.0] = 0.5  # avoid log(0); probability-zero event
        skips = np.floor(np.log(u) / log_q).astype(np.int64) + 1
        steps = pos + np.cumsum(skips)
        out.append(steps[steps < total])
        pos = int(steps[-1])
    return np.concatenate(out) if out else np.empty(0, dtype=np.int64)


def _triangle_decode(idx: np.ndarray, m: int):
    """Invert idx = i*(2m-i-1)/2 + (j-i-1) for pairs 0 <= i < j < m."""
    t = idx.astype(np.float64)
    i = np.floor((2 * m - 1 - np.sqrt((2 * m - 1) ** 2 - 8 * t)) / 2).astype(np.int64)
    for _ in range(2):  # float rounding can be off by one
        base = i * (2 * m - i - 1) // 2
        i = np.where(base > idx, i - 1, i)
        base_next = (i + 1) * (2 * m - i - 2) // 2
        i = np.where(idx >= base_next, i + 1, i)
    base = i * (2 * m - i - 1) // 2
    j = idx - base + i + 1
    return i, j


def generate_sbm(n: int, blocks: int, p_in: float, p_out: float, seed: int = 0):
    """Equal-block stochastic block model; labels are block ids."""
    if n % blocks != 0:
        raise ConfigError(f"n={n} not divisible by blocks={blocks}")
    if not (0.0 <= p_out < p_in <= 1.0):
        raise InvalidProbability(f"need 0 <= p_out < p_in <= 1, got p_in={p_in} p_out={p_out}")
    rng = substream(seed, "sbm")
    m = n // blocks
    us, vs = [], []
    for a in range(blocks):
        off = a * m
        idx = _bernoulli_indices(rng, m * (m - 1) // 2, p_in)
        i, j = _triangle_decode(idx, m)
        us.append(i + off)
        vs.append(j + off)
    for a in range(blocks):
        for b in range(a + 1, blocks):
            idx = _bernoulli_indices(rng, m * m, p_out)
            us.append(idx // m + a * m)
            vs.append(idx % m + b * m)
    u = np.concatenate(us) if us else np.empty(0, np.int64)
    v = np.concatenate(vs) if vs else np.empty(0, np.int64)
    labels = np.repeat(np.arange(blocks, dtype=np.int64), m)
    return SparseGraph.from_edges(n, u, v), labels


def gaussian_features(labels, dim: int, shift: float, seed: int = 0) -> np.ndarray:
    """Unit-variance Gaussian features whose class means are `shift` apart
    along orthogonal axes (class c shifted along coordinate c mod dim)."""
    labels = np.asarray(labels)
    rng = substream(seed, "features")
    x = rng.standard_normal((labels.shape[0], dim))
    x[np.arange(labels.shape[0]), labels % dim] += shift
    return x


def random_split(labels, train_frac: float, val_frac: float, seed: int = 0):
    """Stratified train/val/test masks; every class is represented in train."""
    labels = np.asarray(labels)
    n = labels.shape[0]
    if not (0 < train_frac and 0 <= val_frac and train_frac + val_frac < 1):
        raise ConfigError("need train_frac > 0, val_frac >= 0, train+val < 1")
    rng = substream(seed, "split")
    train = np.zeros(n, dtype=bool)
    val = np.zeros(n, dtype=bool)
    for c in np.unique(labels):
        ids = np.where(labels == c)[0]
        ids = ids[rng.permutation(ids.shape[0])]
        n_tr = max(1, int(round(train_frac * ids.shape[0])))
        n_va = int(round(val_frac * ids.shape[0]))
        train[ids[:n_tr]] = True
        val[ids[n_tr:n_tr + n_va]] = True
    test = ~(train | val)
    return train, val, test
