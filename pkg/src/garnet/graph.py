"""Sparse undirected graphs in CSR form, degree-normalized operators, and
edge-list / label file I/O."""

from dataclasses import dataclass, field

import numpy as np
import scipy.sparse as sp
from scipy.sparse.linalg import LinearOperator

from .errors import (
    ConfigError,
    EmptyGraph,
    IdOutOfRange,
    IoError,
    MalformedLine,
    NegativeWeight,
)

ADJACENCY = "adjacency"
LAPLACIAN = "laplacian"


class SparseGraph:
    """Symmetric weighted adjacency with positive weights and no self-loops.

    Immutable after construction; column indices are strictly increasing
    within each row and every (i, j) entry has a matching (j, i) entry.
    """

    __slots__ = ("n", "row_ptr", "col_idx", "weights", "_csr", "_deg")

    def __init__(self, n, row_ptr, col_idx, weights, validate=True):
        self.n = int(n)
        self.row_ptr = np.asarray(row_ptr, dtype=np.int64)
        self.col_idx = np.asarray(col_idx, dtype=np.int64)
        self.weights = np.asarray(weights, dtype=np.float64)
        self._csr = None
        self._deg = None
        if validate:
            self.validate()

    # -- construction ---------------------------------------------------

    @classmethod
    def from_edges(cls, n, u, v, w=None):
        """Build from (possibly duplicated, possibly looped) edge arrays.

        Duplicate mentions of the same unordered pair are merged by summing
        weights; self-loops are dropped.
        """
        n = int(n)
        u = np.asarray(u, dtype=np.int64)
        v = np.asarray(v, dtype=np.int64)
        if w is None:
            w = np.ones(u.shape[0], dtype=np.float64)
        else:
            w = np.asarray(w, dtype=np.float64)
        keep = u != v
        u, v, w = u[keep], v[keep], w[keep]
        lo = np.minimum(u, v)
        hi = np.maximum(u, v)
        if u.size:
            codes = lo * n + hi
            order = np.argsort(codes, kind="stable")
            codes, w = codes[order], w[order]
            uniq, start = np.unique(codes, return_index=True)
            wsum = np.add.reduceat(w, start)
            lo, hi = uniq // n, uniq % n
        else:
            wsum = w
        rows = np.concatenate([lo, hi])
        cols = np.concatenate([hi, lo])
        vals = np.concatenate([wsum, wsum])
        order = np.lexsort((cols, rows))
        rows, cols, vals = rows[order], cols[order], vals[order]
        row_ptr = np.zeros(n + 1, dtype=np.int64)
        np.add.at(row_ptr, rows + 1, 1)
        np.cumsum(row_ptr, out=row_ptr)
        return cls(n, row_ptr, cols, vals)

    @classmethod
    def empty(cls, n):
        return cls(n, np.zeros(n + 1, dtype=np.int64), np.empty(0, np.int64), np.empty(0))

    def validate(self):
        n = self.n
        if n < 0:
            raise ConfigError("node count must be nonnegative")
        if self.row_ptr.shape != (n + 1,) or self.row_ptr[0] != 0 or self.row_ptr[-1] != self.col_idx.size:
            raise ConfigError("inconsistent CSR row pointer")
        if self.col_idx.size:
            if self.col_idx.min() < 0 or self.col_idx.max() >= n:
                raise ConfigError("column index out of range")
            if not np.all(self.weights > 0):
                raise ConfigError("weights must be strictly positive")
        rows = self._row_of_entry()
        if np.any(self.col_idx == rows):
            raise ConfigError("self-loop present")
        if self.col_idx.size > 1:
            same_row = rows[1:] == rows[:-1]
            if np.any(np.diff(self.col_idx)[same_row] <= 0):
                raise ConfigError("column indices not strictly increasing within a row")
        a = self.to_csr()
        if (a != a.T).nnz != 0:
            raise ConfigError("adjacency not symmetric")

    # -- views ------------------------------------------------------------

    def _row_of_entry(self):
        return np.repeat(np.arange(self.n, dtype=np.int64), np.diff(self.row_ptr))

    def to_csr(self) -> sp.csr_matrix:
        if self._csr is None:
            self._csr = sp.csr_matrix(
                (self.weights, self.col_idx, self.row_ptr), shape=(self.n, self.n)
            )
        return self._csr

    @property
    def num_edges(self) -> int:
        """Number of undirected edges."""
        return self.col_idx.size // 2

    @property
    def degrees(self) -> np.ndarray:
        """Weighted degree of each node."""
        if self._deg is None:
            deg = np.zeros(self.n)
            np.add.at(deg, self._row_of_entry(), self.weights)
            self._deg = deg
        return self._deg

    def neighbors(self, i) -> np.ndarray:
        return self.col_idx[self.row_ptr[i]:self.row_ptr[i + 1]]

    def edge_arrays(self):
        """(i, j, w) arrays of undirected edges with i < j, sorted by (i, j)."""
        rows = self._row_of_entry()
        upper = self.col_idx > rows
        return rows[upper], self.col_idx[upper], self.weights[upper]

    def edge_set(self) -> set:
        ei, ej, _ = self.edge_arrays()
        return set(map(int, ei * self.n + ej))

    def __eq__(self, other):
        if not isinstance(other, SparseGraph):
            return NotImplemented
        return (
            self.n == other.n
            and np.array_equal(self.row_ptr, other.row_ptr)
            and np.array_equal(self.col_idx, other.col_idx)
            and np.array_equal(self.weights, other.weights)
        )

    def __hash__(self):
        return id(self)

    def __repr__(self):
        return f"SparseGraph(n={self.n}, edges={self.num_edges})"


@dataclass(frozen=True)
class NormalizedOperator:
    """Matrix-free degree-normalized adjacency or Laplacian.

    The adjacency kind applies x -> D^-1/2 A D^-1/2 x and the Laplacian kind
    x -> x - D^-1/2 A D^-1/2 x. Isolated nodes carry inv_sqrt_deg = 0, so
    they map to 0 under the adjacency and to themselves under the Laplacian.
    """

    graph: SparseGraph
    inv_sqrt_deg: np.ndarray = field(repr=False)
    kind: str = LAPLACIAN

    @property
    def n(self):
        return self.graph.n

    def adjacency_matvec(self, x):
        y = self.inv_sqrt_deg * np.asarray(x, dtype=np.float64)
        y = self.graph.to_csr().dot(y)
        return self.inv_sqrt_deg * y

    def matvec(self, x):
        if self.kind == ADJACENCY:
            return self.adjacency_matvec(x)
        return np.asarray(x, dtype=np.float64) - self.adjacency_matvec(x)

    def quad_form(self, x):
        return float(np.dot(x, self.matvec(x)))

    def to_linear_operator(self) -> LinearOperator:
        n = self.n
        return LinearOperator((n, n), matvec=self.matvec, dtype=np.float64)


def normalized_operator(g: SparseGraph, kind: str = LAPLACIAN) -> NormalizedOperator:
    if kind not in (ADJACENCY, LAPLACIAN):
        raise ConfigError(f"unknown operator kind {kind!r}")
    deg = g.degrees
    inv_sqrt = np.zeros(g.n)
    nz = deg > 0
    inv_sqrt[nz] = 1.0 / np.sqrt(deg[nz])
    return NormalizedOperator(graph=g, inv_sqrt_deg=inv_sqrt, kind=kind)


# ---------------------------------------------------------------------------
# file I/O
# ---------------------------------------------------------------------------


def load_edge_list(path, n_hint=None) -> SparseGraph:
    """Read a whitespace edge list ("u v" or "u v w", '#' comments allowed).

    The result is symmetrized, deduplicated (duplicate weights summed) and
    stripped of self-loops; n = max(n_hint, max id + 1).
    """
    us, vs, ws = [], [], []
    max_id = -1
    with open(path, "r", encoding="utf-8") as fh:
        for line_no, line in enumerate(fh, start=1):
            text = line.strip()
            if not text or text.startswith("#"):
                continue
            parts = text.split()
            if len(parts) not in (2, 3):
                raise MalformedLine(path, line_no, line.rstrip("\n"))
            try:
                u = int(parts[0])
                v = int(parts[1])
                w = float(parts[2]) if len(parts) == 3 else 1.0
            except ValueError:
                raise MalformedLine(path, line_no, line.rstrip("\n")) from None
            if u < 0 or v < 0:
                raise MalformedLine(path, line_no, line.rstrip("\n"))
            if not (w > 0) or not np.isfinite(w):
                raise NegativeWeight(path, line_no, w)
            if n_hint is not None and (u >= n_hint or v >= n_hint):
                raise IdOutOfRange(path, line_no, max(u, v), n_hint)
            max_id = max(max_id, u, v)
            us.append(u)
            vs.append(v)
            ws.append(w)
    n = max(n_hint or 0, max_id + 1)
    return SparseGraph.from_edges(n, us, vs, ws)


def _format_weight(w: float) -> str:
    s = repr(float(w))
    return s[:-2] if s.endswith(".0") else s


def write_edge_list(g: SparseGraph, path) -> None:
    """Write each undirected edge once as "i j w", sorted by (i, j)."""
    ei, ej, ew = g.edge_arrays()
    try:
        with open(path, "w", encoding="utf-8") as fh:
            for i, j, w in zip(ei, ej, ew):
                fh.write(f"{i} {j} {_format_weight(w)}\n")
    except OSError as exc:
        raise IoError(f"cannot write edge list to {path}: {exc}") from exc


def load_labels(path, n=None) -> np.ndarray:
    """One integer class id per line; line i labels node i."""
    try:
        labels = np.loadtxt(path, dtype=np.int64, ndmin=1)
    except ValueError as exc:
        raise MalformedLine(path, 0, str(exc)) from exc
    if n is not None and labels.shape[0] != n:
        raise ConfigError(f"{path}: expected {n} labels, found {labels.shape[0]}")
    return labels


def write_labels(labels, path) -> None:
    np.savetxt(path, np.asarray(labels, dtype=np.int64), fmt="%d")


# ---------------------------------------------------------------------------
# graph statistics
# ---------------------------------------------------------------------------


def homophily_score(g: SparseGraph, labels) -> float:
    """Fraction of undirected edges whose endpoints share a label."""
    labels = np.asarray(labels)
    if labels.shape[0] != g.n:
        raise ConfigError(f"expected {g.n} labels, got {labels.shape[0]}")
    ei, ej, _ = g.edge_arrays()
    if ei.size == 0:
        raise EmptyGraph("homophily score requires at least one edge")
    return float(np.mean(labels[ei] == labels[ej]))
