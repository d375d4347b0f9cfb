"""Hot numeric kernels: exact kNN selection, a navigable-small-world index
for approximate kNN, and per-edge embedding distances.

Every kernel has two implementations: a numba-jitted one (default) and a pure
numpy/Python fallback. Setting the environment variable ``GARNET_NO_NUMBA=1``
selects the fallback path; ``GARNET_THREADS`` caps the numba thread pool.
``benchmarks/kernel_bench.py`` compares both paths.
"""

import heapq
import os

import numpy as np

os.environ.setdefault("NUMBA_THREADING_LAYER", "omp")

try:
    import numba
    from numba import njit, prange, get_thread_id

    HAS_NUMBA = True
except ImportError:  # pragma: no cover - numba is a hard dependency in practice
    HAS_NUMBA = False

    def njit(*args, **kwargs):
        def wrap(f):
            return f

        if args and callable(args[0]):
            return args[0]
        return wrap

    prange = range


def use_numba() -> bool:
    return HAS_NUMBA and os.environ.get("GARNET_NO_NUMBA", "0") not in ("1", "true", "yes")


def configure_threads() -> None:
    """Apply the GARNET_THREADS cap to the numba thread pool, if set."""
    if not HAS_NUMBA:
        return
    raw = os.environ.get("GARNET_THREADS")
    if not raw:
        return
    try:
        want = int(raw)
    except ValueError:
        return
    if want >= 1:
        numba.set_num_threads(min(want, numba.config.NUMBA_NUM_THREADS))


# ---------------------------------------------------------------------------
# exact kNN (brute force, k-best selection per row)
# ---------------------------------------------------------------------------
#
# Neighbor order is ascending by (distance, id); ties on distance are broken
# by the smaller node id. Both backends accumulate squared differences in
# dimension order so they agree bitwise on the same input.


@njit(cache=True)
def _row_dist(data, a, b):
    acc = 0.0
    for d in range(data.shape[1]):
        diff = data[a, d] - data[b, d]
        acc += diff * diff
    return acc


@njit(parallel=True)
def _exact_knn_numba(data, k):
    n = data.shape[0]
    out = np.empty((n, k), np.int64)
    for i in prange(n):
        best_d = np.full(k, np.inf)
        best_i = np.full(k, -1, np.int64)
        filled = 0
        for j in range(n):
            if j == i:
                continue
            d = _row_dist(data, i, j)
            if filled == k:
                wd = best_d[k - 1]
                if d > wd or (d == wd and j > best_i[k - 1]):
                    continue
            pos = filled if filled < k else k - 1
            while pos > 0 and (d < best_d[pos - 1] or (d == best_d[pos - 1] and j < best_i[pos - 1])):
                best_d[pos] = best_d[pos - 1]
                best_i[pos] = best_i[pos - 1]
                pos -= 1
            best_d[pos] = d
            best_i[pos] = j
            if filled < k:
                filled += 1
        out[i] = best_i
    return out


def _exact_knn_numpy(data, k, chunk=256):
    n = data.shape[0]
    out = np.empty((n, k), np.int64)
    ids = np.arange(n)
    for lo in range(0, n, chunk):
        hi = min(lo + chunk, n)
        d2 = np.zeros((hi - lo, n))
        for dim in range(data.shape[1]):
            diff = data[lo:hi, dim, None] - data[None, :, dim]
            d2 += diff * diff
        d2[ids[lo:hi] - lo, ids[lo:hi]] = np.inf
        for row in range(hi - lo):
            order = np.lexsort((ids, d2[row]))
            out[lo + row] = order[:k]
    return out


def exact_knn(data: np.ndarray, k: int) -> np.ndarray:
    """(n, k) matrix of each row's k nearest rows, self excluded."""
    data = np.ascontiguousarray(data, dtype=np.float64)
    if use_numba():
        configure_threads()
        return _exact_knn_numba(data, k)
    return _exact_knn_numpy(data, k)


# ---------------------------------------------------------------------------
# navigable-small-world approximate kNN
# ---------------------------------------------------------------------------
#
# Single-layer NSW: points are inserted in a seeded random order; each insert
# runs a beam search over the partial graph and links to its nearest finds.
# Slot 0 of every node's adjacency row is its first (insert-time) link and is
# never pruned, which keeps the insertion tree intact. All comparisons are
# lexicographic on (distance, id) so results are deterministic given the seed.


@njit(cache=True)
def _heap_push(hd, hi, size, d, i):
    hd[size] = d
    hi[size] = i
    j = size
    while j > 0:
        p = (j - 1) >> 1
        if hd[j] < hd[p] or (hd[j] == hd[p] and hi[j] < hi[p]):
            hd[j], hd[p] = hd[p], hd[j]
            hi[j], hi[p] = hi[p], hi[j]
            j = p
        else:
            break
    return size + 1


@njit(cache=True)
def _heap_pop(hd, hi, size):
    size -= 1
    hd[0] = hd[size]
    hi[0] = hi[size]
    j = 0
    while True:
        l = 2 * j + 1
        r = l + 1
        m = j
        if l < size and (hd[l] < hd[m] or (hd[l] == hd[m] and hi[l] < hi[m])):
            m = l
        if r < size and (hd[r] < hd[m] or (hd[r] == hd[m] and hi[r] < hi[m])):
            m = r
        if m == j:
            break
        hd[j], hd[m] = hd[m], hd[j]
        hi[j], hi[m] = hi[m], hi[j]
        j = m
    return size


@njit(cache=True)
def _beam_search(data, adj, cnt, qi, entries, ef, visited, stamp,
                 cand_d, cand_i, res_d, res_i):
    """Fills (res_d, res_i) as a max-heap (negated keys) of the ef nearest
    discovered nodes; returns its size."""
    csize = 0
    rsize = 0
    for t in range(entries.shape[0]):
        e = entries[t]
        if e < 0 or visited[e] == stamp:
            continue
        visited[e] = stamp
        d = _row_dist(data, qi, e)
        csize = _heap_push(cand_d, cand_i, csize, d, e)
        rsize = _heap_push(res_d, res_i, rsize, -d, -e)
        if rsize > ef:
            rsize = _heap_pop(res_d, res_i, rsize)
    while csize > 0:
        d = cand_d[0]
        c = cand_i[0]
        csize = _heap_pop(cand_d, cand_i, csize)
        if rsize >= ef:
            wd = -res_d[0]
            wi = -res_i[0]
            if d > wd or (d == wd and c > wi):
                break
        for s in range(cnt[c]):
            nb = np.int64(adj[c, s])
            if visited[nb] == stamp:
                continue
            visited[nb] = stamp
            dn = _row_dist(data, qi, nb)
            if rsize >= ef:
                wd = -res_d[0]
                wi = -res_i[0]
                if dn > wd or (dn == wd and nb > wi):
                    continue
            csize = _heap_push(cand_d, cand_i, csize, dn, nb)
            rsize = _heap_push(res_d, res_i, rsize, -dn, -nb)
            if rsize > ef:
                rsize = _heap_pop(res_d, res_i, rsize)
    return rsize


@njit(cache=True)
def _drain_ascending(res_d, res_i, rsize, out_d, out_i):
    """Pop the negated-key result heap into ascending (distance, id) order."""
    size = rsize
    while size > 0:
        out_d[size - 1] = -res_d[0]
        out_i[size - 1] = -res_i[0]
        size = _heap_pop(res_d, res_i, size)
    return rsize


@njit(cache=True)
def _link(adj, cnt, data, a, b):
    cap = adj.shape[1]
    c = cnt[a]
    for s in range(c):
        if adj[a, s] == b:
            return
    if c < cap:
        adj[a, c] = b
        cnt[a] = c + 1
        return
    # full: keep the protected slot 0, then the cap-1 closest of the rest + b
    worst = 0
    wd = -1.0
    wi = np.int64(-1)
    db = _row_dist(data, a, b)
    keep_b = True
    for s in range(1, cap):
        ds = _row_dist(data, a, np.int64(adj[a, s]))
        if ds > wd or (ds == wd and adj[a, s] > wi):
            wd = ds
            wi = np.int64(adj[a, s])
            worst = s
    if db > wd or (db == wd and b > wi):
        keep_b = False
    if keep_b:
        adj[a, worst] = b


@njit(cache=True)
def _nsw_build(data, order, m_links, ef_build):
    n = data.shape[0]
    cap = 2 * m_links
    adj = np.full((n, cap), -1, np.int32)
    cnt = np.zeros(n, np.int32)
    visited = np.zeros(n, np.int64)
    cand_d = np.empty(n + 8, np.float64)
    cand_i = np.empty(n + 8, np.int64)
    res_d = np.empty(ef_build + 2, np.float64)
    res_i = np.empty(ef_build + 2, np.int64)
    out_d = np.empty(ef_build + 2, np.float64)
    out_i = np.empty(ef_build + 2, np.int64)
    ent = np.empty(4, np.int64)
    stamp = 0
    for t in range(1, n):
        q = order[t]
        stamp += 1
        ent[0] = order[0]
        ent[1] = order[t >> 1]
        ent[2] = order[t >> 2]
        ent[3] = order[(t * 2654435761) % t]
        visited[q] = stamp
        rsize = _beam_search(data, adj, cnt, q, ent, ef_build,
                             visited, stamp, cand_d, cand_i, res_d, res_i)
        rsize = _drain_ascending(res_d, res_i, rsize, out_d, out_i)
        links = min(m_links, rsize)
        for s in range(links):
            nb = out_i[s]
            _link(adj, cnt, data, q, nb)
            _link(adj, cnt, data, nb, q)
    return adj, cnt


@njit(parallel=True)
def _nsw_query(data, adj, cnt, order, k, ef):
    n = data.shape[0]
    efq = max(ef, k + 1)
    n_ent = min(8, n)
    ents = np.empty(n_ent, np.int64)
    for j in range(n_ent):
        ents[j] = order[(n * j) // n_ent]
    nthreads = numba.get_num_threads()
    visited = np.zeros((nthreads, n), np.int64)
    cand_d = np.empty((nthreads, n + 8), np.float64)
    cand_i = np.empty((nthreads, n + 8), np.int64)
    res_d = np.empty((nthreads, efq + 2), np.float64)
    res_i = np.empty((nthreads, efq + 2), np.int64)
    out_d = np.empty((nthreads, efq + 2), np.float64)
    out_i = np.empty((nthreads, efq + 2), np.int64)
    out = np.full((n, k), -1, np.int64)
    for i in prange(n):
        tid = get_thread_id()
        stamp = np.int64(i + 1)
        rsize = _beam_search(data, adj, cnt, i, ents, efq,
                             visited[tid], stamp,
                             cand_d[tid], cand_i[tid], res_d[tid], res_i[tid])
        rsize = _drain_ascending(res_d[tid], res_i[tid], rsize, out_d[tid], out_i[tid])
        w = 0
        for s in range(rsize):
            if out_i[tid, s] == i:
                continue
            if w >= k:
                break
            out[i, w] = out_i[tid, s]
            w += 1
    return out


# -- pure-Python NSW fallback (same algorithm, heapq-based) ------------------


def _py_beam_search(data, adj, cnt, qi, entries, ef, visited):
    q = data[qi]
    cand = []
    res = []  # max-heap via negated keys
    for e in entries:
        if e < 0 or e in visited:
            continue
        visited.add(e)
        diff = data[e] - q
        d = float(diff @ diff)
        heapq.heappush(cand, (d, e))
        heapq.heappush(res, (-d, -e))
        if len(res) > ef:
            heapq.heappop(res)
    while cand:
        d, c = heapq.heappop(cand)
        if len(res) >= ef and (d, c) > (-res[0][0], -res[0][1]):
            break
        for s in range(cnt[c]):
            nb = int(adj[c, s])
            if nb in visited:
                continue
            visited.add(nb)
            diff = data[nb] - q
            dn = float(diff @ diff)
            if len(res) >= ef and (dn, nb) > (-res[0][0], -res[0][1]):
                continue
            heapq.heappush(cand, (dn, nb))
            heapq.heappush(res, (-dn, -nb))
            if len(res) > ef:
                heapq.heappop(res)
    return sorted((-d, -i) for d, i in res)


def _py_link(adj, cnt, data, a, b):
    cap = adj.shape[1]
    c = int(cnt[a])
    if b in adj[a, :c]:
        return
    if c < cap:
        adj[a, c] = b
        cnt[a] = c + 1
        return
    diff = data[b] - data[a]
    db = (float(diff @ diff), b)
    worst, wkey = 0, (-1.0, -1)
    for s in range(1, cap):
        diff = data[int(adj[a, s])] - data[a]
        key = (float(diff @ diff), int(adj[a, s]))
        if key > wkey:
            wkey = key
            worst = s
    if db < wkey:
        adj[a, worst] = b


def _nsw_build_numpy(data, order, m_links, ef_build):
    n = data.shape[0]
    cap = 2 * m_links
    adj = np.full((n, cap), -1, np.int32)
    cnt = np.zeros(n, np.int32)
    for t in range(1, n):
        q = int(order[t])
        ents = [int(order[0]), int(order[t >> 1]), int(order[t >> 2]),
                int(order[(t * 2654435761) % t])]
        found = _py_beam_search(data, adj, cnt, q, ents, ef_build, {q})
        for _, nb in found[:m_links]:
            _py_link(adj, cnt, data, q, nb)
            _py_link(adj, cnt, data, nb, q)
    return adj, cnt


def _nsw_query_numpy(data, adj, cnt, order, k, ef):
    n = data.shape[0]
    efq = max(ef, k + 1)
    n_ent = min(8, n)
    ents = [int(order[(n * j) // n_ent]) for j in range(n_ent)]
    out = np.full((n, k), -1, np.int64)
    for i in range(n):
        found = _py_beam_search(data, adj, cnt, i, ents, efq, set())
        w = 0
        for _, nb in found:
            if nb == i:
                continue
            if w >= k:
                break
            out[i, w] = nb
            w += 1
    return out


def nsw_knn(data: np.ndarray, k: int, ef: int, order: np.ndarray) -> np.ndarray:
    """(n, k) approximate nearest neighbors; rows left as -1 where the beam
    found fewer than k nodes are topped up by direct scan."""
    data = np.ascontiguousarray(data, dtype=np.float64)
    n = data.shape[0]
    m_links = min(n - 1, max(16, min(k, 48)))
    ef_build = max(ef, 2 * m_links)
    if use_numba():
        configure_threads()
        adj, cnt = _nsw_build(data, order, m_links, ef_build)
        out = _nsw_query(data, adj, cnt, order, k, ef)
    else:
        adj, cnt = _nsw_build_numpy(data, order, m_links, ef_build)
        out = _nsw_query_numpy(data, adj, cnt, order, k, ef)
    short = np.where(out[:, k - 1] < 0)[0]
    if short.size:
        ids = np.arange(n)
        for i in short:
            d2 = ((data - data[i]) ** 2).sum(axis=1)
            d2[i] = np.inf
            out[i] = np.lexsort((ids, d2))[:k]
    return out


# ---------------------------------------------------------------------------
# per-edge squared embedding distances
# ---------------------------------------------------------------------------


@njit(parallel=True)
def _edge_sqdist_numba(emb, ei, ej):
    m = ei.shape[0]
    out = np.empty(m, np.float64)
    for e in prange(m):
        acc = 0.0
        for d in range(emb.shape[1]):
            diff = emb[ei[e], d] - emb[ej[e], d]
            acc += diff * diff
        out[e] = acc
    return out


def _edge_sqdist_numpy(emb, ei, ej):
    diff = emb[ei] - emb[ej]
    return np.einsum("ij,ij->i", diff, diff)


def edge_sqdist(emb: np.ndarray, ei: np.ndarray, ej: np.ndarray) -> np.ndarray:
    """Squared Euclidean distance between embedding rows ei[t] and ej[t]."""
    emb = np.ascontiguousarray(emb, dtype=np.float64)
    if use_numba():
        configure_threads()
        return _edge_sqdist_numba(emb, ei.astype(np.int64), ej.astype(np.int64))
    return _edge_sqdist_numpy(emb, ei, ej)
