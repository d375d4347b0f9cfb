import numpy as np
import pytest

from garnet import _kernels
from garnet.knn import KnnConfig, build_knn_graph, knn_neighbors, knn_recall


@pytest.fixture
def points():
    return np.random.default_rng(0).standard_normal((150, 6))


class TestBackendAgreement:
    def test_exact_knn_paths_identical(self, points):
        a = _kernels._exact_knn_numba(np.ascontiguousarray(points), 7)
        b = _kernels._exact_knn_numpy(points, 7)
        assert np.array_equal(a, b)

    def test_exact_knn_paths_identical_with_ties(self):
        pts = np.repeat(np.arange(10.0)[:, None], 3, axis=0).astype(np.float64)
        a = _kernels._exact_knn_numba(np.ascontiguousarray(pts), 4)
        b = _kernels._exact_knn_numpy(pts, 4)
        assert np.array_equal(a, b)

    def test_nsw_paths_agree(self, points):
        order = np.random.default_rng(1).permutation(points.shape[0]).astype(np.int64)
        m_links, ef = 16, 32
        adj_n, cnt_n = _kernels._nsw_build(np.ascontiguousarray(points), order, m_links, ef)
        out_n = _kernels._nsw_query(np.ascontiguousarray(points), adj_n, cnt_n, order, 5, 12)
        adj_p, cnt_p = _kernels._nsw_build_numpy(points, order, m_links, ef)
        out_p = _kernels._nsw_query_numpy(points, adj_p, cnt_p, order, 5, 12)
        agree = np.mean([len(set(a) & set(b)) / 5 for a, b in zip(out_n.tolist(), out_p.tolist())])
        assert agree >= 0.98

    def test_edge_sqdist_paths_close(self, points):
        rng = np.random.default_rng(2)
        ei = rng.integers(0, points.shape[0], 300)
        ej = rng.integers(0, points.shape[0], 300)
        a = _kernels._edge_sqdist_numba(np.ascontiguousarray(points), ei, ej)
        b = _kernels._edge_sqdist_numpy(points, ei, ej)
        assert np.allclose(a, b, rtol=1e-12, atol=1e-14)


class TestDispatch:
    def test_env_flag_selects_numpy_path(self, points, monkeypatch):
        default = knn_neighbors(points, KnnConfig(k=5))
        monkeypatch.setenv("GARNET_NO_NUMBA", "1")
        assert not _kernels.use_numba()
        fallback = knn_neighbors(points, KnnConfig(k=5))
        assert np.array_equal(default, fallback)

    def test_numba_enabled_by_default(self, monkeypatch):
        monkeypatch.delenv("GARNET_NO_NUMBA", raising=False)
        assert _kernels.use_numba() == _kernels.HAS_NUMBA

    def test_approx_mode_works_under_fallback(self, points, monkeypatch):
        monkeypatch.setenv("GARNET_NO_NUMBA", "1")
        cfg = KnnConfig(k=5, mode="approx", approx_ef=12, seed=3)
        approx = build_knn_graph(points, cfg)
        exact = build_knn_graph(points, KnnConfig(k=5))
        assert knn_recall(approx, exact) >= 0.9

    def test_thread_cap_applies(self, monkeypatch):
        monkeypatch.setenv("GARNET_THREADS", "1")
        _kernels.configure_threads()
        if _kernels.HAS_NUMBA:
            import numba

            assert numba.get_num_threads() == 1

    def test_thread_cap_ignores_garbage(self, monkeypatch):
        monkeypatch.setenv("GARNET_THREADS", "many")
        _kernels.configure_threads()  # no crash
