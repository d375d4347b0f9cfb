import numpy as np
import pytest

from garnet import (
    ADJACENCY,
    LAPLACIAN,
    SparseGraph,
    homophily_score,
    load_edge_list,
    normalized_operator,
    write_edge_list,
)
from garnet.errors import (
    ConfigError,
    EmptyGraph,
    IdOutOfRange,
    MalformedLine,
    NegativeWeight,
)
from helpers import random_graph, triangle_graph


def write(tmp_path, text, name="g.edges"):
    p = tmp_path / name
    p.write_text(text)
    return p


class TestLoadEdgeList:
    def test_basic(self, tmp_path):
        g = load_edge_list(write(tmp_path, "0 1\n1 2\n"))
        assert g.n == 3
        assert g.num_edges == 2
        assert np.all(g.weights == 1.0)

    def test_duplicates_summed(self, tmp_path):
        g = load_edge_list(write(tmp_path, "0 1 0.5\n1 0 0.5\n"))
        assert g.num_edges == 1
        _, _, w = g.edge_arrays()
        assert w[0] == 1.0

    def test_self_loop_stripped(self, tmp_path):
        g = load_edge_list(write(tmp_path, "0 0\n"))
        assert g.n == 1
        assert g.num_edges == 0

    def test_comments_and_blanks(self, tmp_path):
        g = load_edge_list(write(tmp_path, "# header\n\n0 1\n# trailing\n"))
        assert g.num_edges == 1

    def test_n_hint_grows_graph(self, tmp_path):
        g = load_edge_list(write(tmp_path, "0 1\n"), n_hint=10)
        assert g.n == 10

    def test_id_out_of_range(self, tmp_path):
        with pytest.raises(IdOutOfRange):
            load_edge_list(write(tmp_path, "0 5\n"), n_hint=3)

    def test_malformed_line_reports_number(self, tmp_path):
        with pytest.raises(MalformedLine) as exc:
            load_edge_list(write(tmp_path, "0 1\nnot an edge\n"))
        assert exc.value.line_no == 2

    @pytest.mark.parametrize("bad", ["0 1 -2.0", "0 1 0", "0 1 nan"])
    def test_nonpositive_weight(self, tmp_path, bad):
        with pytest.raises(NegativeWeight):
            load_edge_list(write(tmp_path, bad + "\n"))


class TestWriteEdgeList:
    def test_k3(self, tmp_path):
        out = tmp_path / "out.edges"
        write_edge_list(triangle_graph(), out)
        assert out.read_text() == "0 1 1\n0 2 1\n1 2 1\n"

    def test_empty_graph(self, tmp_path):
        out = tmp_path / "out.edges"
        write_edge_list(SparseGraph.empty(4), out)
        assert out.read_text() == ""

    def test_round_trip_identity(self, tmp_path):
        rng = np.random.default_rng(7)
        for t in range(100):
            n = int(rng.integers(2, 40))
            g = random_graph(n, 0.2, rng, weighted=bool(t % 2))
            p = tmp_path / f"g{t}.edges"
            write_edge_list(g, p)
            assert load_edge_list(p, n_hint=n) == g


class TestConstruction:
    def test_invariants_enforced(self):
        # asymmetric CSR rejected
        with pytest.raises(ConfigError):
            SparseGraph(2, [0, 1, 1], [1], [1.0])
        # self-loop rejected
        with pytest.raises(ConfigError):
            SparseGraph(1, [0, 1], [0], [1.0])
        # nonpositive weight rejected
        with pytest.raises(ConfigError):
            SparseGraph(2, [0, 1, 2], [1, 0], [0.0, 0.0])

    def test_from_edges_merges_and_strips(self):
        g = SparseGraph.from_edges(3, [0, 1, 2, 0], [1, 0, 2, 1], [1.0, 2.0, 5.0, 1.0])
        assert g.num_edges == 1  # (2,2) self-loop gone, (0,1) merged x3
        _, _, w = g.edge_arrays()
        assert w[0] == 4.0

    def test_degrees(self):
        g = SparseGraph.from_edges(3, [0, 1], [1, 2], [2.0, 3.0])
        assert np.allclose(g.degrees, [2.0, 5.0, 3.0])


class TestNormalizedOperator:
    def test_k3_adjacency_matrix(self):
        op = normalized_operator(triangle_graph(), ADJACENCY)
        dense = np.column_stack([op.matvec(e) for e in np.eye(3)])
        expected = np.full((3, 3), 0.5)
        np.fill_diagonal(expected, 0.0)
        assert np.allclose(dense, expected, atol=1e-15)

    def test_isolated_node_laplacian_is_identity(self):
        op = normalized_operator(SparseGraph.empty(1), LAPLACIAN)
        x = np.array([3.7])
        assert np.allclose(op.matvec(x), x)

    def test_p2_adjacency(self):
        g = SparseGraph.from_edges(2, [0], [1])
        op = normalized_operator(g, ADJACENCY)
        dense = np.column_stack([op.matvec(e) for e in np.eye(2)])
        assert np.allclose(dense, [[0, 1], [1, 0]], atol=1e-15)

    def test_psd_quadratic_form(self):
        rng = np.random.default_rng(1)
        checks = 0
        while checks < 1000:
            g = random_graph(int(rng.integers(2, 30)), 0.3, rng, weighted=True)
            op = normalized_operator(g, LAPLACIAN)
            for _ in range(25):
                x = rng.standard_normal(g.n)
                assert op.quad_form(x) >= -1e-10 * float(x @ x)
                checks += 1

    def test_identity_split(self):
        rng = np.random.default_rng(2)
        for _ in range(20):
            n = int(rng.integers(2, 30))
            g = random_graph(n, 0.5, rng)
            if np.any(g.degrees == 0):
                continue
            lap = normalized_operator(g, LAPLACIAN)
            adj = normalized_operator(g, ADJACENCY)
            x = rng.standard_normal(n)
            lhs = lap.matvec(x) + adj.matvec(x)
            assert np.linalg.norm(lhs - x) <= 1e-12 * np.linalg.norm(x)

    def test_operator_symmetry(self):
        rng = np.random.default_rng(3)
        for _ in range(20):
            g = random_graph(20, 0.3, rng, weighted=True)
            op = normalized_operator(g, LAPLACIAN)
            x, y = rng.standard_normal((2, 20))
            a = float(y @ op.matvec(x))
            b = float(x @ op.matvec(y))
            assert abs(a - b) <= 1e-12 * max(1.0, abs(a))

    def test_unknown_kind(self):
        with pytest.raises(ConfigError):
            normalized_operator(triangle_graph(), "combinatorial")


class TestHomophily:
    def test_all_same_class(self):
        assert homophily_score(triangle_graph(), [1, 1, 1]) == 1.0

    def test_k3_all_distinct(self):
        assert homophily_score(triangle_graph(), [0, 1, 2]) == 0.0

    def test_empty_graph_raises(self):
        with pytest.raises(EmptyGraph):
            homophily_score(SparseGraph.empty(3), [0, 1, 2])

    def test_mixed(self):
        g = SparseGraph.from_edges(4, [0, 1, 2], [1, 2, 3], None)
        assert homophily_score(g, [0, 0, 1, 1]) == pytest.approx(2 / 3)
