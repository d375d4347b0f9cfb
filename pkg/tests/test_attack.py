import numpy as np
import pytest

from garnet import (
    AttackConfig,
    SparseGraph,
    attack,
    gaussian_features,
    generate_sbm,
    homophily_score,
    random_split,
)
from garnet.attack import _triangle_decode
from garnet.errors import BudgetInfeasible, ConfigError, InvalidProbability


def symmetric_difference(a: SparseGraph, b: SparseGraph) -> int:
    return len(a.edge_set() ^ b.edge_set())


class TestDiceGlobal:
    def test_zero_budget_is_identity(self):
        g, labels = generate_sbm(60, 2, 0.3, 0.05, seed=0)
        out, moves = attack(g, labels, AttackConfig(ptb_ratio=0.0, seed=1))
        assert out == g
        assert moves == []

    def test_move_legality_and_budget(self):
        g, labels = generate_sbm(100, 2, 0.3, 0.05, seed=1)
        cfg = AttackConfig(ptb_ratio=0.3, seed=2)
        out, moves = attack(g, labels, cfg)
        budget = round(0.3 * g.num_edges)
        assert len(moves) == budget
        assert symmetric_difference(g, out) == budget
        clean_edges = g.edge_set()
        for op, i, j in moves:
            assert i < j
            if op == "del":
                assert labels[i] == labels[j]
                assert i * g.n + j in clean_edges
            else:
                assert op == "ins"
                assert labels[i] != labels[j]
                assert i * g.n + j not in clean_edges

    def test_homophily_strictly_decreases(self):
        g, labels = generate_sbm(200, 2, 0.2, 0.02, seed=3)
        out, _ = attack(g, labels, AttackConfig(ptb_ratio=0.2, seed=4))
        assert homophily_score(out, labels) < homophily_score(g, labels)

    def test_deterministic(self):
        g, labels = generate_sbm(80, 2, 0.3, 0.05, seed=5)
        cfg = AttackConfig(ptb_ratio=0.4, seed=6)
        a1, m1 = attack(g, labels, cfg)
        a2, m2 = attack(g, labels, cfg)
        assert a1 == a2
        assert m1 == m2

    def test_complete_bipartite_is_infeasible(self):
        # sides = classes: no intra edge to delete, no absent inter pair to add
        n_half = 4
        u, v = np.meshgrid(np.arange(n_half), np.arange(n_half, 2 * n_half))
        g = SparseGraph.from_edges(2 * n_half, u.ravel(), v.ravel())
        labels = np.repeat([0, 1], n_half)
        with pytest.raises(BudgetInfeasible) as exc:
            attack(g, labels, AttackConfig(ptb_ratio=0.5, seed=7))
        assert exc.value.moves_completed == 0

    def test_labels_length_checked(self):
        g, labels = generate_sbm(20, 2, 0.5, 0.1, seed=8)
        with pytest.raises(ConfigError):
            attack(g, labels[:-1], AttackConfig(ptb_ratio=0.1, seed=0))


class TestRandomFlip:
    def test_symmetric_difference_equals_budget(self):
        g, labels = generate_sbm(60, 2, 0.3, 0.1, seed=9)
        cfg = AttackConfig(kind="random_flip", ptb_ratio=0.5, seed=10)
        out, moves = attack(g, labels, cfg)
        budget = round(0.5 * g.num_edges)
        assert len(moves) == budget
        assert symmetric_difference(g, out) == budget

    def test_ignores_labels(self):
        g, labels = generate_sbm(40, 2, 0.4, 0.1, seed=11)
        out, moves = attack(g, labels, AttackConfig(kind="random_flip", ptb_ratio=0.3, seed=12))
        kinds = {op for op, _, _ in moves}
        assert kinds <= {"del", "ins"}


class TestTargetedDice:
    def test_moves_incident_to_targets(self):
        g, labels = generate_sbm(60, 2, 0.4, 0.05, seed=13)
        targets = [0, 35]
        cfg = AttackConfig(kind="targeted_dice", targets=targets,
                           perturbations_per_target=5, seed=14)
        out, moves = attack(g, labels, cfg)
        assert len(moves) == 10
        for op, i, j in moves[:5]:
            assert 0 in (i, j)
        for op, i, j in moves[5:]:
            assert 35 in (i, j)
        assert symmetric_difference(g, out) == 10

    def test_requires_targets(self):
        with pytest.raises(ConfigError):
            AttackConfig(kind="targeted_dice", targets=None)

    def test_target_out_of_range(self):
        g, labels = generate_sbm(20, 2, 0.5, 0.1, seed=15)
        cfg = AttackConfig(kind="targeted_dice", targets=[99], perturbations_per_target=1, seed=0)
        with pytest.raises(ConfigError):
            attack(g, labels, cfg)

    def test_infeasible_target(self):
        # two nodes, different classes, already connected: no legal move
        g = SparseGraph.from_edges(2, [0], [1])
        labels = np.array([0, 1])
        cfg = AttackConfig(kind="targeted_dice", targets=[0], perturbations_per_target=1, seed=0)
        with pytest.raises(BudgetInfeasible):
            attack(g, labels, cfg)


class TestConfigValidation:
    def test_ptb_ratio_range(self):
        with pytest.raises(ConfigError):
            AttackConfig(ptb_ratio=1.5)

    def test_unknown_kind(self):
        with pytest.raises(ConfigError):
            AttackConfig(kind="gradient_descent")


class TestGenerateSbm:
    def test_zero_p_out_is_fully_homophilic(self):
        g, labels = generate_sbm(100, 4, 0.3, 0.0, seed=16)
        assert homophily_score(g, labels) == 1.0

    def test_edge_counts_within_3_sigma(self):
        n, blocks, p_in, p_out = 400, 2, 0.1, 0.01
        g, labels = generate_sbm(n, blocks, p_in, p_out, seed=17)
        ei, ej, _ = g.edge_arrays()
        intra = int(np.sum(labels[ei] == labels[ej]))
        inter = g.num_edges - intra
        m = n // blocks
        n_intra_pairs = blocks * m * (m - 1) // 2
        n_inter_pairs = m * m
        for count, pairs, p in ((intra, n_intra_pairs, p_in), (inter, n_inter_pairs, p_out)):
            mean = pairs * p
            sd = np.sqrt(pairs * p * (1 - p))
            assert abs(count - mean) <= 3 * sd

    def test_deterministic(self):
        a, la = generate_sbm(60, 3, 0.4, 0.05, seed=18)
        b, lb = generate_sbm(60, 3, 0.4, 0.05, seed=18)
        assert a == b
        assert np.array_equal(la, lb)

    def test_invalid_probabilities(self):
        with pytest.raises(InvalidProbability):
            generate_sbm(10, 2, 0.1, 0.2, seed=0)
        with pytest.raises(InvalidProbability):
            generate_sbm(10, 2, 1.5, 0.1, seed=0)

    def test_indivisible_blocks_rejected(self):
        with pytest.raises(ConfigError):
            generate_sbm(10, 3, 0.5, 0.1, seed=0)

    def test_labels_are_block_ids(self):
        _, labels = generate_sbm(30, 3, 0.5, 0.0, seed=19)
        assert np.array_equal(labels, np.repeat([0, 1, 2], 10))


def test_triangle_decode_matches_enumeration():
    for m in (2, 3, 7, 20):
        pairs = [(i, j) for i in range(m) for j in range(i + 1, m)]
        idx = np.arange(len(pairs))
        di, dj = _triangle_decode(idx, m)
        assert [(int(a), int(b)) for a, b in zip(di, dj)] == pairs


class TestFeaturesAndSplit:
    def test_gaussian_features_shift(self):
        labels = np.repeat([0, 1], 5000)
        x = gaussian_features(labels, 4, 2.0, seed=20)
        m0 = x[labels == 0].mean(axis=0)
        m1 = x[labels == 1].mean(axis=0)
        assert m0[0] - m1[0] == pytest.approx(2.0, abs=0.15)
        assert m1[1] - m0[1] == pytest.approx(2.0, abs=0.15)

    def test_split_stratified_and_disjoint(self):
        labels = np.repeat([0, 1, 2], 50)
        tr, va, te = random_split(labels, 0.1, 0.1, seed=21)
        assert not np.any(tr & va) and not np.any(tr & te) and not np.any(va & te)
        assert np.all(tr | va | te)
        assert set(np.unique(labels[tr])) == {0, 1, 2}

    def test_split_fraction_validation(self):
        with pytest.raises(ConfigError):
            random_split(np.zeros(10, dtype=int), 0.8, 0.3, seed=0)
