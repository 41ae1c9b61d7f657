# -*- coding: utf-8 -*-
"""
HTAK 核：快速路径与对应矩阵计数一致、半正定、置换不变、随 H 单调
"""
import numpy as np
import pytest

from src.alignment import align_graph
from src.config_manager import RunConfig, MODE_SWEEP
from src.dataset_loader import make_collection
from src.errors import ArgumentError
from src.kernel import (htak_pair_fast, htak_pair_direct, feature_matrix, gram_from_banks,
                        check_gram)
from src.models import AssignmentVector, FeatureBank, Graph, GraphCollection, GramMatrix
from src.pipeline import HtakPipeline, gram_matrix
from tests.helpers import random_graphs


def bank(counts, fingerprint="f", graph_id=0) -> FeatureBank:
    return FeatureBank(graph_id=graph_id,
                       counts={lvl: np.asarray(c, dtype=np.int64) for lvl, c in counts.items()},
                       fingerprint=fingerprint)


@pytest.fixture(scope="module")
def random_run():
    collection = make_collection(random_graphs(24, seed=2024), "rand")
    config = RunConfig(H=5, ratio=0.2, seed=42, mode=MODE_SWEEP)
    return HtakPipeline(config).run(collection)


class TestPairKernel:

    def test_dot_product(self):
        assert htak_pair_fast(bank({(1, 1): [2, 1]}), bank({(1, 1): [0, 3]})) == 3

    def test_self_kernel_is_squared_norm(self):
        fp = bank({(1, 1): [2, 1], (2, 1): [3], (1, 2): [0, 4]})
        assert htak_pair_fast(fp, fp) == 4 + 1 + 9 + 16

    def test_height_limit(self):
        fp = bank({(1, 1): [1], (2, 1): [5]})
        assert htak_pair_fast(fp, fp, H=1) == 1

    def test_zero_graph(self):
        zero = bank({(1, 1): [0, 0]})
        assert htak_pair_fast(zero, bank({(1, 1): [7, 2]})) == 0

    def test_fingerprint_mismatch(self):
        with pytest.raises(ArgumentError):
            htak_pair_fast(bank({(1, 1): [1]}, "a"), bank({(1, 1): [1]}, "b"))

    def test_level_mismatch(self):
        with pytest.raises(ArgumentError):
            htak_pair_fast(bank({(1, 1): [1]}), bank({(2, 1): [1]}))

    def test_direct_all_shared(self):
        H, K = 3, 2
        vectors = [AssignmentVector(graph_id=0, level=(h, k), assigned=np.array([0]), n_prototypes=1)
                   for h in range(1, H + 1) for k in range(1, K + 1)]
        assert htak_pair_direct(vectors, vectors) == H * K

    def test_direct_no_overlap(self):
        a = [AssignmentVector(graph_id=0, level=(1, 1), assigned=np.array([0, 0]), n_prototypes=2)]
        b = [AssignmentVector(graph_id=1, level=(1, 1), assigned=np.array([1]), n_prototypes=2)]
        assert htak_pair_direct(a, b) == 0

    def test_fast_equals_direct(self, random_run):
        """200 个随机图对上两种计算精确相等"""
        assignments = [align_graph(t, random_run.hierarchies) for t in random_run.tables]
        rng = np.random.default_rng(200)
        T = len(random_run.banks)
        for _ in range(200):
            p, q = (int(x) for x in rng.integers(0, T, size=2))
            for H in (1, 3, 5):
                fast = htak_pair_fast(random_run.banks[p], random_run.banks[q], H)
                direct = htak_pair_direct(assignments[p], assignments[q], H)
                assert fast == direct
                assert random_run.grams[H - 1].values[p, q] == fast


class TestGram:

    def test_feature_matrix_empty(self):
        with pytest.raises(ArgumentError):
            feature_matrix([])

    def test_gram_is_integer_and_symmetric(self, random_run):
        for gram in random_run.grams:
            assert gram.values.dtype == np.int64
            assert np.array_equal(gram.values, gram.values.T)

    def test_sweep_heights(self, random_run):
        assert [g.height for g in random_run.grams] == [1, 2, 3, 4, 5]
        assert all(g.meta['fingerprint'] == random_run.fingerprint for g in random_run.grams)

    def test_self_kernel_scale_bound(self, random_run):
        """0 <= k(G,G) <= H * K * |V|^2"""
        sizes = np.array([g.vertex_count for g in random_run.collection], dtype=np.int64)
        for gram in random_run.grams:
            diag = np.diag(gram.values)
            assert (diag >= 0).all()
            assert (diag <= gram.height * random_run.K * sizes ** 2).all()

    def test_monotone_in_height(self, random_run):
        for lower, upper in zip(random_run.grams, random_run.grams[1:]):
            assert (upper.values >= lower.values).all()

    def test_psd_on_hundred_graphs(self):
        collection = make_collection(random_graphs(100, seed=99), "psd")
        grams = gram_matrix(collection, H=5, mode=MODE_SWEEP)
        assert len(grams) == 5
        for gram in grams:
            report = check_gram(gram.values)
            assert report.symmetric
            assert report.psd
            assert report.cauchy_schwarz_violations == 0

    def test_isomorphic_graphs(self, cycle5):
        twin = Graph.from_edges(5, cycle5.permuted([2, 4, 1, 0, 3]).edges(), graph_id=1)
        path = Graph.from_edges(4, [(0, 1), (1, 2), (2, 3)], graph_id=2)
        collection = make_collection([cycle5, twin, path], "iso")
        for mode in ("single-H", "sweep"):
            for gram in gram_matrix(collection, H=3, mode=mode):
                values = gram.values
                assert values[0, 1] == values[0, 0] == values[1, 1]

    def test_single_graph(self, p4):
        grams = gram_matrix(make_collection([p4], "one"), H=2)
        assert len(grams) == 1
        assert grams[0].values.shape == (1, 1)
        assert grams[0].values[0, 0] >= 0

    def test_graph_without_valid_vertices(self, triangle):
        lonely = Graph.from_edges(1, [], graph_id=0)
        other = Graph.from_edges(3, triangle.edges(), graph_id=1)
        gram = gram_matrix(make_collection([lonely, other], "z"), H=2)[0]
        assert gram.values[0].tolist() == [0, 0]

    def test_empty_collection(self):
        with pytest.raises(ArgumentError):
            gram_matrix(GraphCollection(graphs=(), name="empty"))

    def test_relabeling_gives_identical_gram(self):
        graphs = random_graphs(20, seed=77)
        rng = np.random.default_rng(77)
        permuted = [g.permuted(rng.permutation(g.vertex_count)) for g in graphs]
        a = gram_matrix(make_collection(graphs, "a"), H=5)[0]
        b = gram_matrix(make_collection(permuted, "b"), H=5)[0]
        assert np.array_equal(a.values, b.values)

    def test_threads_give_identical_gram(self):
        collection = make_collection(random_graphs(20, seed=78), "t")
        a = gram_matrix(collection, H=3, threads=1)[0]
        b = gram_matrix(collection, H=3, threads=4)[0]
        assert np.array_equal(a.values, b.values)

    def test_gram_from_banks_meta(self):
        banks = [bank({(1, 1): [1, 0]}, graph_id=0), bank({(1, 1): [1, 2]}, graph_id=1)]
        gram = gram_from_banks(banks, 1, {'dataset': 'x'})
        assert gram.values.tolist() == [[1, 1], [1, 5]]
        assert gram.meta == {'dataset': 'x', 'H': 1}

    def test_normalized(self):
        gram = GramMatrix(values=np.array([[4, 2, 0], [2, 9, 0], [0, 0, 0]]), meta={'H': 1})
        normalized = gram.normalized()
        np.testing.assert_allclose(normalized.values,
                                   [[1.0, 2.0 / 6.0, 0.0], [2.0 / 6.0, 1.0, 0.0], [0.0, 0.0, 0.0]])
        assert normalized.meta['normalized'] is True


class TestCheckGram:

    def test_identity(self):
        report = check_gram(np.eye(3))
        assert report.ok
        assert report.min_eigenvalue == pytest.approx(1.0)

    def test_non_symmetric(self):
        report = check_gram(np.array([[1.0, 0.5], [0.0, 1.0]]))
        assert not report.symmetric
        assert not report.ok

    def test_negative_single_entry(self):
        report = check_gram(np.array([[-1.0]]))
        assert not report.psd

    def test_cauchy_schwarz_violation(self):
        report = check_gram(np.array([[1.0, 2.0], [2.0, 1.0]]))
        assert report.cauchy_schwarz_violations == 1
        assert not report.psd

    def test_not_square(self):
        with pytest.raises(ArgumentError):
            check_gram(np.zeros((2, 3)))

    def test_to_dict(self):
        data = check_gram(np.eye(2)).to_dict()
        assert data['ok'] is True
        assert data['size'] == 2
