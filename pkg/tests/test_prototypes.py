# -*- coding: utf-8 -*-
"""
κ-means 与层次原型
"""
import itertools

import numpy as np
import pytest

from src.db_repr import db_tables
from src.errors import ArgumentError
from src.models import PointSet
from src.prototypes import (kmeans, level_size, level_sizes, level0_points, build_hierarchy,
                            build_hierarchies)
from tests.helpers import random_graphs


def sse(points: np.ndarray, labels: np.ndarray) -> float:
    total = 0.0
    for j in np.unique(labels):
        members = points[labels == j]
        total += float(((members - members.mean(axis=0)) ** 2).sum())
    return total


def best_linear_split(points: np.ndarray) -> float:
    """二维点集的最优 2-划分：最优划分线性可分，枚举过两点的直线"""
    n = len(points)
    best = np.inf
    for i, j in itertools.combinations(range(n), 2):
        direction = points[j] - points[i]
        normal = np.array([-direction[1], direction[0]])
        side = (points - points[i]) @ normal > 0
        for a, b in itertools.product([False, True], repeat=2):
            labels = side.copy()
            labels[i], labels[j] = a, b
            if labels.all() or not labels.any():
                continue
            best = min(best, sse(points, labels.astype(int)))
    return best


class TestKmeans:

    def test_identical_points(self):
        points = PointSet(dim=2, points=np.tile([3.0, -1.0], (4, 1)))
        result = kmeans(points, 1, seed=0)
        np.testing.assert_array_equal(result.centroids, [[3.0, -1.0]])
        assert result.objective == 0.0

    def test_two_clear_clusters(self):
        points = PointSet(dim=2, points=[[0, 0], [0, 1], [10, 0], [10, 1]])
        result = kmeans(points, 2, seed=1, n_init=10)
        centroids = sorted(map(tuple, result.centroids))
        assert centroids == [(0.0, 0.5), (10.0, 0.5)]
        assert result.objective == pytest.approx(1.0)

    def test_one_centroid_per_point(self):
        rng = np.random.default_rng(0)
        data = rng.normal(size=(12, 3))
        result = kmeans(PointSet(dim=3, points=data), 12, seed=4)
        assert result.objective == 0.0
        assert sorted(result.assignment.tolist()) == list(range(12))

    def test_objective_matches_assignment(self):
        rng = np.random.default_rng(2)
        data = rng.uniform(size=(60, 2))
        result = kmeans(PointSet(dim=2, points=data), 5, seed=9)
        assert result.assignment.min() >= 0 and result.assignment.max() < 5
        diff = data - result.centroids[result.assignment]
        assert result.objective == pytest.approx(float((diff ** 2).sum()), rel=1e-12)
        assert all(b <= a * (1 + 1e-12) + 1e-12 for a, b in zip(result.history, result.history[1:]))

    def test_not_better_than_global_optimum(self):
        rng = np.random.default_rng(30)
        data = rng.uniform(size=(30, 2))
        optimum = best_linear_split(data)
        for seed in range(5):
            result = kmeans(PointSet(dim=2, points=data), 2, seed=seed)
            assert result.objective >= optimum - 1e-9

    def test_reaches_optimum_on_blobs(self):
        rng = np.random.default_rng(31)
        data = np.vstack([rng.normal(0.0, 0.5, size=(15, 2)), rng.normal(4.0, 0.5, size=(15, 2))])
        optimum = best_linear_split(data)
        result = kmeans(PointSet(dim=2, points=data), 2, seed=3, n_init=5)
        assert result.objective == pytest.approx(optimum, rel=1e-9)

    def test_collinear_points(self):
        data = np.arange(10, dtype=float).reshape(-1, 1)
        optimum = min(sse(data, (np.arange(10) > s).astype(int)) for s in range(9))
        assert optimum == pytest.approx(20.0)
        result = kmeans(PointSet(dim=1, points=data), 2, seed=0, n_init=10)
        assert result.objective == pytest.approx(optimum)

    def test_same_seed_same_centroids(self):
        data = np.random.default_rng(8).uniform(size=(30, 2))
        a = kmeans(PointSet(dim=2, points=data), 2, seed=42)
        b = kmeans(PointSet(dim=2, points=data), 2, seed=42)
        assert np.array_equal(a.centroids, b.centroids)
        assert np.array_equal(a.assignment, b.assignment)

    def test_chunk_size_does_not_change_result(self):
        data = np.random.default_rng(3).uniform(size=(50, 2))
        a = kmeans(PointSet(dim=2, points=data), 4, seed=1, chunk_size=7)
        b = kmeans(PointSet(dim=2, points=data), 4, seed=1)
        assert np.array_equal(a.centroids, b.centroids)

    @pytest.mark.parametrize("kappa", [0, 5])
    def test_bad_kappa(self, kappa):
        with pytest.raises(ArgumentError):
            kmeans(PointSet(dim=1, points=[[0.0], [1.0], [2.0], [3.0]]), kappa)

    def test_empty_points(self):
        with pytest.raises(ArgumentError):
            kmeans(PointSet(dim=2, points=np.zeros((0, 2))), 1)


class TestHierarchy:

    def test_level_size_law(self):
        assert level_sizes(100, 5, 0.2) == [20, 4, 1, 1, 1]
        assert level_size(1, 0.2) == 1
        assert level_size(10, 0.25) == 3

    def test_hundred_points(self):
        data = np.random.default_rng(4).uniform(size=(100, 2))
        hierarchy = build_hierarchy(PointSet(dim=2, points=data), 5, 0.2, seed=42)
        assert hierarchy.level_sizes == [20, 4, 1, 1, 1]
        assert hierarchy.height == 5
        assert len(hierarchy.objectives) == 5

    def test_single_point(self):
        point = np.array([[0.5, 1.5, 2.5]])
        hierarchy = build_hierarchy(PointSet(dim=3, points=point), 3, 0.2, seed=0)
        assert hierarchy.level_sizes == [1, 1, 1]
        for h in range(1, 4):
            np.testing.assert_array_equal(hierarchy.level(h), point)

    def test_collinear_one_level(self):
        data = np.arange(10, dtype=float).reshape(-1, 1)
        hierarchy = build_hierarchy(PointSet(dim=1, points=data), 1, 0.2, seed=0)
        assert hierarchy.level_sizes == [2]
        assert hierarchy.objectives[0] >= 20.0 - 1e-9

    def test_centroids_inside_bounding_box(self):
        data = np.random.default_rng(6).normal(size=(80, 3))
        hierarchy = build_hierarchy(PointSet(dim=3, points=data), 3, 0.3, seed=1)
        previous = data
        for level in hierarchy.levels:
            assert (level >= previous.min(axis=0) - 1e-12).all()
            assert (level <= previous.max(axis=0) + 1e-12).all()
            previous = level

    def test_level_out_of_range(self):
        hierarchy = build_hierarchy(PointSet(dim=1, points=[[0.0], [1.0]]), 2, 0.5, seed=0)
        with pytest.raises(ArgumentError):
            hierarchy.level(3)

    def test_bad_arguments(self):
        points = PointSet(dim=1, points=[[0.0], [1.0]])
        with pytest.raises(ArgumentError):
            build_hierarchy(points, 0, 0.2, seed=0)
        with pytest.raises(ArgumentError):
            build_hierarchy(points, 2, 1.0, seed=0)
        with pytest.raises(ArgumentError):
            build_hierarchy(PointSet(dim=1, points=np.zeros((0, 1))), 2, 0.2, seed=0)

    def test_level0_points(self, p4, triangle):
        tables = db_tables([p4, triangle], 2)
        level0 = level0_points(tables, 2)
        # P4 的 4 个顶点在深度 2 都有效，三角形没有
        assert len(level0) == 4
        assert level0.dim == 2
        assert np.array_equal(level0.points, level0.points[np.lexsort(level0.points.T[::-1])])
        assert sorted(map(tuple, level0.origin.tolist())) == [(0, 0), (0, 1), (0, 2), (0, 3)]

    def test_skips_depth_without_points(self, triangle):
        tables = db_tables([triangle], 2)
        hierarchies = build_hierarchies(tables, 2, 3, 0.2, seed=0)
        assert sorted(hierarchies) == [1]

    def test_relabeling_gives_same_hierarchies(self):
        graphs = random_graphs(12, seed=21)
        rng = np.random.default_rng(0)
        permuted = [g.permuted(rng.permutation(g.vertex_count)) for g in graphs]
        a = build_hierarchies(db_tables(graphs, 3), 3, 3, 0.2, seed=42)
        b = build_hierarchies(db_tables(permuted, 3), 3, 3, 0.2, seed=42)
        assert sorted(a) == sorted(b)
        for k in a:
            assert a[k].fingerprint() == b[k].fingerprint()

    def test_threads_do_not_change_hierarchies(self):
        tables = db_tables(random_graphs(12, seed=22), 3)
        a = build_hierarchies(tables, 3, 3, 0.2, seed=1, threads=1)
        b = build_hierarchies(tables, 3, 3, 0.2, seed=1, threads=4)
        assert {k: h.fingerprint() for k, h in a.items()} == {k: h.fingerprint() for k, h in b.items()}
