# -*- coding: utf-8 -*-
"""
层次原型表示

对每个深度 k，把所有图的有效 k 维前缀作为第0层，再逐层用 κ-means 求质心：
第 h 层是在第 h-1 层上聚出的 N_h 个均值，N_h = max(1, round(ratio * N_{h-1}))。
"""
import logging
import math
from concurrent.futures import ThreadPoolExecutor
from typing import List, Optional, Sequence, Dict

import numpy as np
from scipy.spatial.distance import cdist

from .errors import ArgumentError
from .models import DbTable, PointSet, KmeansResult, PrototypeHierarchy

logger = logging.getLogger(__name__)

DEFAULT_MAX_ITER = 100
DEFAULT_CHUNK_SIZE = 4096
RELATIVE_TOL = 1e-9


def level_size(previous: int, ratio: float) -> int:
    """N_h = max(1, round_half_up(ratio * N_{h-1}))"""
    return max(1, int(math.floor(ratio * previous + 0.5)))


def level_sizes(n0: int, height: int, ratio: float) -> List[int]:
    sizes, previous = [], n0
    for _ in range(height):
        previous = level_size(previous, ratio)
        sizes.append(previous)
    return sizes


def level_rng(seed: int, k: int, h: int) -> np.random.Generator:
    """由 (seed, k, h) 确定的随机数发生器"""
    return np.random.default_rng(np.random.SeedSequence([seed, k, h]))


def _nearest(points: np.ndarray, centroids: np.ndarray, chunk_size: int):
    """按点的顺序分块求最近质心；并列时取下标最小者"""
    labels = np.empty(points.shape[0], dtype=np.int64)
    for start in range(0, points.shape[0], chunk_size):
        block = cdist(points[start:start + chunk_size], centroids, 'sqeuclidean')
        labels[start:start + chunk_size] = np.argmin(block, axis=1)
    return labels


def _objective(points: np.ndarray, centroids: np.ndarray, labels: np.ndarray) -> float:
    diff = points - centroids[labels]
    return float(np.einsum('ij,ij->', diff, diff))


def _update(points: np.ndarray, labels: np.ndarray, kappa: int, previous: np.ndarray) -> np.ndarray:
    """质心取簇均值；求和用 bincount，按点的顺序累加"""
    counts = np.bincount(labels, minlength=kappa)
    centroids = previous.copy()
    occupied = counts > 0
    for d in range(points.shape[1]):
        sums = np.bincount(labels, weights=points[:, d], minlength=kappa)
        centroids[occupied, d] = sums[occupied] / counts[occupied]
    return centroids


def kmeans_plusplus(points: np.ndarray, kappa: int, rng: np.random.Generator) -> np.ndarray:
    """k-means++ 初始化"""
    n = points.shape[0]
    centroids = np.empty((kappa, points.shape[1]), dtype=np.float64)
    centroids[0] = points[rng.integers(0, n)]
    closest = cdist(points, centroids[:1], 'sqeuclidean')[:, 0]
    for j in range(1, kappa):
        total = closest.sum()
        if total > 0:
            index = rng.choice(n, p=closest / total)
        else:
            # 剩下的点都与已有质心重合
            index = rng.integers(0, n)
        centroids[j] = points[index]
        np.minimum(closest, cdist(points, centroids[j:j + 1], 'sqeuclidean')[:, 0], out=closest)
    return centroids


def _lloyd(X: np.ndarray, kappa: int, rng: np.random.Generator, max_iter: int,
           chunk_size: int) -> KmeansResult:
    centroids = kmeans_plusplus(X, kappa, rng)
    labels = _nearest(X, centroids, chunk_size)
    objective = _objective(X, centroids, labels)
    history = [objective]
    iterations = 0

    while iterations < max_iter and objective > 0:
        iterations += 1
        centroids = _update(X, labels, kappa, centroids)

        empty = np.flatnonzero(np.bincount(labels, minlength=kappa) == 0)
        if empty.size:
            # 空簇：依次移到离自身质心最远的点上
            residual = X - centroids[labels]
            spread = np.einsum('ij,ij->i', residual, residual)
            for j in empty:
                far = int(np.argmax(spread))
                centroids[j] = X[far]
                spread[far] = -1.0

        labels = _nearest(X, centroids, chunk_size)
        current = _objective(X, centroids, labels)
        assert current <= objective * (1 + 1e-12) + 1e-12, \
            f"目标函数上升: {objective} -> {current}"
        history.append(current)
        improved = objective - current
        objective = current
        if improved <= RELATIVE_TOL * history[-2]:
            break

    # 最终质心为最终分配的簇均值（非空簇）
    final = _update(X, labels, kappa, centroids)
    final_objective = _objective(X, final, labels)
    if final_objective <= objective:
        centroids, objective = final, final_objective

    return KmeansResult(centroids=centroids, assignment=labels, objective=objective,
                        iterations=iterations, history=history)


def kmeans(points: PointSet, kappa: int, seed: int = 0, max_iter: int = DEFAULT_MAX_ITER,
           rng: Optional[np.random.Generator] = None,
           chunk_size: int = DEFAULT_CHUNK_SIZE, n_init: int = 1) -> KmeansResult:
    """
    Lloyd 迭代 + k-means++ 初始化

    Args:
        points: 点集
        kappa: 簇数
        seed: 随机种子（未传 rng 时使用）
        max_iter: 最大迭代次数
        rng: 可选的随机数发生器
        chunk_size: 分配步骤的分块大小
        n_init: 重启次数，取目标函数最小的一次（并列取最早的）

    Returns:
        KmeansResult，objective 为按最终分配计算的簇内平方和
    """
    X = points.points
    n = X.shape[0]
    if n < 1:
        raise ArgumentError("点集为空")
    if kappa < 1:
        raise ArgumentError(f"kappa 必须 >= 1: {kappa}")
    if kappa > n:
        raise ArgumentError(f"kappa={kappa} 大于点数 {n}")
    if max_iter < 1 or n_init < 1:
        raise ArgumentError(f"max_iter 与 n_init 必须 >= 1: {max_iter}, {n_init}")
    if rng is None:
        rng = np.random.default_rng(seed)

    best = None
    for _ in range(n_init):
        result = _lloyd(X, kappa, rng, max_iter, chunk_size)
        if best is None or result.objective < best.objective:
            best = result
    return best


def level0_points(tables: Sequence[DbTable], k: int) -> PointSet:
    """
    深度 k 的第0层点集：所有图中有效顶点的 k 维前缀

    点按坐标字典序排序，使层次只取决于点的多重集合。
    """
    blocks, origins = [], []
    for table in tables:
        if k > table.depth:
            raise ArgumentError(f"深度 {k} 超出 DbTable 的列数 {table.depth}")
        rows = table.valid_rows(k)
        blocks.append(table.prefixes(k))
        origins.append(np.column_stack([np.full(rows.size, table.graph_id, dtype=np.int64), rows]))
    points = np.vstack(blocks) if blocks else np.zeros((0, k))
    origin = np.vstack(origins) if origins else np.zeros((0, 2), dtype=np.int64)
    order = np.lexsort(points.T[::-1]) if points.shape[0] else np.zeros(0, dtype=np.int64)
    return PointSet(dim=k, points=points[order], origin=origin[order])


def build_hierarchy(level0: PointSet, H: int, ratio: float, seed: int,
                    max_iter: int = DEFAULT_MAX_ITER,
                    chunk_size: int = DEFAULT_CHUNK_SIZE) -> PrototypeHierarchy:
    """第 h 层为第 h-1 层上 κ = N_h 的 κ-means 质心"""
    if len(level0) == 0:
        raise ArgumentError(f"深度 {level0.dim} 的第0层点集为空")
    if H < 1:
        raise ArgumentError(f"H 必须 >= 1: {H}")
    if not 0 < ratio < 1:
        raise ArgumentError(f"ratio 必须在 (0, 1) 内: {ratio}")

    k = level0.dim
    levels, objectives = [], []
    current = level0
    for h in range(1, H + 1):
        kappa = level_size(len(current), ratio)
        result = kmeans(current, kappa, max_iter=max_iter, rng=level_rng(seed, k, h),
                        chunk_size=chunk_size)
        levels.append(result.centroids)
        objectives.append(result.objective)
        current = PointSet(dim=k, points=result.centroids)
    return PrototypeHierarchy(dim=k, levels=levels, seed=seed, ratio=ratio, objectives=objectives)


def build_hierarchies(tables: Sequence[DbTable], K: int, H: int, ratio: float, seed: int,
                      max_iter: int = DEFAULT_MAX_ITER, chunk_size: int = DEFAULT_CHUNK_SIZE,
                      threads: Optional[int] = None) -> Dict[int, PrototypeHierarchy]:
    """
    对 k = 1..K 各建一个层次；某个深度上没有有效顶点时跳过该深度

    Returns:
        {k: PrototypeHierarchy}
    """
    def build(k: int) -> Optional[PrototypeHierarchy]:
        level0 = level0_points(tables, k)
        if len(level0) == 0:
            logger.warning("深度 k=%d 没有有效顶点，跳过", k)
            return None
        hierarchy = build_hierarchy(level0, H, ratio, seed, max_iter, chunk_size)
        logger.debug("k=%d N0=%d 层大小=%s", k, len(level0), hierarchy.level_sizes)
        return hierarchy

    with ThreadPoolExecutor(max_workers=threads) as pool:
        built = list(pool.map(build, range(1, K + 1)))
    return {k: h for k, h in zip(range(1, K + 1), built) if h is not None}
