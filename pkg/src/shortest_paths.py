# -*- coding: utf-8 -*-
"""
最短路计算

无权图上的 BFS 跳数，跨连通分量为不可达。
"""
import logging
from concurrent.futures import ThreadPoolExecutor
from typing import Iterable, Optional

import numpy as np
from scipy.sparse.csgraph import shortest_path

from .errors import ArgumentError
from .models import Graph, DistanceRow, UNREACHABLE

logger = logging.getLogger(__name__)


def _to_hops(raw: np.ndarray) -> np.ndarray:
    """csgraph 返回浮点且不可达为 inf，转换为整数跳数"""
    hops = np.full(raw.shape, UNREACHABLE, dtype=np.int64)
    finite = np.isfinite(raw)
    hops[finite] = raw[finite].astype(np.int64)
    return hops


def bfs_distances(graph: Graph, source: int) -> DistanceRow:
    """单源 BFS 跳数"""
    if not 0 <= source < graph.vertex_count:
        raise ArgumentError(f"源点 {source} 越界，顶点数为 {graph.vertex_count}")
    raw = shortest_path(graph.to_csr(), method='D', directed=False,
                        unweighted=True, indices=source)
    return DistanceRow(source=source, distances=_to_hops(raw))


def distance_matrix(graph: Graph) -> np.ndarray:
    """全源 BFS 距离矩阵，形状 (n, n)，不可达为 UNREACHABLE"""
    if graph.vertex_count == 0:
        return np.zeros((0, 0), dtype=np.int64)
    raw = shortest_path(graph.to_csr(), method='D', directed=False, unweighted=True)
    return _to_hops(raw)


def graph_diameter(graph: Graph) -> int:
    """各连通分量直径的最大值；无边图为0"""
    if graph.vertex_count == 0:
        return 0
    return int(distance_matrix(graph).max(initial=0))


def compute_global_k(graphs: Iterable[Graph], cap: Optional[int] = None,
                     threads: Optional[int] = None) -> int:
    """
    所有图中最长的有限最短路长度 K

    Args:
        graphs: 图序列
        cap: 可选上限，结果取 min(K, cap)
        threads: 并发线程数

    Raises:
        ArgumentError: 集合为空、所有图都没有边，或 cap < 1
    """
    graphs = list(graphs)
    if not graphs:
        raise ArgumentError("图集合为空")
    if cap is not None and cap < 1:
        raise ArgumentError(f"max_k 必须为正整数: {cap}")

    with ThreadPoolExecutor(max_workers=threads) as pool:
        diameters = list(pool.map(graph_diameter, graphs))

    global_k = max(diameters)
    if global_k < 1:
        raise ArgumentError("no finite eccentricity: 所有图都没有边")
    if cap is not None and cap < global_k:
        logger.info("global_k=%d 被 max_k 截断为 %d", global_k, cap)
        return cap
    return global_k
