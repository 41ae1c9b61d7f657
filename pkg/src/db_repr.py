# -*- coding: utf-8 -*-
"""
顶点的深度表示（DB 表示）

顶点 i 的第 k 维是其 k 层扩展子图在稳态随机游走下的 Shannon 熵（自然对数）。
"""
import logging
from concurrent.futures import ThreadPoolExecutor
from typing import List, Optional, Sequence

import numpy as np
from scipy.stats import entropy

from .errors import ArgumentError
from .models import Graph, DbTable, LayerSet, UNREACHABLE
from .shortest_paths import bfs_distances, distance_matrix

logger = logging.getLogger(__name__)


def degree_entropy(degrees: np.ndarray) -> float:
    """
    度分布 p(v) = deg(v)/D 的熵；D = 0 时为0

    度向量先排序，使结果只依赖度的多重集合，与顶点编号无关。
    """
    degrees = np.sort(np.asarray(degrees, dtype=np.float64))
    degrees = degrees[degrees > 0]
    if degrees.size == 0:
        return 0.0
    return float(entropy(degrees))


def steady_state_entropy(graph: Graph) -> float:
    """图在稳态随机游走下的 Shannon 熵（nats）"""
    return degree_entropy(graph.degrees())


def layer_set(graph: Graph, root: int, radius: int) -> LayerSet:
    """距离 root 不超过 radius 的顶点集合，以及距离恰为 radius 的壳层"""
    if radius < 1:
        raise ArgumentError(f"半径必须 >= 1: {radius}")
    distances = bfs_distances(graph, root).distances
    reachable = distances != UNREACHABLE
    members = np.flatnonzero(reachable & (distances <= radius))
    shell = np.flatnonzero(distances == radius)
    return LayerSet(root=root, radius=radius,
                    members=frozenset(members.tolist()), shell=frozenset(shell.tolist()))


def expansion_subgraph(graph: Graph, root: int, radius: int) -> Graph:
    """root 的 radius 层扩展子图（层集合上的顶点诱导子图）"""
    return graph.induced_subgraph(layer_set(graph, root, radius).members)


def _edge_endpoints(graph: Graph):
    """CSR 形式的有向边端点（每条无向边两次）"""
    csr = graph.to_csr()
    sources = np.repeat(np.arange(graph.vertex_count), np.diff(csr.indptr))
    return sources, csr.indices.astype(np.int64)


def db_table(graph: Graph, K: int, distances: Optional[np.ndarray] = None) -> DbTable:
    """
    计算单个图的 DbTable

    每个根只做一次 BFS：一条边在其两端点到根的距离的较大者这一层首次进入扩展子图，
    所以各层的子图度数可以由同一行距离逐层累加得到。

    Args:
        graph: 图
        K: 最大深度
        distances: 可选的预先计算好的全源距离矩阵
    """
    if K < 1:
        raise ArgumentError(f"K 必须 >= 1: {K}")
    n = graph.vertex_count
    entropies = np.full((n, K), np.nan, dtype=np.float64)
    valid = np.zeros((n, K), dtype=bool)
    if n == 0:
        return DbTable(graph_id=graph.id, entropies=entropies, valid=valid)

    if distances is None:
        distances = distance_matrix(graph)
    sources, targets = _edge_endpoints(graph)

    for root in range(n):
        row = distances[root]
        eccentricity = int(row.max(initial=0))
        depth = min(K, eccentricity)
        if depth == 0:
            continue
        # 不可达顶点没有进入层
        reach_s, reach_t = row[sources], row[targets]
        inside = (reach_s != UNREACHABLE) & (reach_t != UNREACHABLE)
        entry = np.maximum(reach_s, reach_t)[inside]
        owners = sources[inside]
        order = np.argsort(entry, kind='stable')
        entry, owners = entry[order], owners[order]
        bounds = np.searchsorted(entry, np.arange(1, depth + 1), side='right')

        degrees = np.zeros(n, dtype=np.int64)
        start = 0
        for k in range(1, depth + 1):
            stop = bounds[k - 1]
            np.add.at(degrees, owners[start:stop], 1)
            start = stop
            entropies[root, k - 1] = degree_entropy(degrees)
            valid[root, k - 1] = True

    return DbTable(graph_id=graph.id, entropies=entropies, valid=valid)


def db_tables(graphs: Sequence[Graph], K: int, threads: Optional[int] = None) -> List[DbTable]:
    """并发计算多个图的 DbTable，结果顺序与输入一致"""
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(lambda g: db_table(g, K), graphs))
