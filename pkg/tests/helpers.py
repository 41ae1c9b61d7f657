# -*- coding: utf-8 -*-
"""
测试辅助函数
"""
import os
from pathlib import Path

import networkx as nx
import numpy as np
import pytest

from src.models import Graph

MUTAG_DIR = os.environ.get("HTAK_MUTAG_DIR", "")

requires_mutag = pytest.mark.skipif(
    not (MUTAG_DIR and Path(MUTAG_DIR, "MUTAG_A.txt").is_file()),
    reason="设置 HTAK_MUTAG_DIR 指向 TU MUTAG 目录后运行")


def random_graphs(count: int, seed: int, n_min: int = 4, n_max: int = 12,
                  p_min: float = 0.3, p_max: float = 0.6, labeled: bool = False):
    """networkx gnp 随机图族，顶点数与边概率按种子抽取"""
    rng = np.random.default_rng(seed)
    graphs = []
    for gid in range(count):
        n = int(rng.integers(n_min, n_max + 1))
        p = float(rng.uniform(p_min, p_max))
        nx_graph = nx.gnp_random_graph(n, p, seed=int(rng.integers(0, 2 ** 31)))
        label = gid % 2 if labeled else None
        graphs.append(Graph.from_networkx(nx_graph, graph_id=gid, label=label))
    return graphs
