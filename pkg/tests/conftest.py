# -*- coding: utf-8 -*-
"""
测试公共夹具
"""
import os
import sys
from pathlib import Path

import networkx as nx
import pytest

# 确保可以导入src模块
sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from src.dataset_loader import make_collection, write_tu_dataset  # noqa: E402
from src.models import Graph  # noqa: E402
from tests.helpers import random_graphs  # noqa: E402


@pytest.fixture
def triangle():
    return Graph.from_edges(3, [(0, 1), (1, 2), (0, 2)])


@pytest.fixture
def p3():
    return Graph.from_edges(3, [(0, 1), (1, 2)])


@pytest.fixture
def p4():
    return Graph.from_edges(4, [(0, 1), (1, 2), (2, 3)])


@pytest.fixture
def cycle5():
    return Graph.from_networkx(nx.cycle_graph(5))


@pytest.fixture
def two_edges():
    return Graph.from_edges(4, [(0, 1), (2, 3)])


@pytest.fixture
def random_family():
    return random_graphs(24, seed=7)


@pytest.fixture
def labeled_collection():
    """两类各 8 个图：环与星"""
    graphs = []
    for gid in range(16):
        n = 5 + gid // 2
        nx_graph = nx.cycle_graph(n) if gid % 2 == 0 else nx.star_graph(n - 1)
        graphs.append(Graph.from_networkx(nx_graph, graph_id=gid, label=gid % 2))
    return make_collection(graphs, "toy")


@pytest.fixture
def tu_writer(tmp_path):
    """把 {后缀: 行列表} 写成 TU 文件，返回目录"""
    def write(prefix: str, files: dict) -> Path:
        for suffix, lines in files.items():
            path = tmp_path / f"{prefix}_{suffix}.txt"
            path.write_text("".join(f"{line}\n" for line in lines), encoding="utf-8")
        return tmp_path
    return write


@pytest.fixture
def toy_dataset(tmp_path, labeled_collection):
    """写到磁盘的带标签小数据集"""
    directory = tmp_path / "toy"
    write_tu_dataset(labeled_collection, str(directory), "toy")
    return directory
