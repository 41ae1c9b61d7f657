# -*- coding: utf-8 -*-
"""
TU-Dortmund 数据集读写

读取 <prefix>_A.txt、<prefix>_graph_indicator.txt 与可选的 <prefix>_graph_labels.txt，
文件中的顶点编号均从1开始，内部统一从0开始。
"""
import logging
from pathlib import Path
from typing import List, Dict, Any, Optional, Callable, Tuple

import numpy as np
from scipy.sparse.csgraph import connected_components

from .errors import InputError, DatasetFormatError
from .models import Graph, GraphCollection, LoadReport
from .shortest_paths import compute_global_k

logger = logging.getLogger(__name__)

ProgressCallback = Callable[[int, int, str], None]

MANDATORY_SUFFIXES = ("A", "graph_indicator")
LABEL_SUFFIX = "graph_labels"


def _read_lines(file_path: Path) -> List[str]:
    """读取文本行，去掉末尾空行"""
    try:
        with open(file_path, 'r', encoding='utf-8') as f:
            content = f.read()
    except UnicodeDecodeError:
        with open(file_path, 'r', encoding='latin-1') as f:
            content = f.read()
    return content.rstrip().splitlines() if content.strip() else []


def _parse_int(token: str, file_name: str, line_number: int) -> int:
    try:
        return int(token.strip())
    except ValueError:
        raise DatasetFormatError(f"非整数字段 {token.strip()!r}", file_name, line_number) from None


def _parse_column(file_path: Path) -> List[int]:
    """每行一个整数的文件"""
    values = []
    for line_number, line in enumerate(_read_lines(file_path), start=1):
        if not line.strip():
            raise DatasetFormatError("空行", file_path.name, line_number)
        values.append(_parse_int(line, file_path.name, line_number))
    return values


def _parse_edges(file_path: Path, node_count: int) -> List[Tuple[int, int, int]]:
    """返回 (行号, i, j)，i/j 为从1开始的全局顶点编号"""
    edges = []
    for line_number, line in enumerate(_read_lines(file_path), start=1):
        tokens = line.split(',')
        if len(tokens) != 2:
            raise DatasetFormatError(f"边行应为 'i, j'，实际为 {line.strip()!r}",
                                     file_path.name, line_number)
        i = _parse_int(tokens[0], file_path.name, line_number)
        j = _parse_int(tokens[1], file_path.name, line_number)
        for node in (i, j):
            if not 1 <= node <= node_count:
                raise DatasetFormatError(f"顶点 {node} 不在 graph_indicator 中",
                                         file_path.name, line_number)
        edges.append((line_number, i, j))
    return edges


def make_collection(graphs: List[Graph], name: str,
                    report: Optional[LoadReport] = None,
                    threads: Optional[int] = None) -> GraphCollection:
    """构造图集合并计算 global_k"""
    global_k = compute_global_k(graphs, threads=threads)
    return GraphCollection(graphs=tuple(graphs), name=name, global_k=global_k,
                           report=report or LoadReport())


def load_tu_dataset(directory: str, prefix: str,
                    progress_callback: Optional[ProgressCallback] = None,
                    threads: Optional[int] = None) -> GraphCollection:
    """
    加载 TU 格式数据集

    Args:
        directory: 数据集目录
        prefix: 文件名前缀，例如 MUTAG
        progress_callback: 进度回调函数 (current, total, message)
        threads: 计算 global_k 时的并发线程数

    Returns:
        GraphCollection，global_k 为真实值（不截断）
    """
    directory = Path(directory)
    if not directory.is_dir():
        raise InputError(f"数据集目录不存在: {directory}", str(directory))

    paths = {suffix: directory / f"{prefix}_{suffix}.txt"
             for suffix in MANDATORY_SUFFIXES + (LABEL_SUFFIX,)}
    for suffix in MANDATORY_SUFFIXES:
        if not paths[suffix].is_file():
            raise InputError(f"缺少必需文件: {paths[suffix]}", str(paths[suffix]))

    report = LoadReport()
    known = {p.name for p in paths.values()}
    for extra in sorted(directory.glob(f"{prefix}_*.txt")):
        if extra.name not in known:
            report.ignored_files.append(extra.name)
    if report.ignored_files:
        logger.info("忽略属性文件: %s", ", ".join(report.ignored_files))

    steps = 4
    if progress_callback:
        progress_callback(1, steps, f"读取 {paths['graph_indicator'].name}")
    indicator = _parse_column(paths['graph_indicator'])
    for line_number, gid in enumerate(indicator, start=1):
        if gid < 1:
            raise DatasetFormatError(f"图编号必须从1开始: {gid}",
                                     paths['graph_indicator'].name, line_number)
    graph_count = max(indicator, default=0)

    # 全局顶点 -> (图, 图内编号)
    local_index = np.zeros(len(indicator), dtype=np.int64)
    sizes = [0] * graph_count
    for node, gid in enumerate(indicator):
        local_index[node] = sizes[gid - 1]
        sizes[gid - 1] += 1

    if progress_callback:
        progress_callback(2, steps, f"读取 {paths['A'].name}")
    raw_edges = _parse_edges(paths['A'], len(indicator))

    seen_ordered = set()
    per_graph: List[List[Tuple[int, int]]] = [[] for _ in range(graph_count)]
    for line_number, i, j in raw_edges:
        gi, gj = indicator[i - 1], indicator[j - 1]
        if gi != gj:
            raise DatasetFormatError(f"边 ({i}, {j}) 跨越图 {gi} 和 {gj}",
                                     paths['A'].name, line_number)
        if i == j:
            report.self_loops_dropped += 1
            continue
        if (i, j) in seen_ordered:
            report.duplicate_edges_dropped += 1
            continue
        seen_ordered.add((i, j))
        per_graph[gi - 1].append((int(local_index[i - 1]), int(local_index[j - 1])))

    labels: List[Optional[int]] = [None] * graph_count
    if paths[LABEL_SUFFIX].is_file():
        if progress_callback:
            progress_callback(3, steps, f"读取 {paths[LABEL_SUFFIX].name}")
        parsed = _parse_column(paths[LABEL_SUFFIX])
        if len(parsed) != graph_count:
            raise DatasetFormatError(
                f"标签行数 {len(parsed)} 与图数 {graph_count} 不一致", paths[LABEL_SUFFIX].name)
        labels = list(parsed)

    graphs = [Graph.from_edges(sizes[g], per_graph[g], graph_id=g, label=labels[g])
              for g in range(graph_count)]

    if report.self_loops_dropped or report.duplicate_edges_dropped:
        logger.warning("丢弃自环 %d 条、重复边 %d 条",
                       report.self_loops_dropped, report.duplicate_edges_dropped)

    if progress_callback:
        progress_callback(4, steps, "计算 global_k")
    collection = make_collection(graphs, prefix, report, threads=threads)
    logger.info("加载 %s: %d 个图, global_k=%d", prefix, len(collection), collection.global_k)
    return collection


def write_tu_dataset(collection: GraphCollection, directory: str, prefix: str) -> Dict[str, str]:
    """
    以 TU 格式写出图集合，每条边写两个方向

    Returns:
        写出的文件路径字典
    """
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)

    edge_lines, indicator_lines = [], []
    offset = 0
    for graph in collection:
        indicator_lines.extend([str(graph.id + 1)] * graph.vertex_count)
        for i, neighbors in enumerate(graph.adjacency):
            for j in neighbors:
                edge_lines.append(f"{offset + i + 1}, {offset + j + 1}")
        offset += graph.vertex_count

    written = {}
    files = {"A": edge_lines, "graph_indicator": indicator_lines}
    labels = collection.labels
    if labels is not None:
        files[LABEL_SUFFIX] = [str(label) for label in labels]
    for suffix, lines in files.items():
        path = directory / f"{prefix}_{suffix}.txt"
        with open(path, 'w', encoding='utf-8') as f:
            f.write("\n".join(lines) + ("\n" if lines else ""))
        written[suffix] = str(path)
    return written


def describe_collection(collection: GraphCollection) -> Dict[str, Any]:
    """数据集统计信息"""
    vertex_counts = np.array([g.vertex_count for g in collection], dtype=np.float64)
    edge_counts = np.array([g.edge_count for g in collection], dtype=np.float64)
    disconnected = 0
    for graph in collection:
        if graph.vertex_count > 1:
            n_components, _ = connected_components(graph.to_csr(), directed=False)
            disconnected += int(n_components > 1)
    return {
        'name': collection.name,
        'graphs': len(collection),
        'classes': len(collection.classes),
        'max_vertices': int(vertex_counts.max(initial=0)),
        'mean_vertices': float(vertex_counts.mean()) if len(collection) else 0.0,
        'max_edges': int(edge_counts.max(initial=0)),
        'mean_edges': float(edge_counts.mean()) if len(collection) else 0.0,
        'global_k': collection.global_k,
        'disconnected_graphs': disconnected,
        'report': collection.report.to_dict()
    }
