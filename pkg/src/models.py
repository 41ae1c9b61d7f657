# -*- coding: utf-8 -*-
"""
数据模型定义

图、深度表、原型层次、对齐结果与 Gram 矩阵。图对象构造后不可变，可在线程间共享只读访问。
"""
import hashlib
from dataclasses import dataclass, field
from typing import List, Optional, Dict, Any, Tuple, Iterable, FrozenSet

import numpy as np
import networkx as nx
from scipy.sparse import csr_matrix

from .errors import ArgumentError

# 距离行中不可达顶点的标记
UNREACHABLE = -1
# 对齐向量中被排除顶点的标记
EXCLUDED = -1

Level = Tuple[int, int]


@dataclass(frozen=True)
class Graph:
    """无向、无标签的简单图"""
    id: int = 0
    vertex_count: int = 0
    adjacency: Tuple[Tuple[int, ...], ...] = ()
    label: Optional[int] = None

    def __post_init__(self):
        if self.vertex_count < 0:
            raise ArgumentError(f"顶点数不能为负: {self.vertex_count}")
        if len(self.adjacency) != self.vertex_count:
            raise ArgumentError(
                f"邻接表长度 {len(self.adjacency)} 与顶点数 {self.vertex_count} 不一致")
        for i, neighbors in enumerate(self.adjacency):
            previous = -1
            for j in neighbors:
                if not 0 <= j < self.vertex_count:
                    raise ArgumentError(f"顶点 {i} 的邻居 {j} 越界")
                if j == i:
                    raise ArgumentError(f"顶点 {i} 存在自环")
                if j <= previous:
                    raise ArgumentError(f"顶点 {i} 的邻接表未排序或有重复")
                previous = j
        for i, neighbors in enumerate(self.adjacency):
            for j in neighbors:
                if i not in self.adjacency[j]:
                    raise ArgumentError(f"邻接不对称: {i}-{j}")

    @classmethod
    def from_edges(cls, vertex_count: int, edges: Iterable[Tuple[int, int]],
                   graph_id: int = 0, label: Optional[int] = None) -> 'Graph':
        """从0起始的边列表构造图，自环与重复边直接丢弃"""
        neighbor_sets = [set() for _ in range(vertex_count)]
        for u, v in edges:
            if not (0 <= u < vertex_count and 0 <= v < vertex_count):
                raise ArgumentError(f"边 ({u}, {v}) 越界，顶点数为 {vertex_count}")
            if u == v:
                continue
            neighbor_sets[u].add(v)
            neighbor_sets[v].add(u)
        adjacency = tuple(tuple(sorted(s)) for s in neighbor_sets)
        return cls(id=graph_id, vertex_count=vertex_count, adjacency=adjacency, label=label)

    @classmethod
    def from_networkx(cls, nx_graph: nx.Graph, graph_id: int = 0,
                      label: Optional[int] = None) -> 'Graph':
        """从 networkx 图构造，顶点按 nx_graph.nodes() 的顺序重新编号"""
        index = {node: i for i, node in enumerate(nx_graph.nodes())}
        edges = [(index[u], index[v]) for u, v in nx_graph.edges()]
        return cls.from_edges(len(index), edges, graph_id=graph_id, label=label)

    def to_networkx(self) -> nx.Graph:
        g = nx.Graph()
        g.add_nodes_from(range(self.vertex_count))
        g.add_edges_from(self.edges())
        return g

    @property
    def edge_count(self) -> int:
        return sum(len(n) for n in self.adjacency) // 2

    def edges(self) -> List[Tuple[int, int]]:
        """无向边列表，每条边一次 (i < j)"""
        return [(i, j) for i, neighbors in enumerate(self.adjacency) for j in neighbors if i < j]

    def degrees(self) -> np.ndarray:
        return np.array([len(n) for n in self.adjacency], dtype=np.int64)

    def to_csr(self) -> csr_matrix:
        """稀疏邻接矩阵（对称，两个方向都存）"""
        indptr = np.zeros(self.vertex_count + 1, dtype=np.int64)
        indptr[1:] = np.cumsum(self.degrees())
        indices = np.fromiter((j for neighbors in self.adjacency for j in neighbors),
                              dtype=np.int64, count=int(indptr[-1]))
        data = np.ones(len(indices), dtype=np.int8)
        return csr_matrix((data, indices, indptr), shape=(self.vertex_count, self.vertex_count))

    def induced_subgraph(self, vertices: Iterable[int]) -> 'Graph':
        """顶点诱导子图，顶点按原编号升序重新紧凑编号"""
        kept = sorted(set(vertices))
        index = {v: i for i, v in enumerate(kept)}
        edges = [(index[u], index[v]) for u in kept for v in self.adjacency[u]
                 if v in index and u < v]
        return Graph.from_edges(len(kept), edges, graph_id=self.id, label=self.label)

    def permuted(self, permutation: Iterable[int]) -> 'Graph':
        """顶点重标号：原顶点 i 变为 permutation[i]"""
        perm = list(permutation)
        if sorted(perm) != list(range(self.vertex_count)):
            raise ArgumentError("permutation 必须是 0..n-1 的一个排列")
        edges = [(perm[u], perm[v]) for u, v in self.edges()]
        return Graph.from_edges(self.vertex_count, edges, graph_id=self.id, label=self.label)


@dataclass
class LoadReport:
    """数据集加载报告"""
    self_loops_dropped: int = 0
    duplicate_edges_dropped: int = 0
    ignored_files: List[str] = field(default_factory=list)

    def to_dict(self) -> Dict[str, Any]:
        return {
            'self_loops_dropped': self.self_loops_dropped,
            'duplicate_edges_dropped': self.duplicate_edges_dropped,
            'ignored_files': list(self.ignored_files)
        }


@dataclass(frozen=True)
class GraphCollection:
    """图集合；global_k 由 shortest_paths.compute_global_k 计算得到"""
    graphs: Tuple[Graph, ...] = ()
    name: str = ""
    global_k: int = 1
    report: LoadReport = field(default_factory=LoadReport, compare=False)

    def __post_init__(self):
        for i, g in enumerate(self.graphs):
            if g.id != i:
                raise ArgumentError(f"图编号必须按顺序为 0..T-1，第 {i} 个图的编号为 {g.id}")
        if self.global_k < 1:
            raise ArgumentError(f"global_k 必须为正整数: {self.global_k}")

    def __len__(self) -> int:
        return len(self.graphs)

    def __iter__(self):
        return iter(self.graphs)

    def __getitem__(self, index: int) -> Graph:
        return self.graphs[index]

    @property
    def labels(self) -> Optional[List[int]]:
        """所有图都有标签时返回标签列表，否则返回 None"""
        if not self.graphs or any(g.label is None for g in self.graphs):
            return None
        return [g.label for g in self.graphs]

    @property
    def classes(self) -> List[int]:
        return sorted({g.label for g in self.graphs if g.label is not None})


@dataclass(frozen=True, eq=False)
class DistanceRow:
    """单源 BFS 跳数，不可达为 UNREACHABLE"""
    source: int
    distances: np.ndarray

    @property
    def reachable(self) -> np.ndarray:
        return self.distances != UNREACHABLE

    @property
    def eccentricity(self) -> int:
        """连通分量内的离心率（最大有限距离）"""
        return int(self.distances.max(initial=0))


@dataclass(frozen=True)
class LayerSet:
    """以 root 为根、半径为 radius 的层集合"""
    root: int
    radius: int
    members: FrozenSet[int]
    shell: FrozenSet[int]


@dataclass(eq=False)
class DbTable:
    """
    单个图的深度表示

    entropies[i, k-1] 为顶点 i 的 k 层扩展子图熵（单位 nats），无效单元为 NaN；
    valid[i, k-1] 当且仅当存在与 i 距离恰为 k 的顶点。
    """
    graph_id: int
    entropies: np.ndarray
    valid: np.ndarray

    @property
    def vertex_count(self) -> int:
        return self.entropies.shape[0]

    @property
    def depth(self) -> int:
        return self.entropies.shape[1]

    def valid_rows(self, k: int) -> np.ndarray:
        """深度 k 上有效的顶点下标"""
        return np.flatnonzero(self.valid[:, k - 1])

    def prefixes(self, k: int) -> np.ndarray:
        """所有在深度 k 有效的顶点的 k 维前缀，形状 (有效顶点数, k)"""
        if not 1 <= k <= self.depth:
            raise ArgumentError(f"深度 {k} 超出范围 1..{self.depth}")
        rows = self.entropies[self.valid[:, k - 1], :k]
        assert not np.isnan(rows).any(), "读取到无效单元"
        return rows


@dataclass(eq=False)
class PointSet:
    """k 维点集；origin 仅在第0层存在，记录 (graph_id, vertex)"""
    dim: int
    points: np.ndarray
    origin: Optional[np.ndarray] = None

    def __post_init__(self):
        self.points = np.asarray(self.points, dtype=np.float64).reshape(-1, self.dim)
        if self.origin is not None and len(self.origin) != len(self.points):
            raise ArgumentError("origin 与点数不一致")

    def __len__(self) -> int:
        return self.points.shape[0]


@dataclass(eq=False)
class KmeansResult:
    """κ-means 结果"""
    centroids: np.ndarray
    assignment: np.ndarray
    objective: float
    iterations: int
    history: List[float] = field(default_factory=list)


@dataclass(eq=False)
class PrototypeHierarchy:
    """深度 k 上的 H 层原型表示，levels[h-1] 形状为 (N_h, k)"""
    dim: int
    levels: List[np.ndarray] = field(default_factory=list)
    seed: int = 0
    ratio: float = 0.2
    objectives: List[float] = field(default_factory=list)

    @property
    def height(self) -> int:
        return len(self.levels)

    @property
    def level_sizes(self) -> List[int]:
        return [lvl.shape[0] for lvl in self.levels]

    def level(self, h: int) -> np.ndarray:
        if not 1 <= h <= self.height:
            raise ArgumentError(f"层级 h={h} 超出范围 1..{self.height}")
        return self.levels[h - 1]

    def fingerprint(self) -> str:
        digest = hashlib.sha256()
        digest.update(f"{self.dim}|{self.seed}|{self.ratio!r}".encode('utf-8'))
        for lvl in self.levels:
            digest.update(np.ascontiguousarray(lvl, dtype=np.float64).tobytes())
        return digest.hexdigest()[:16]

    def to_dict(self) -> Dict[str, Any]:
        return {
            'dim': self.dim,
            'seed': self.seed,
            'ratio': self.ratio,
            'level_sizes': self.level_sizes,
            'objectives': list(self.objectives),
            'fingerprint': self.fingerprint()
        }


@dataclass(eq=False)
class AffinityMatrix:
    """顶点表示到 h 层原型的欧氏距离，被排除的行为 NaN"""
    graph_id: int
    level: Level
    values: np.ndarray
    excluded: np.ndarray


@dataclass(eq=False)
class AssignmentVector:
    """每个顶点对齐到的原型下标，无效顶点为 EXCLUDED"""
    graph_id: int
    level: Level
    assigned: np.ndarray
    n_prototypes: int

    @property
    def valid_mask(self) -> np.ndarray:
        return self.assigned != EXCLUDED


@dataclass(eq=False)
class FeatureBank:
    """单个图在每个 (h, k) 上的计数向量 F^{(h,k)}"""
    graph_id: int
    counts: Dict[Level, np.ndarray] = field(default_factory=dict)
    fingerprint: str = ""

    @property
    def levels(self) -> List[Level]:
        return sorted(self.counts)

    def vector(self, height: Optional[int] = None) -> np.ndarray:
        """按 (h, k) 升序拼接 h <= height 的计数向量"""
        parts = [self.counts[lvl] for lvl in self.levels if height is None or lvl[0] <= height]
        if not parts:
            return np.zeros(0, dtype=np.int64)
        return np.concatenate(parts).astype(np.int64)


@dataclass(eq=False)
class GramMatrix:
    """T×T 核矩阵及其来源信息"""
    values: np.ndarray
    meta: Dict[str, Any] = field(default_factory=dict)

    @property
    def size(self) -> int:
        return self.values.shape[0]

    @property
    def height(self) -> Optional[int]:
        return self.meta.get('H')

    def normalized(self) -> 'GramMatrix':
        """K(p,q)/sqrt(K(p,p)K(q,q))；自核为0的行列置0"""
        diag = np.diag(self.values).astype(np.float64)
        scale = np.zeros_like(diag)
        positive = diag > 0
        scale[positive] = 1.0 / np.sqrt(diag[positive])
        values = self.values.astype(np.float64) * np.outer(scale, scale)
        meta = dict(self.meta)
        meta['normalized'] = True
        return GramMatrix(values=values, meta=meta)


@dataclass
class GramReport:
    """Gram 矩阵校验结果"""
    size: int = 0
    symmetric: bool = True
    max_asymmetry: float = 0.0
    min_eigenvalue: float = 0.0
    max_diagonal: float = 0.0
    tolerance: float = 1e-8
    cauchy_schwarz_violations: int = 0

    @property
    def psd(self) -> bool:
        return self.min_eigenvalue >= -self.tolerance * self.max_diagonal

    @property
    def ok(self) -> bool:
        return self.symmetric and self.psd

    def to_dict(self) -> Dict[str, Any]:
        return {
            'size': self.size,
            'symmetric': self.symmetric,
            'max_asymmetry': self.max_asymmetry,
            'min_eigenvalue': self.min_eigenvalue,
            'max_diagonal': self.max_diagonal,
            'tolerance': self.tolerance,
            'psd': self.psd,
            'cauchy_schwarz_violations': self.cauchy_schwarz_violations,
            'ok': self.ok
        }
