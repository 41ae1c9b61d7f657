# -*- coding: utf-8 -*-
"""
顶点到原型的传递对齐

每个有效顶点对齐到 h 层中最近的原型（并列取下标最小者）。两个顶点对齐当且仅当它们对齐到同一个原型，
因此对齐关系天然是传递的。
"""
import logging
from typing import List, Dict, Sequence, Optional

import numpy as np
from scipy.spatial.distance import cdist

from .errors import ArgumentError
from .models import (DbTable, PrototypeHierarchy, AffinityMatrix, AssignmentVector,
                     FeatureBank, EXCLUDED)

logger = logging.getLogger(__name__)


def hierarchies_fingerprint(hierarchies: Dict[int, PrototypeHierarchy]) -> str:
    """一次运行中全部层次的联合指纹"""
    return "-".join(f"{k}:{hierarchies[k].fingerprint()}" for k in sorted(hierarchies))


def affinity(db: DbTable, hierarchy: PrototypeHierarchy, h: int) -> AffinityMatrix:
    """有效顶点的 k 维前缀到 h 层各原型的欧氏距离，被排除的行填 NaN"""
    k = hierarchy.dim
    if k > db.depth:
        raise ArgumentError(f"层次维度 {k} 超过 DbTable 列数 {db.depth}")
    prototypes = hierarchy.level(h)
    excluded = ~db.valid[:, k - 1]
    values = np.full((db.vertex_count, prototypes.shape[0]), np.nan, dtype=np.float64)
    rows = np.flatnonzero(~excluded)
    if rows.size:
        values[rows] = cdist(db.prefixes(k), prototypes, 'euclidean')
    return AffinityMatrix(graph_id=db.graph_id, level=(h, k), values=values, excluded=excluded)


def assign(aff: AffinityMatrix) -> AssignmentVector:
    """每行取最小值所在的原型；np.argmin 返回第一个最小值，即下标最小者"""
    assigned = np.full(aff.values.shape[0], EXCLUDED, dtype=np.int64)
    rows = np.flatnonzero(~aff.excluded)
    if rows.size:
        assigned[rows] = np.argmin(aff.values[rows], axis=1)
    return AssignmentVector(graph_id=aff.graph_id, level=aff.level, assigned=assigned,
                            n_prototypes=aff.values.shape[1])


def align_graph(db: DbTable, hierarchies: Dict[int, PrototypeHierarchy],
                H: Optional[int] = None) -> List[AssignmentVector]:
    """图在所有 (h, k) 上的对齐向量，按 (h, k) 升序"""
    assignments = []
    for k in sorted(hierarchies):
        hierarchy = hierarchies[k]
        height = hierarchy.height if H is None else min(H, hierarchy.height)
        for h in range(1, height + 1):
            assignments.append(assign(affinity(db, hierarchy, h)))
    assignments.sort(key=lambda a: a.level)
    return assignments


def feature_bank(assignments: Sequence[AssignmentVector], fingerprint: str = "") -> FeatureBank:
    """每个 (h, k) 上对齐到各原型的顶点数"""
    if not assignments:
        raise ArgumentError("对齐向量为空")
    graph_ids = {a.graph_id for a in assignments}
    if len(graph_ids) != 1:
        raise ArgumentError(f"对齐向量来自多个图: {sorted(graph_ids)}")
    counts = {}
    for a in assignments:
        if a.level in counts:
            raise ArgumentError(f"层级 {a.level} 重复")
        counts[a.level] = np.bincount(a.assigned[a.valid_mask],
                                      minlength=a.n_prototypes).astype(np.int64)
    return FeatureBank(graph_id=graph_ids.pop(), counts=counts, fingerprint=fingerprint)


def correspondence_matrix(a: AssignmentVector, b: AssignmentVector) -> np.ndarray:
    """
    |V_p| x |V_q| 的 0/1 对应矩阵：两个顶点都有效且对齐到同一原型时为1

    只用于校验与诊断，Gram 计算不会生成它。
    """
    if a.level != b.level or a.n_prototypes != b.n_prototypes:
        raise ArgumentError(f"层级不一致: {a.level} vs {b.level}")
    same = a.assigned[:, None] == b.assigned[None, :]
    both_valid = a.valid_mask[:, None] & b.valid_mask[None, :]
    return (same & both_valid).astype(np.int64)
