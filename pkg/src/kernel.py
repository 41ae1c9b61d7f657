# -*- coding: utf-8 -*-
"""
HTAK 核

k(G_p, G_q) = Σ_h Σ_k <F^{(h,k)}(G_p), F^{(h,k)}(G_q)>，所有计算为精确整数。
htak_pair_direct 通过显式的对应矩阵计数，作为快速路径的对照。
"""
import logging
from typing import Dict, List, Optional, Sequence, Any

import numpy as np
from scipy.linalg import eigvalsh

from .alignment import correspondence_matrix
from .errors import ArgumentError
from .models import AssignmentVector, FeatureBank, GramMatrix, GramReport, Level

logger = logging.getLogger(__name__)

PSD_TOLERANCE = 1e-8


def _check_compatible(fp: FeatureBank, fq: FeatureBank):
    if fp.fingerprint != fq.fingerprint:
        raise ArgumentError(
            f"图 {fp.graph_id} 与图 {fq.graph_id} 的原型层次指纹不一致")
    if fp.levels != fq.levels:
        raise ArgumentError(f"图 {fp.graph_id} 与图 {fq.graph_id} 的层级集合不一致")


def htak_pair_fast(fp: FeatureBank, fq: FeatureBank, H: Optional[int] = None) -> int:
    """计数向量内积之和"""
    _check_compatible(fp, fq)
    total = 0
    for level in fp.levels:
        if H is not None and level[0] > H:
            continue
        a, b = fp.counts[level], fq.counts[level]
        if a.shape != b.shape:
            raise ArgumentError(f"层级 {level} 的原型数不一致")
        total += int(np.dot(a, b))
    return total


def _by_level(assignments: Sequence[AssignmentVector]) -> Dict[Level, AssignmentVector]:
    return {a.level: a for a in assignments}


def htak_pair_direct(assignments_p: Sequence[AssignmentVector],
                     assignments_q: Sequence[AssignmentVector],
                     H: Optional[int] = None) -> int:
    """逐层生成对应矩阵并统计对齐顶点对数"""
    by_p, by_q = _by_level(assignments_p), _by_level(assignments_q)
    if sorted(by_p) != sorted(by_q):
        raise ArgumentError("两个图的对齐层级集合不一致")
    total = 0
    for level in sorted(by_p):
        if H is not None and level[0] > H:
            continue
        total += int(correspondence_matrix(by_p[level], by_q[level]).sum())
    return total


def feature_matrix(banks: Sequence[FeatureBank], H: Optional[int] = None) -> np.ndarray:
    """T x D 的整数特征矩阵，每行是一个图的拼接计数向量"""
    if not banks:
        raise ArgumentError("图集合为空")
    reference = banks[0]
    for bank in banks[1:]:
        _check_compatible(reference, bank)
    return np.vstack([bank.vector(H) for bank in banks])


def gram_from_banks(banks: Sequence[FeatureBank], H: int,
                    meta: Optional[Dict[str, Any]] = None) -> GramMatrix:
    """Φ Φ^T，整数精确"""
    phi = feature_matrix(banks, H)
    values = phi @ phi.T
    info = dict(meta or {})
    info['H'] = H
    return GramMatrix(values=values, meta=info)


def sweep_from_banks(banks: Sequence[FeatureBank], heights: Sequence[int],
                     meta: Optional[Dict[str, Any]] = None) -> List[GramMatrix]:
    """一组 H 值的 Gram 矩阵；各 H 共享同一组计数向量，只是求和范围不同"""
    return [gram_from_banks(banks, h, meta) for h in heights]


def check_gram(values: np.ndarray, tolerance: float = PSD_TOLERANCE) -> GramReport:
    """对称性、最小特征值与 Cauchy-Schwarz 检查"""
    values = np.asarray(values, dtype=np.float64)
    if values.ndim != 2 or values.shape[0] != values.shape[1]:
        raise ArgumentError(f"Gram 矩阵必须是方阵，实际形状 {values.shape}")
    size = values.shape[0]
    if size == 0:
        return GramReport(size=0, tolerance=tolerance)

    asymmetry = float(np.abs(values - values.T).max())
    symmetric_part = (values + values.T) / 2.0
    eigenvalues = eigvalsh(symmetric_part)
    diag = np.diag(values)
    # 允许浮点舍入
    bound = np.outer(diag, diag) * (1 + 1e-9) + 1e-12
    violations = np.triu(symmetric_part ** 2 > bound, k=1)
    return GramReport(
        size=size,
        symmetric=asymmetry == 0.0,
        max_asymmetry=asymmetry,
        min_eigenvalue=float(eigenvalues[0]),
        max_diagonal=float(diag.max()),
        tolerance=tolerance,
        cauchy_schwarz_violations=int(violations.sum())
    )
