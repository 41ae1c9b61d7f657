# -*- coding: utf-8 -*-
"""
结果文件读写

Gram CSV、预计算核 SVM 格式、运行元数据 JSON，以及调试用的 DbTable / 原型 / 计数向量 CSV。
"""
import csv
import json
import logging
from pathlib import Path
from typing import List, Dict, Any, Optional, Sequence, Tuple

import numpy as np

from .errors import DatasetFormatError, InputError
from .models import DbTable, PrototypeHierarchy, FeatureBank, GramMatrix

logger = logging.getLogger(__name__)


def format_value(value) -> str:
    """整数原样输出，浮点数用可往返的 17 位有效数字"""
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    return format(float(value), '.17g')


def write_gram_csv(gram: GramMatrix, path: str) -> str:
    """首行为图编号，随后 T 行、每行 T 个数值"""
    with open(path, 'w', encoding='utf-8', newline='') as f:
        writer = csv.writer(f, lineterminator='\n')
        writer.writerow(range(gram.size))
        for row in gram.values:
            writer.writerow(format_value(v) for v in row)
    return str(path)


def read_gram_csv(path: str) -> Tuple[List[int], np.ndarray]:
    """读取 Gram CSV，返回 (图编号, 矩阵)"""
    path = Path(path)
    if not path.is_file():
        raise InputError(f"Gram 文件不存在: {path}", str(path))
    with open(path, 'r', encoding='utf-8', newline='') as f:
        rows = [row for row in csv.reader(f)]
    if not rows:
        raise DatasetFormatError("空文件", path.name)
    try:
        ids = [int(token) for token in rows[0]]
    except ValueError:
        raise DatasetFormatError("表头必须是整数图编号", path.name, 1) from None
    size = len(ids)
    body = rows[1:]
    if len(body) != size:
        raise DatasetFormatError(f"应有 {size} 行数据，实际 {len(body)} 行", path.name)
    values = np.empty((size, size), dtype=np.float64)
    for i, row in enumerate(body):
        line_number = i + 2
        if len(row) != size:
            raise DatasetFormatError(f"应有 {size} 列，实际 {len(row)} 列", path.name, line_number)
        try:
            values[i] = [float(token) for token in row]
        except ValueError:
            raise DatasetFormatError("非数值字段", path.name, line_number) from None
    if not np.isfinite(values).all():
        raise DatasetFormatError("包含非有限数值", path.name)
    return ids, values


def write_svm_precomputed(gram: GramMatrix, labels: Optional[Sequence[int]], path: str) -> str:
    """预计算核格式：<label> 0:<serial> 1:<K(i,1)> ... T:<K(i,T)>，serial 从1开始"""
    if labels is None:
        logger.warning("数据集没有图标签，SVM 文件中的标签写为 0")
        labels = [0] * gram.size
    with open(path, 'w', encoding='utf-8') as f:
        for i, row in enumerate(gram.values):
            fields = [str(labels[i]), f"0:{i + 1}"]
            fields.extend(f"{j + 1}:{format_value(v)}" for j, v in enumerate(row))
            f.write(" ".join(fields) + "\n")
    return str(path)


def write_metadata(meta: Dict[str, Any], path: str) -> str:
    with open(path, 'w', encoding='utf-8') as f:
        json.dump(meta, f, indent=4, ensure_ascii=False, sort_keys=True)
    return str(path)


def read_labels(path: str) -> List[int]:
    """每行一个整数的标签文件（与 <prefix>_graph_labels.txt 相同）"""
    path = Path(path)
    if not path.is_file():
        raise InputError(f"标签文件不存在: {path}", str(path))
    labels = []
    with open(path, 'r', encoding='utf-8') as f:
        for line_number, line in enumerate(f, start=1):
            if not line.strip():
                continue
            try:
                labels.append(int(line.strip()))
            except ValueError:
                raise DatasetFormatError(f"非整数标签 {line.strip()!r}",
                                         path.name, line_number) from None
    return labels


def write_folds(folds: np.ndarray, path: str) -> str:
    """每行一个从1开始的折编号"""
    with open(path, 'w', encoding='utf-8') as f:
        f.write("".join(f"{int(fold) + 1}\n" for fold in folds))
    return str(path)


def dump_db_csv(table: DbTable, path: str) -> str:
    """vertex,k,entropy,valid；无效单元 entropy 为空"""
    with open(path, 'w', encoding='utf-8', newline='') as f:
        writer = csv.writer(f, lineterminator='\n')
        writer.writerow(["vertex", "k", "entropy", "valid"])
        for i in range(table.vertex_count):
            for k in range(1, table.depth + 1):
                ok = bool(table.valid[i, k - 1])
                writer.writerow([i, k, format_value(table.entropies[i, k - 1]) if ok else "",
                                 int(ok)])
    return str(path)


def dump_prototypes_csv(hierarchy: PrototypeHierarchy, path: str) -> str:
    """level,centroid_index,c1,...,ck"""
    with open(path, 'w', encoding='utf-8', newline='') as f:
        writer = csv.writer(f, lineterminator='\n')
        writer.writerow(["level", "centroid_index"] + [f"c{d + 1}" for d in range(hierarchy.dim)])
        for h, centroids in enumerate(hierarchy.levels, start=1):
            for index, centroid in enumerate(centroids):
                writer.writerow([h, index] + [format_value(c) for c in centroid])
    return str(path)


def dump_features_csv(banks: Sequence[FeatureBank], path: str) -> str:
    """graph,h,k,prototype,count，只写非零计数"""
    with open(path, 'w', encoding='utf-8', newline='') as f:
        writer = csv.writer(f, lineterminator='\n')
        writer.writerow(["graph", "h", "k", "prototype", "count"])
        for bank in banks:
            for h, k in bank.levels:
                counts = bank.counts[(h, k)]
                for prototype in np.flatnonzero(counts):
                    writer.writerow([bank.graph_id, h, k, int(prototype), int(counts[prototype])])
    return str(path)
