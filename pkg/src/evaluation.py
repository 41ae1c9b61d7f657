# -*- coding: utf-8 -*-
"""
分类检验

分层 k 折与核诱导距离下的 1-NN 交叉验证：d(p,q)^2 = k_pp + k_qq - 2 k_pq。
"""
import logging
from dataclasses import dataclass, field
from typing import List, Sequence, Dict, Any

import numpy as np
from sklearn.model_selection import StratifiedKFold

from .errors import ArgumentError

logger = logging.getLogger(__name__)


@dataclass
class CvReport:
    """
    交叉验证结果

    accuracies 为每次重复的平均准确率，fold_accuracies 为所有重复中各折的准确率（按重复、折的顺序）。
    """
    folds: int
    repeats: int
    accuracies: List[float] = field(default_factory=list)
    fold_accuracies: List[float] = field(default_factory=list)

    @property
    def spread(self) -> List[float]:
        """离散度的样本：多次重复时取各次均值，只做一次时取各折准确率"""
        return self.accuracies if len(self.accuracies) > 1 else self.fold_accuracies

    @property
    def mean(self) -> float:
        return float(np.mean(self.accuracies)) if self.accuracies else 0.0

    @property
    def std(self) -> float:
        return float(np.std(self.spread)) if self.spread else 0.0

    @property
    def std_error(self) -> float:
        sample = self.spread
        if len(sample) < 2:
            return 0.0
        return float(np.std(sample, ddof=1) / np.sqrt(len(sample)))

    def to_dict(self) -> Dict[str, Any]:
        return {
            'folds': self.folds,
            'repeats': self.repeats,
            'accuracies': list(self.accuracies),
            'fold_accuracies': list(self.fold_accuracies),
            'mean': self.mean,
            'std': self.std,
            'std_error': self.std_error
        }


def stratified_folds(labels: Sequence[int], folds: int, seed: int) -> np.ndarray:
    """每个样本的折编号（从0开始），按类别分层"""
    labels = np.asarray(labels)
    if folds < 2:
        raise ArgumentError(f"折数必须 >= 2: {folds}")
    _, class_sizes = np.unique(labels, return_counts=True)
    if class_sizes.size == 0 or folds > class_sizes.min():
        raise ArgumentError(
            f"折数 {folds} 大于最小类别的样本数 {int(class_sizes.min(initial=0))}")
    assignment = np.empty(labels.size, dtype=np.int64)
    splitter = StratifiedKFold(n_splits=folds, shuffle=True, random_state=seed)
    for fold, (_, test_index) in enumerate(splitter.split(np.zeros(labels.size), labels)):
        assignment[test_index] = fold
    return assignment


def kernel_distances(gram: np.ndarray) -> np.ndarray:
    """核诱导的平方距离"""
    gram = np.asarray(gram, dtype=np.float64)
    diag = np.diag(gram)
    return diag[:, None] + diag[None, :] - 2.0 * gram


def fold_accuracies(gram: np.ndarray, labels: Sequence[int], folds: np.ndarray) -> List[float]:
    """给定折划分下每一折的 1-NN 准确率；距离并列时取训练集中下标最小者"""
    labels = np.asarray(labels)
    distances = kernel_distances(gram)
    scores = []
    for fold in np.unique(folds):
        test = np.flatnonzero(folds == fold)
        train = np.flatnonzero(folds != fold)
        nearest = train[np.argmin(distances[np.ix_(test, train)], axis=1)]
        scores.append(float(np.mean(labels[nearest] == labels[test])))
    return scores


def knn_cv(gram: np.ndarray, labels: Sequence[int], folds: int = 10, seed: int = 0,
           repeats: int = 1) -> CvReport:
    """
    重复 repeats 次的分层 1-NN 交叉验证，第 r 次使用种子 seed + r

    Raises:
        ArgumentError: 标签数与矩阵大小不一致，或折数大于最小类别的样本数
    """
    gram = np.asarray(gram, dtype=np.float64)
    labels = np.asarray(labels)
    if gram.shape != (labels.size, labels.size):
        raise ArgumentError(f"标签数 {labels.size} 与 Gram 大小 {gram.shape} 不一致")
    if repeats < 1:
        raise ArgumentError(f"repeats 必须 >= 1: {repeats}")
    report = CvReport(folds=folds, repeats=repeats)
    for r in range(repeats):
        scores = fold_accuracies(gram, labels, stratified_folds(labels, folds, seed + r))
        report.fold_accuracies.extend(scores)
        report.accuracies.append(float(np.mean(scores)))
    logger.info("1-NN CV: %.4f ± %.4f (%d 折 x %d 次)", report.mean, report.std, folds, repeats)
    return report
