# -*- coding: utf-8 -*-
"""
MUTAG 规模的检查，需要设置 HTAK_MUTAG_DIR
"""
import json
from pathlib import Path

import numpy as np
import pytest

from src.config_manager import RunConfig, MODE_SWEEP
from src.dataset_loader import load_tu_dataset, make_collection
from src.evaluation import knn_cv
from src.kernel import check_gram
from src.pipeline import HtakPipeline, gram_matrix
from tests.helpers import MUTAG_DIR, requires_mutag

pytestmark = requires_mutag

# 1-NN 准确率基线，首次在 MUTAG 上运行时写入，之后每次比对（±1 个百分点）
KNN_BASELINE = Path(__file__).parent / "data" / "mutag_knn_baseline.json"
KNN_TOLERANCE = 0.01


@pytest.fixture(scope="module")
def mutag():
    return load_tu_dataset(MUTAG_DIR, "MUTAG")


@pytest.fixture(scope="module")
def mutag_sweep(mutag):
    config = RunConfig(dataset_path=MUTAG_DIR, prefix="MUTAG", H=5, ratio=0.2, seed=42,
                       mode=MODE_SWEEP)
    return HtakPipeline(config).run(mutag)


def test_dataset_shape(mutag):
    assert len(mutag) == 188
    assert len(mutag.classes) == 2
    assert max(g.vertex_count for g in mutag) == 28


def test_sweep_is_psd(mutag_sweep):
    assert [g.height for g in mutag_sweep.grams] == [1, 2, 3, 4, 5]
    for gram in mutag_sweep.grams:
        assert gram.values.shape == (188, 188)
        report = check_gram(gram.values)
        assert report.ok
        assert report.cauchy_schwarz_violations == 0


def test_monotone_in_height(mutag_sweep):
    grams = mutag_sweep.grams
    assert (grams[4].values >= grams[3].values).all()


def test_relabeling_gives_identical_gram(mutag, mutag_sweep):
    rng = np.random.default_rng(188)
    permuted = [g.permuted(rng.permutation(g.vertex_count)) for g in mutag]
    gram = gram_matrix(make_collection(permuted, "MUTAG"), H=5, ratio=0.2, seed=42)[0]
    assert np.array_equal(gram.values, mutag_sweep.grams[4].values)


def test_nearest_neighbor_baseline(mutag, mutag_sweep):
    report = knn_cv(mutag_sweep.grams[4].values, mutag.labels, folds=10, seed=0)
    # 多数类比例约为 0.665
    assert report.mean > 0.6

    settings = {'H': 5, 'ratio': 0.2, 'seed': 42, 'folds': 10, 'cv_seed': 0,
                'fingerprint': mutag_sweep.fingerprint}
    if not KNN_BASELINE.is_file():
        KNN_BASELINE.parent.mkdir(parents=True, exist_ok=True)
        KNN_BASELINE.write_text(json.dumps(dict(settings, accuracy=report.mean), indent=4),
                                encoding="utf-8")
        pytest.skip(f"首次运行，已记录基线 {report.mean:.4f} 到 {KNN_BASELINE}")
    pinned = json.loads(KNN_BASELINE.read_text(encoding="utf-8"))
    assert {k: pinned[k] for k in settings} == settings
    assert abs(report.mean - pinned['accuracy']) <= KNN_TOLERANCE
