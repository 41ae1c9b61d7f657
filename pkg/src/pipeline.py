# -*- coding: utf-8 -*-
"""
计算流水线

加载 -> DbTable -> 原型层次 -> 对齐与计数 -> Gram -> 导出，每个阶段记录耗时。
"""
import logging
import time
from contextlib import contextmanager
from dataclasses import dataclass, field
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path
from typing import List, Dict, Any, Optional

from .alignment import align_graph, feature_bank, hierarchies_fingerprint
from .config_manager import ConfigManager, RunConfig, MODE_SINGLE, MODE_SWEEP, FORMAT_CSV, FORMAT_SVM
from .dataset_loader import load_tu_dataset
from .db_repr import db_tables
from .errors import HtakError, ArgumentError, PipelineError
from .evaluation import stratified_folds
from .exporters import (write_gram_csv, write_svm_precomputed, write_metadata, write_folds,
                        dump_db_csv, dump_prototypes_csv, dump_features_csv)
from .kernel import sweep_from_banks
from .models import GraphCollection, DbTable, PrototypeHierarchy, FeatureBank, GramMatrix
from .prototypes import build_hierarchies
from .version import __version__

logger = logging.getLogger(__name__)


@dataclass
class PipelineResult:
    """一次运行的全部中间结果"""
    collection: GraphCollection
    K: int
    tables: List[DbTable] = field(default_factory=list)
    hierarchies: Dict[int, PrototypeHierarchy] = field(default_factory=dict)
    banks: List[FeatureBank] = field(default_factory=list)
    grams: List[GramMatrix] = field(default_factory=list)
    timings: Dict[str, float] = field(default_factory=dict)
    files: List[str] = field(default_factory=list)

    @property
    def fingerprint(self) -> str:
        return hierarchies_fingerprint(self.hierarchies)


class HtakPipeline:
    """HTAK 计算流水线"""

    def __init__(self, config: RunConfig):
        self.config = config.validate()
        self.timings: Dict[str, float] = {}

    @contextmanager
    def _stage(self, name: str):
        started = time.perf_counter()
        try:
            yield
        except PipelineError:
            raise
        except (HtakError, OSError, ValueError) as e:
            raise PipelineError(name, e) from e
        elapsed = time.perf_counter() - started
        self.timings[name] = round(elapsed, 6)
        logger.info("stage=%s elapsed=%.3fs", name, elapsed)

    def heights(self) -> List[int]:
        if self.config.mode == MODE_SWEEP:
            return list(range(1, self.config.H + 1))
        return [self.config.H]

    def load(self) -> GraphCollection:
        with self._stage("load"):
            collection = load_tu_dataset(self.config.dataset_path, self.config.prefix,
                                         threads=self.config.threads)
        return collection

    def effective_k(self, collection: GraphCollection) -> int:
        if self.config.max_k is not None and self.config.max_k < collection.global_k:
            return self.config.max_k
        return collection.global_k

    def compute_tables(self, collection: GraphCollection, K: int) -> List[DbTable]:
        with self._stage("db-repr"):
            return db_tables(collection.graphs, K, threads=self.config.threads)

    def compute_hierarchies(self, tables: List[DbTable], K: int) -> Dict[int, PrototypeHierarchy]:
        cfg = self.config
        with self._stage("prototypes"):
            return build_hierarchies(tables, K, cfg.H, cfg.ratio, cfg.seed,
                                     max_iter=cfg.max_iter, chunk_size=cfg.chunk_size,
                                     threads=cfg.threads)

    def compute_banks(self, tables: List[DbTable],
                      hierarchies: Dict[int, PrototypeHierarchy]) -> List[FeatureBank]:
        fingerprint = hierarchies_fingerprint(hierarchies)

        def bank_of(table: DbTable) -> FeatureBank:
            return feature_bank(align_graph(table, hierarchies), fingerprint)

        with self._stage("alignment"):
            with ThreadPoolExecutor(max_workers=self.config.threads) as pool:
                return list(pool.map(bank_of, tables))

    def run(self, collection: Optional[GraphCollection] = None) -> PipelineResult:
        """执行除导出外的全部阶段"""
        if collection is None:
            collection = self.load()
        if len(collection) == 0:
            raise PipelineError("load", ArgumentError("图集合为空"))
        cfg = self.config
        K = self.effective_k(collection)
        result = PipelineResult(collection=collection, K=K)
        logger.info("数据集 %s: T=%d global_k=%d K=%d H=%d ratio=%s seed=%d mode=%s",
                    collection.name, len(collection), collection.global_k, K, cfg.H,
                    cfg.ratio, cfg.seed, cfg.mode)

        result.tables = self.compute_tables(collection, K)
        result.hierarchies = self.compute_hierarchies(result.tables, K)
        result.banks = self.compute_banks(result.tables, result.hierarchies)

        with self._stage("kernel"):
            grams = sweep_from_banks(result.banks, self.heights(), self.gram_meta(result))
            result.grams = [g.normalized() if cfg.normalize else g for g in grams]

        result.timings = dict(self.timings)
        return result

    def gram_meta(self, result: PipelineResult) -> Dict[str, Any]:
        cfg = self.config
        return {
            'dataset': result.collection.name,
            'graphs': len(result.collection),
            'K': result.K,
            'global_k': result.collection.global_k,
            'max_k': cfg.max_k,
            'ratio': cfg.ratio,
            'seed': cfg.seed,
            'mode': cfg.mode,
            'normalized': cfg.normalize,
            'fingerprint': result.fingerprint,
        }

    def export(self, result: PipelineResult) -> List[str]:
        """写出 Gram 文件、调试文件与元数据"""
        cfg = self.config
        out = Path(cfg.output_dir)
        name = cfg.run_name
        files: List[str] = []
        with self._stage("export"):
            out.mkdir(parents=True, exist_ok=True)
            labels = result.collection.labels
            for gram in result.grams:
                stem = out / f"{name}_H{gram.height}"
                if FORMAT_CSV in cfg.formats:
                    files.append(write_gram_csv(gram, f"{stem}_gram.csv"))
                if FORMAT_SVM in cfg.formats:
                    files.append(write_svm_precomputed(gram, labels, f"{stem}.kernel"))

            if labels is not None:
                try:
                    folds = stratified_folds(labels, cfg.folds, cfg.seed)
                    files.append(write_folds(folds, str(out / f"{name}_folds.txt")))
                except ArgumentError as e:
                    logger.warning("不生成折划分: %s", e)

            if "db" in cfg.dumps:
                db_dir = out / "db"
                db_dir.mkdir(exist_ok=True)
                for table in result.tables:
                    files.append(dump_db_csv(table, str(db_dir / f"{name}_graph{table.graph_id}.csv")))
            if "prototypes" in cfg.dumps:
                for k, hierarchy in sorted(result.hierarchies.items()):
                    files.append(dump_prototypes_csv(hierarchy, str(out / f"{name}_prototypes_k{k}.csv")))
            if "features" in cfg.dumps:
                files.append(dump_features_csv(result.banks, str(out / f"{name}_features.csv")))

            files.append(ConfigManager.from_run_config(cfg).save(str(out / f"{name}_config.json")))

        meta_path = out / f"{name}_meta.json"
        files.append(str(meta_path))
        result.files = files
        result.timings = dict(self.timings)
        write_metadata(self.run_metadata(result), str(meta_path))
        return files

    def run_metadata(self, result: PipelineResult) -> Dict[str, Any]:
        cfg = self.config
        return {
            'version': __version__,
            'dataset': result.collection.name,
            'dataset_path': cfg.dataset_path,
            'prefix': cfg.prefix,
            'graphs': len(result.collection),
            'H': cfg.H,
            'heights': self.heights(),
            'K': result.K,
            'global_k': result.collection.global_k,
            'max_k': cfg.max_k,
            'ratio': cfg.ratio,
            'seed': cfg.seed,
            'mode': cfg.mode,
            'normalized': cfg.normalize,
            'max_iter': cfg.max_iter,
            'fingerprint': result.fingerprint,
            'hierarchies': {str(k): h.to_dict() for k, h in sorted(result.hierarchies.items())},
            'load_report': result.collection.report.to_dict(),
            'timings': result.timings,
            'files': [Path(f).name for f in result.files],
            'config': cfg.to_dict()
        }


def gram_matrix(collection: GraphCollection, H: int = 5, ratio: float = 0.2, seed: int = 42,
                mode: str = MODE_SINGLE, max_k: Optional[int] = None,
                threads: Optional[int] = None, max_iter: int = 100) -> List[GramMatrix]:
    """
    计算图集合的 HTAK Gram 矩阵

    Returns:
        single-H 模式返回一个矩阵的列表；sweep 模式返回 H = 1..H 各一个
    """
    if len(collection) == 0:
        raise ArgumentError("图集合为空")
    config = RunConfig(name=collection.name, H=H, ratio=ratio, seed=seed, mode=mode,
                       max_k=max_k, threads=threads, max_iter=max_iter)
    return HtakPipeline(config).run(collection).grams
