# -*- coding: utf-8 -*-
"""
命令行入口

子命令：compute、verify、knn-cv、dump-db、dump-prototypes、info。
退出码：0 成功，1 校验未通过，2 输入/格式/配置/参数错误。
"""
import argparse
import json
import logging
import os
import sys
from pathlib import Path
from typing import List, Optional, Dict, Any

import numpy as np

from .config_manager import ConfigManager, RunConfig, MODES, FORMATS, DUMPS, ENV_LOG_LEVEL
from .dataset_loader import load_tu_dataset, describe_collection
from .errors import HtakError, VerificationError, ArgumentError, PipelineError
from .evaluation import knn_cv
from .exporters import read_gram_csv, read_labels, dump_db_csv, dump_prototypes_csv
from .kernel import check_gram, PSD_TOLERANCE
from .pipeline import HtakPipeline
from .version import __version__

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_VERIFY_FAILED = 1
EXIT_ERROR = 2

LOG_FORMAT = "%(asctime)s %(levelname)s %(name)s: %(message)s"
HANDLER_NAME = "htak-cli"


def setup_logging(level: str = "INFO"):
    """配置根日志处理器；重复调用时替换而不是叠加"""
    root = logging.getLogger()
    for handler in [h for h in root.handlers if h.get_name() == HANDLER_NAME]:
        root.removeHandler(handler)
    handler = logging.StreamHandler(sys.stderr)
    handler.set_name(HANDLER_NAME)
    handler.setFormatter(logging.Formatter(LOG_FORMAT))
    root.addHandler(handler)
    root.setLevel(getattr(logging, str(level).upper(), logging.INFO))


def _add_dataset_args(parser: argparse.ArgumentParser, required: bool = False):
    parser.add_argument("--dataset", dest="dataset_path", required=required,
                        help="TU 数据集目录")
    parser.add_argument("--prefix", help="文件名前缀，例如 MUTAG")


def _add_run_args(parser: argparse.ArgumentParser):
    _add_dataset_args(parser)
    parser.add_argument("--config", help="YAML 配置文件")
    parser.add_argument("--name", help="输出文件名前缀，默认同 --prefix")
    parser.add_argument("--H", dest="H", type=int, help="原型层次高度 (1..16)")
    parser.add_argument("--ratio", type=float, help="相邻层原型数之比 (0, 1)")
    parser.add_argument("--seed", type=int, help="随机种子")
    parser.add_argument("--max-k", dest="max_k", type=int, help="DB 表示的最大深度")
    parser.add_argument("--output", dest="output_dir", help="输出目录")
    parser.add_argument("--threads", type=int, help="工作线程数")
    parser.add_argument("--max-iter", dest="max_iter", type=int, help="k-means 最大迭代次数")
    parser.add_argument("--log-level", dest="log_level", help="日志级别")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="htak", description="HTAK 图核计算工具")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    compute = sub.add_parser("compute", help="计算 Gram 矩阵")
    _add_run_args(compute)
    compute.add_argument("--mode", choices=MODES, help="single-H 或 sweep")
    compute.add_argument("--format", dest="formats", action="append", choices=FORMATS,
                         help="导出格式，可重复")
    compute.add_argument("--dump", dest="dumps", action="append", choices=DUMPS,
                         help="额外导出的调试文件，可重复")
    compute.add_argument("--normalize", action="store_true", default=None,
                         help="输出归一化核 K(p,q)/sqrt(K(p,p)K(q,q))")
    compute.add_argument("--folds", type=int, help="折划分文件的折数")

    verify = sub.add_parser("verify", help="检查 Gram 矩阵的对称性与半正定性")
    verify.add_argument("gram", help="Gram CSV 文件")
    verify.add_argument("--tolerance", type=float, default=PSD_TOLERANCE,
                        help="相对最大对角元的特征值容差")
    verify.add_argument("--log-level", dest="log_level", help="日志级别，默认取 HTAK_LOG_LEVEL")

    cv = sub.add_parser("knn-cv", help="核距离下的 1-NN 分层交叉验证")
    cv.add_argument("grams", nargs="+", help="一个或多个 Gram CSV 文件")
    cv.add_argument("--labels", help="每行一个标签的文件")
    _add_dataset_args(cv)
    cv.add_argument("--folds", type=int, default=10)
    cv.add_argument("--seed", type=int, default=42)
    cv.add_argument("--repeats", type=int, default=1, help="重复次数，第 r 次使用 seed + r")
    cv.add_argument("--log-level", dest="log_level", help="日志级别，默认取 HTAK_LOG_LEVEL")

    dump_db = sub.add_parser("dump-db", help="导出每个图的 DB 表示")
    _add_run_args(dump_db)

    dump_prototypes = sub.add_parser("dump-prototypes", help="导出原型层次")
    _add_run_args(dump_prototypes)

    info = sub.add_parser("info", help="数据集统计信息")
    _add_dataset_args(info, required=True)
    info.add_argument("--log-level", dest="log_level", help="日志级别，默认取 HTAK_LOG_LEVEL")
    return parser


def build_config(args: argparse.Namespace) -> RunConfig:
    """默认值 < 配置文件 < 环境变量 < 命令行"""
    manager = ConfigManager(getattr(args, "config", None))
    overrides = {name: getattr(args, name, None) for name in ConfigManager.FIELD_KEYS}
    manager.apply_overrides(overrides)
    config = manager.build_run_config()
    if not config.dataset_path:
        raise ArgumentError("缺少 --dataset")
    if not config.prefix:
        config.prefix = Path(config.dataset_path).name
    return config


def cmd_compute(config: RunConfig) -> int:
    pipeline = HtakPipeline(config)
    result = pipeline.run()
    files = pipeline.export(result)
    for path in files:
        print(path)
    logger.info("完成: %d 个文件写入 %s", len(files), config.output_dir)
    return EXIT_OK


def cmd_dump_db(config: RunConfig) -> int:
    pipeline = HtakPipeline(config)
    collection = pipeline.load()
    tables = pipeline.compute_tables(collection, pipeline.effective_k(collection))
    out = Path(config.output_dir) / "db"
    out.mkdir(parents=True, exist_ok=True)
    for table in tables:
        print(dump_db_csv(table, str(out / f"{config.run_name}_graph{table.graph_id}.csv")))
    return EXIT_OK


def cmd_dump_prototypes(config: RunConfig) -> int:
    pipeline = HtakPipeline(config)
    collection = pipeline.load()
    K = pipeline.effective_k(collection)
    hierarchies = pipeline.compute_hierarchies(pipeline.compute_tables(collection, K), K)
    out = Path(config.output_dir)
    out.mkdir(parents=True, exist_ok=True)
    for k, hierarchy in sorted(hierarchies.items()):
        print(dump_prototypes_csv(hierarchy, str(out / f"{config.run_name}_prototypes_k{k}.csv")))
    return EXIT_OK


def cmd_verify(path: str, tolerance: float = PSD_TOLERANCE) -> int:
    _, values = read_gram_csv(path)
    report = check_gram(values, tolerance)
    print(f"size: {report.size}")
    print(f"symmetric: {'yes' if report.symmetric else 'no'} (max asymmetry {report.max_asymmetry:.6g})")
    print(f"min eigenvalue: {report.min_eigenvalue:.17g} "
          f"(threshold {-report.tolerance * report.max_diagonal:.6g})")
    print(f"cauchy-schwarz violations: {report.cauchy_schwarz_violations}")
    print(f"psd: {'yes' if report.psd else 'no'}")
    if not report.ok:
        raise VerificationError(f"{path}: Gram 矩阵未通过校验")
    return EXIT_OK


def _cv_labels(args: argparse.Namespace) -> List[int]:
    if args.labels:
        return read_labels(args.labels)
    if args.dataset_path:
        prefix = args.prefix or Path(args.dataset_path).name
        labels = load_tu_dataset(args.dataset_path, prefix).labels
        if labels is None:
            raise ArgumentError(f"数据集 {prefix} 没有图标签")
        return labels
    raise ArgumentError("需要 --labels 或 --dataset")


def cmd_knn_cv(args: argparse.Namespace) -> int:
    labels = _cv_labels(args)
    means = []
    for path in args.grams:
        _, values = read_gram_csv(path)
        report = knn_cv(values, labels, folds=args.folds, seed=args.seed, repeats=args.repeats)
        means.append(report.mean)
        print(f"{path}: accuracy {report.mean:.4f} ± {report.std:.4f} "
              f"(stderr {report.std_error:.4f}, {report.folds} folds x {report.repeats})")
    if len(means) > 1:
        print(f"average over {len(means)} files: {float(np.mean(means)):.4f}")
    return EXIT_OK


def cmd_info(args: argparse.Namespace) -> int:
    prefix = args.prefix or Path(args.dataset_path).name
    stats: Dict[str, Any] = describe_collection(load_tu_dataset(args.dataset_path, prefix))
    print(json.dumps(stats, indent=4, ensure_ascii=False, sort_keys=True))
    return EXIT_OK


def main(argv: Optional[List[str]] = None) -> int:
    """解析命令行并执行子命令，返回退出码"""
    args = build_parser().parse_args(argv)
    setup_logging(getattr(args, "log_level", None) or os.environ.get(ENV_LOG_LEVEL) or "INFO")
    try:
        if args.command == "verify":
            return cmd_verify(args.gram, args.tolerance)
        if args.command == "knn-cv":
            return cmd_knn_cv(args)
        if args.command == "info":
            return cmd_info(args)

        config = build_config(args)
        setup_logging(config.log_level)
        if args.command == "compute":
            return cmd_compute(config)
        if args.command == "dump-db":
            return cmd_dump_db(config)
        return cmd_dump_prototypes(config)
    except VerificationError as e:
        logger.error("%s", e)
        return EXIT_VERIFY_FAILED
    except PipelineError as e:
        logger.error("阶段 %s 失败: %s", e.stage, e.cause)
        return EXIT_ERROR
    except HtakError as e:
        logger.error("%s", e)
        return EXIT_ERROR
