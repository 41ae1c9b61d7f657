# -*- coding: utf-8 -*-
"""
配置管理器

配置来源按优先级从低到高：默认值 < YAML 配置文件 < 环境变量 < 命令行参数。
"""
import copy
import json
import os
import logging
from dataclasses import dataclass, field, asdict
from pathlib import Path
from typing import Dict, Any, List, Optional, Mapping

import yaml

from .errors import ConfigError

logger = logging.getLogger(__name__)

MODE_SINGLE = "single-H"
MODE_SWEEP = "sweep"
MODES = (MODE_SINGLE, MODE_SWEEP)

FORMAT_CSV = "csv"
FORMAT_SVM = "svm-precomputed"
FORMAT_META = "json-meta"
FORMATS = (FORMAT_CSV, FORMAT_SVM, FORMAT_META)

DUMPS = ("db", "prototypes", "features")

MAX_HEIGHT = 16

ENV_THREADS = "HTAK_THREADS"
ENV_LOG_LEVEL = "HTAK_LOG_LEVEL"

INT_FIELDS = ("H", "seed", "max_iter", "chunk_size", "folds")
OPTIONAL_INT_FIELDS = ("max_k", "threads")


@dataclass
class RunConfig:
    """一次运行的全部参数"""
    dataset_path: str = ""
    prefix: str = ""
    name: str = ""
    H: int = 5
    ratio: float = 0.2
    seed: int = 42
    max_k: Optional[int] = None
    mode: str = MODE_SINGLE
    output_dir: str = "output"
    formats: List[str] = field(default_factory=lambda: [FORMAT_CSV, FORMAT_META])
    dumps: List[str] = field(default_factory=list)
    threads: Optional[int] = None
    normalize: bool = False
    max_iter: int = 100
    chunk_size: int = 4096
    folds: int = 10
    log_level: str = "INFO"

    @property
    def run_name(self) -> str:
        return self.name or self.prefix or Path(self.dataset_path).name or "htak"

    def _coerce(self):
        """YAML 与环境变量中的数值可能是字符串，统一转换为字段类型"""
        for name in INT_FIELDS + OPTIONAL_INT_FIELDS:
            value = getattr(self, name)
            if value is None and name in OPTIONAL_INT_FIELDS:
                continue
            if isinstance(value, bool) or isinstance(value, float) and not value.is_integer():
                raise ConfigError(f"{name} 必须是整数: {value!r}")
            try:
                setattr(self, name, int(value))
            except (TypeError, ValueError):
                raise ConfigError(f"{name} 必须是整数: {value!r}") from None
        if isinstance(self.ratio, bool):
            raise ConfigError(f"ratio 必须是数值: {self.ratio!r}")
        try:
            self.ratio = float(self.ratio)
        except (TypeError, ValueError):
            raise ConfigError(f"ratio 必须是数值: {self.ratio!r}") from None
        if not isinstance(self.normalize, bool):
            raise ConfigError(f"normalize 必须是布尔值: {self.normalize!r}")
        for name in ("formats", "dumps"):
            value = getattr(self, name)
            if isinstance(value, str):
                value = [value]
            if not isinstance(value, (list, tuple)):
                raise ConfigError(f"{name} 必须是列表: {value!r}")
            setattr(self, name, list(value))

    def validate(self) -> 'RunConfig':
        """转换数值类型并检查取值范围，返回自身"""
        self._coerce()
        if not 1 <= self.H <= MAX_HEIGHT:
            raise ConfigError(f"H 必须是 1..{MAX_HEIGHT} 的整数: {self.H!r}")
        if not 0 < float(self.ratio) < 1:
            raise ConfigError(f"ratio 必须在 (0, 1) 内: {self.ratio!r}")
        if self.max_k is not None and self.max_k < 1:
            raise ConfigError(f"max_k 必须为正整数: {self.max_k!r}")
        if self.mode not in MODES:
            raise ConfigError(f"未知模式 {self.mode!r}，可选 {', '.join(MODES)}")
        unknown = [f for f in self.formats if f not in FORMATS]
        if unknown:
            raise ConfigError(f"未知导出格式 {unknown}，可选 {', '.join(FORMATS)}")
        unknown = [d for d in self.dumps if d not in DUMPS]
        if unknown:
            raise ConfigError(f"未知调试导出 {unknown}，可选 {', '.join(DUMPS)}")
        if self.threads is not None and self.threads < 1:
            raise ConfigError(f"threads 必须 >= 1: {self.threads!r}")
        if self.max_iter < 1 or self.chunk_size < 1:
            raise ConfigError("max_iter 与 chunk_size 必须 >= 1")
        if self.folds < 2:
            raise ConfigError(f"folds 必须 >= 2: {self.folds!r}")
        if logging.getLevelName(str(self.log_level).upper()) == f"Level {str(self.log_level).upper()}":
            raise ConfigError(f"未知日志级别: {self.log_level!r}")
        return self

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> 'RunConfig':
        known = {k: v for k, v in data.items() if k in cls.__dataclass_fields__}
        return cls(**known)


class ConfigManager:
    """配置管理器"""

    DEFAULT_CONFIG = {
        "dataset": {
            "path": "",
            "prefix": "",
            "name": ""
        },
        "kernel": {
            "H": 5,
            "ratio": 0.2,
            "seed": 42,
            "max_k": None,
            "mode": MODE_SINGLE,
            "normalize": False
        },
        "kmeans": {
            "max_iter": 100,
            "chunk_size": 4096
        },
        "output": {
            "directory": "output",
            "formats": [FORMAT_CSV, FORMAT_META],
            "dumps": []
        },
        "evaluation": {
            "folds": 10
        },
        "runtime": {
            "threads": None,
            "log_level": "INFO"
        }
    }

    # RunConfig 字段 -> 配置键
    FIELD_KEYS = {
        "dataset_path": "dataset.path",
        "prefix": "dataset.prefix",
        "name": "dataset.name",
        "H": "kernel.H",
        "ratio": "kernel.ratio",
        "seed": "kernel.seed",
        "max_k": "kernel.max_k",
        "mode": "kernel.mode",
        "normalize": "kernel.normalize",
        "max_iter": "kmeans.max_iter",
        "chunk_size": "kmeans.chunk_size",
        "output_dir": "output.directory",
        "formats": "output.formats",
        "dumps": "output.dumps",
        "folds": "evaluation.folds",
        "threads": "runtime.threads",
        "log_level": "runtime.log_level",
    }

    def __init__(self, config_file: Optional[str] = None,
                 environ: Optional[Mapping[str, str]] = None):
        self._config: Dict[str, Any] = copy.deepcopy(self.DEFAULT_CONFIG)
        self.config_file = Path(config_file) if config_file else None
        if self.config_file is not None:
            self.load(self.config_file)
        self.apply_env(os.environ if environ is None else environ)

    def load(self, config_file: Path):
        """合并 YAML 配置文件"""
        if not config_file.is_file():
            raise ConfigError(f"配置文件不存在: {config_file}")
        try:
            with open(config_file, 'r', encoding='utf-8') as f:
                data = yaml.safe_load(f) or {}
        except yaml.YAMLError as e:
            raise ConfigError(f"配置文件解析失败 {config_file}: {e}") from e
        if not isinstance(data, dict):
            raise ConfigError(f"配置文件顶层必须是映射: {config_file}")
        self._merge(self._config, data)
        logger.debug("已加载配置文件 %s", config_file)

    def _merge(self, target: Dict[str, Any], source: Dict[str, Any]):
        for key, value in source.items():
            if isinstance(value, dict) and isinstance(target.get(key), dict):
                self._merge(target[key], value)
            else:
                target[key] = value

    def apply_env(self, environ: Mapping[str, str]):
        """读取 HTAK_THREADS 与 HTAK_LOG_LEVEL"""
        threads = environ.get(ENV_THREADS)
        if threads:
            try:
                self.set("runtime.threads", int(threads))
            except ValueError:
                raise ConfigError(f"{ENV_THREADS} 必须是整数: {threads!r}") from None
        level = environ.get(ENV_LOG_LEVEL)
        if level:
            self.set("runtime.log_level", level.upper())

    def apply_overrides(self, overrides: Mapping[str, Any]):
        """按 RunConfig 字段名覆盖配置，值为 None 的字段忽略"""
        for field_name, value in overrides.items():
            if value is None:
                continue
            key = self.FIELD_KEYS.get(field_name)
            if key is None:
                raise ConfigError(f"未知配置项: {field_name}")
            self.set(key, value)

    def get(self, key: str, default: Any = None) -> Any:
        """获取配置值"""
        keys = key.split('.')
        value = self._config
        for k in keys:
            if isinstance(value, dict):
                value = value.get(k, default)
            else:
                return default
        return value if value is not None else default

    def set(self, key: str, value: Any):
        """设置配置值"""
        keys = key.split('.')
        config = self._config
        for k in keys[:-1]:
            if k not in config:
                config[k] = {}
            config = config[k]
        config[keys[-1]] = value

    def build_run_config(self) -> RunConfig:
        """生成并校验 RunConfig"""
        values = {name: self.get(key) for name, key in self.FIELD_KEYS.items()}
        values = {k: v for k, v in values.items() if v is not None}
        return RunConfig.from_dict(values).validate()

    @classmethod
    def from_run_config(cls, config: RunConfig) -> 'ConfigManager':
        """由 RunConfig 反向生成分层配置，不读取环境变量"""
        manager = cls(environ={})
        for field_name, key in cls.FIELD_KEYS.items():
            manager.set(key, copy.deepcopy(getattr(config, field_name)))
        return manager

    def to_dict(self) -> Dict[str, Any]:
        return copy.deepcopy(self._config)

    def save(self, path: str) -> str:
        """保存生效的配置"""
        with open(path, 'w', encoding='utf-8') as f:
            json.dump(self._config, f, indent=4, ensure_ascii=False)
        return str(path)
