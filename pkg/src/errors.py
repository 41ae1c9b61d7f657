# -*- coding: utf-8 -*-
"""
异常定义

所有库内错误都继承自 HtakError，命令行据此决定退出码。
"""
from typing import Optional


class HtakError(Exception):
    """HTAK 错误基类"""


class InputError(HtakError):
    """输入文件或目录缺失"""

    def __init__(self, message: str, path: Optional[str] = None):
        super().__init__(message)
        self.path = path


class DatasetFormatError(HtakError):
    """数据集文件格式错误，带文件名和行号（从1开始）"""

    def __init__(self, message: str, file_name: str = "", line_number: int = 0):
        location = f"{file_name}:{line_number}" if line_number else file_name
        super().__init__(f"{location}: {message}" if location else message)
        self.file_name = file_name
        self.line_number = line_number


class ArgumentError(HtakError, ValueError):
    """库函数参数不合法"""


class ConfigError(HtakError):
    """运行配置不合法"""


class VerificationError(HtakError):
    """Gram 矩阵校验失败"""


class PipelineError(HtakError):
    """流水线某一阶段失败"""

    def __init__(self, stage: str, cause: BaseException):
        super().__init__(f"{stage}: {cause}")
        self.stage = stage
        self.cause = cause
