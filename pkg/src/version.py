# -*- coding: utf-8 -*-
"""
HTAK 图核工具版本号，写入每次运行的元数据
"""

__version__ = "0.4.0"
