#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
自定义异常类
定义模拟库中使用的各种异常类型
"""

from typing import Iterable, Optional


class SimulationError(Exception):
    """模拟库基础异常"""
    pass


class TruncationError(SimulationError):
    """Fock截断不足异常"""
    def __init__(self, n_max: int, detail: str = "Fock截断不足"):
        self.n_max = n_max
        self.message = f"n_max={n_max}: {detail}"
        super().__init__(self.message)


class DimensionMismatchError(SimulationError):
    """维度不匹配异常"""
    def __init__(self, expected, actual, context: str = "维度不匹配"):
        self.expected = expected
        self.actual = actual
        self.message = f"{context} (期望: {expected}, 实际: {actual})"
        super().__init__(self.message)


class InvalidStateError(SimulationError):
    """量子态无效异常"""
    def __init__(self, reason: str = "量子态无效"):
        self.reason = reason
        super().__init__(reason)


class InvalidParameterError(SimulationError):
    """参数无效异常"""
    def __init__(self, parameter: str, value, reason: str = "参数无效"):
        self.parameter = parameter
        self.value = value
        self.message = f"{parameter}={value}: {reason}"
        super().__init__(self.message)


class DensityMatrixError(SimulationError):
    """密度矩阵无效异常"""
    def __init__(self, reason: str = "密度矩阵无效"):
        self.reason = reason
        super().__init__(reason)


class MixedStateError(DensityMatrixError):
    """需要纯态却收到混态"""
    def __init__(self, purity: float):
        self.purity = purity
        super().__init__(f"输入不是纯态 (Tr ρ² = {purity:.12f})")


class GridTooCoarseError(SimulationError):
    """时间网格过粗异常"""
    def __init__(self, step: float, limit: float):
        self.step = step
        self.limit = limit
        self.message = f"时间网格步长 {step:.6g} 不小于 t_c/10 = {limit:.6g}"
        super().__init__(self.message)


class ConfigurationError(SimulationError):
    """配置错误异常"""
    def __init__(self, parameter: str, message: str = "配置错误"):
        self.parameter = parameter
        self.message = f"{parameter}: {message}"
        super().__init__(self.message)


class UnknownPresetError(ConfigurationError):
    """未知预设异常"""
    def __init__(self, name: str, available: Optional[Iterable[str]] = None):
        self.name = name
        self.available = list(available or [])
        message = f"未知预设 '{name}'，可用预设: {', '.join(self.available)}"
        super().__init__("preset", message)
