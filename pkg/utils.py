#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
工具函数模块
提供数值格式化、文本解析、分块与计时等辅助函数
"""

import math
import time
from typing import Iterator, List, Optional


# 输出数值保留的有效数字位数
SIGNIFICANT_DIGITS = 12

# 绝对值达到此量级后改用科学计数法
SCIENTIFIC_THRESHOLD = 1e6


def format_number(value: float, digits: int = SIGNIFICANT_DIGITS) -> str:
    """
    格式化数字显示（CSV与meta文件统一使用）

    小数点固定为'.'，整数部分超过6位或非常小的数用科学计数法。

    Args:
        value: 数字
        digits: 有效数字位数

    Returns:
        格式化的字符串
    """
    value = float(value)
    if math.isnan(value) or math.isinf(value):
        return str(value)
    if value == 0.0:
        return "0"
    if abs(value) >= SCIENTIFIC_THRESHOLD:
        return f"{value:.{digits - 1}e}"
    return f"{value:.{digits}g}"


def parse_bool(text: str) -> bool:
    """
    解析布尔值文本

    Args:
        text: true/false/yes/no/1/0/on/off

    Returns:
        布尔值
    """
    lowered = text.strip().lower()
    if lowered in ("true", "yes", "1", "on"):
        return True
    if lowered in ("false", "no", "0", "off"):
        return False
    raise ValueError(f"无法解析布尔值: {text}")


def parse_complex(text: str) -> complex:
    """
    解析复数文本，接受 0.5+0.2j、0.5+0.2i、1j 等写法

    Args:
        text: 复数文本

    Returns:
        复数
    """
    cleaned = text.strip().replace(" ", "").replace("i", "j")
    if not cleaned:
        raise ValueError("空的复数文本")
    return complex(cleaned)


def format_complex(value: complex, digits: int = SIGNIFICANT_DIGITS) -> str:
    """格式化复数，形如 re+imj，可被 parse_complex 读回"""
    real = format_number(value.real, digits)
    imag = format_number(value.imag, digits)
    sign = "" if imag.startswith("-") else "+"
    return f"{real}{sign}{imag}j"


def clamp(value: float, min_val: float, max_val: float) -> float:
    """
    限制值在指定范围内

    Args:
        value: 原始值
        min_val: 最小值
        max_val: 最大值

    Returns:
        限制后的值
    """
    return max(min_val, min(max_val, value))


def chunk_ranges(total: int, chunk_size: int) -> Iterator[slice]:
    """
    将 0..total-1 的下标分割成连续切片

    Args:
        total: 元素总数
        chunk_size: 块大小

    Returns:
        切片迭代器
    """
    if chunk_size <= 0:
        raise ValueError("chunk_size 必须为正")
    for start in range(0, total, chunk_size):
        yield slice(start, min(start + chunk_size, total))


def split_list(text: str, separator: str = ",") -> List[str]:
    """按分隔符拆分并去掉空白项"""
    return [item.strip() for item in text.split(separator) if item.strip()]


class Timer:
    """计时器"""

    def __init__(self):
        self.start_time = None
        self.end_time = None
        self.elapsed = None

    def start(self):
        """开始计时"""
        self.start_time = time.time()
        self.end_time = None
        self.elapsed = None
        return self

    def stop(self):
        """停止计时"""
        if self.start_time is None:
            raise RuntimeError("计时器未启动")

        self.end_time = time.time()
        self.elapsed = self.end_time - self.start_time
        return self.elapsed

    def get_elapsed(self) -> Optional[float]:
        """
        获取经过时间

        Returns:
            经过时间（秒），如果未停止则返回当前经过时间
        """
        if self.start_time is None:
            return None

        if self.elapsed is not None:
            return self.elapsed

        return time.time() - self.start_time


if __name__ == "__main__":
    print("测试工具函数...")
    print(f"格式化数字: {format_number(0.123456789012345)}")
    print(f"格式化大数: {format_number(12345678.9)}")
    print(f"解析复数: {parse_complex('0.5+0.2i')}")
    print(f"分块: {list(chunk_ranges(10, 4))}")
    print("工具函数测试完成")
