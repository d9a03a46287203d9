#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
日志配置模块
统一管理模拟库与实验运行器的日志输出

四个通道：system（命令行、自检）、simulation（分块对角化、演化、大n̄组装）、
experiment（预设运行、结果输出）、error（运行失败）。
每个通道写入 logs/<通道>_<日期>.log，并按 console 级别回显到终端。
"""

import logging
import logging.handlers
from dataclasses import dataclass
from datetime import datetime
from functools import wraps
from pathlib import Path
from typing import Dict


@dataclass(frozen=True)
class LogChannel:
    """日志通道参数"""
    level: str            # 记录器级别
    console_level: str    # 终端回显级别


CHANNELS: Dict[str, LogChannel] = {
    "system": LogChannel("DEBUG", "INFO"),
    # 演化过程日志较多，终端只显示警告
    "simulation": LogChannel("DEBUG", "WARNING"),
    "experiment": LogChannel("DEBUG", "INFO"),
    "error": LogChannel("ERROR", "ERROR"),
}


class LoggerConfig:
    """日志配置类（单例）"""

    _instance = None
    _initialized = False

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __init__(self):
        if LoggerConfig._initialized:
            return

        self.log_dir = Path("logs")
        self.log_format = '%(asctime)s - %(name)s - %(levelname)s - %(message)s'
        self.date_format = '%Y-%m-%d %H:%M:%S'
        self.max_bytes = 10 * 1024 * 1024
        self.backup_count = 5
        self.log_dir.mkdir(exist_ok=True)

        LoggerConfig._initialized = True

    def setup_logger(self, name: str) -> logging.Logger:
        """
        按 CHANNELS 中的参数配置一个通道

        Args:
            name: 通道名

        Returns:
            配置好的记录器；重复调用返回同一个对象
        """
        channel = CHANNELS[name]
        logger = logging.getLogger(name)
        if logger.handlers:
            return logger

        logger.setLevel(getattr(logging, channel.level))
        formatter = logging.Formatter(self.log_format, self.date_format)

        console_handler = logging.StreamHandler()
        console_handler.setLevel(getattr(logging, channel.console_level))
        console_handler.setFormatter(formatter)
        logger.addHandler(console_handler)

        log_file = self.log_dir / f"{name}_{datetime.now().strftime('%Y%m%d')}.log"
        file_handler = logging.handlers.RotatingFileHandler(
            log_file,
            maxBytes=self.max_bytes,
            backupCount=self.backup_count,
            encoding='utf-8'
        )
        file_handler.setLevel(logging.DEBUG)
        file_handler.setFormatter(formatter)
        logger.addHandler(file_handler)

        return logger


def get_system_logger() -> logging.Logger:
    """命令行与自检"""
    return LoggerConfig().setup_logger("system")


def get_simulation_logger() -> logging.Logger:
    """分块对角化、演化与大n̄组装"""
    return LoggerConfig().setup_logger("simulation")


def get_experiment_logger() -> logging.Logger:
    """预设运行与结果输出"""
    return LoggerConfig().setup_logger("experiment")


def get_error_logger() -> logging.Logger:
    return LoggerConfig().setup_logger("error")


def setup_all_loggers(level: str = "INFO"):
    """
    配置全部通道，并把 system / simulation / experiment 的级别设为 level

    Args:
        level: 日志级别（DEBUG, INFO, WARNING, ERROR）
    """
    numeric_level = getattr(logging, level.upper(), logging.INFO)
    for name in CHANNELS:
        logger = LoggerConfig().setup_logger(name)
        if name != "error":
            logger.setLevel(numeric_level)


class LogContext:
    """记录一段操作的开始、完成与耗时"""

    def __init__(self, logger: logging.Logger, level: int, message: str):
        self.logger = logger
        self.level = level
        self.message = message
        self.start_time = None

    def __enter__(self):
        self.start_time = datetime.now()
        self.logger.log(self.level, f"{self.message} - 开始")
        return self

    def __exit__(self, exc_type, exc_val, exc_tb):
        duration = (datetime.now() - self.start_time).total_seconds()

        if exc_type is None:
            self.logger.log(self.level, f"{self.message} - 完成 (耗时: {duration:.2f}秒)")
        else:
            self.logger.error(f"{self.message} - 失败 (耗时: {duration:.2f}秒, 错误: {exc_val})")

        return False


def log_execution_time(logger: logging.Logger, level: int = logging.INFO):
    """
    装饰器：记录函数执行时间

    Args:
        logger: 日志记录器
        level: 日志级别
    """
    def decorator(func):
        @wraps(func)
        def wrapper(*args, **kwargs):
            with LogContext(logger, level, func.__name__):
                return func(*args, **kwargs)

        return wrapper
    return decorator


if __name__ == "__main__":
    setup_all_loggers(level="DEBUG")

    get_system_logger().info("系统日志测试")
    get_simulation_logger().debug("模拟日志测试")

    with LogContext(get_experiment_logger(), logging.INFO, "测试操作"):
        pass

    print("日志配置测试完成")
