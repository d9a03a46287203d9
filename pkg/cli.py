#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
命令行入口

用法:
    python cli.py run --preset fig1 [--config file.cfg] [--set key=value ...] [--out dir]
    python cli.py list-presets
    python cli.py describe --preset fig7c
"""

import argparse
import sys
from typing import List, Optional

from exceptions import SimulationError
from experiment_runner import ExperimentRunner
from logger_config import get_error_logger, get_system_logger, setup_all_loggers
from parameter_config import ExperimentConfig, load_config_file, parse_assignments
from presets import get_preset, list_presets


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(description="多量子比特 Tavis-Cummings 动力学模拟")
    parser.add_argument("--log-level", default="WARNING",
                        choices=["DEBUG", "INFO", "WARNING", "ERROR"], help="日志级别")
    commands = parser.add_subparsers(dest="command", required=True)

    run_parser = commands.add_parser("run", help="运行一个预设")
    run_parser.add_argument("--preset", required=True, help="预设名称")
    run_parser.add_argument("--config", help="key = value 配置文件，覆盖预设")
    run_parser.add_argument("--set", dest="assignments", action="append", default=[],
                            metavar="KEY=VALUE", help="覆盖单个参数，可重复")
    run_parser.add_argument("--out", help="输出目录")
    run_parser.add_argument("--quiet", action="store_true", help="不打印运行摘要")

    commands.add_parser("list-presets", help="列出所有预设")

    describe_parser = commands.add_parser("describe", help="显示预设的完整参数")
    describe_parser.add_argument("--preset", required=True, help="预设名称")
    return parser


def resolve_config(
    preset: str,
    config_file: Optional[str] = None,
    assignments: Optional[List[str]] = None,
    output_dir: Optional[str] = None
) -> ExperimentConfig:
    """
    合并参数：预设 < 配置文件 < --set < --out

    Returns:
        ExperimentConfig
    """
    config = get_preset(preset)
    if config_file:
        config = config.with_overrides(load_config_file(config_file))
    config = config.with_overrides(parse_assignments(assignments))
    if output_dir:
        config = config.with_overrides({"output_dir": output_dir})
    config.validate()
    return config


def _command_run(args) -> int:
    config = resolve_config(args.preset, args.config, args.assignments, args.out)
    runner = ExperimentRunner(config)
    result = runner.run()
    if not args.quiet:
        runner.print_result(result)
    return 0


def _command_list() -> int:
    for name, description in list_presets():
        print(f"{name:<8} {description}")
    return 0


def _command_describe(args) -> int:
    config = get_preset(args.preset)
    print(f"# {config.preset}: {config.description}")
    print("\n".join(config.to_lines()))
    return 0


def main(argv: Optional[List[str]] = None) -> int:
    """主函数，返回退出码"""
    parser = build_parser()
    args = parser.parse_args(argv)
    setup_all_loggers(args.log_level)
    logger = get_system_logger()
    logger.debug(f"命令: {args.command}")

    try:
        if args.command == "run":
            return _command_run(args)
        if args.command == "list-presets":
            return _command_list()
        return _command_describe(args)
    except SimulationError as e:
        get_error_logger().error(f"{args.command} 失败: {e}")
        print(f"错误: {e}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
