#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
Tavis-Cummings 模拟库 - 环境自检脚本
检查Python版本、数值依赖、核心模块能否导入，并做一次小规模数值冒烟测试
"""

import sys
from pathlib import Path
from typing import List, Optional, Tuple


CheckResult = Tuple[bool, str]


class SystemIntegrityChecker:
    """系统完整性检查器"""

    # 核心模块（文件名, 模块名）
    CORE_MODULES = [
        # 数值核心
        'hilbert.py',
        'dynamics.py',
        'largen.py',
        'measures.py',

        # 实验与命令行
        'parameter_config.py',
        'presets.py',
        'experiment_runner.py',
        'cli.py',

        # 工具模块
        'exceptions.py',
        'logger_config.py',
        'utils.py',
    ]

    TEST_MODULES = [
        'run_tests.py',
        'test_hilbert.py',
        'test_dynamics.py',
        'test_largen.py',
        'test_measures.py',
        'test_experiment.py',
        'test_acceptance.py',
    ]

    # 数值依赖
    DEPENDENCIES = [
        'numpy',
        'scipy',
        'scipy.linalg',
        'scipy.sparse',
        'scipy.special',
        'scipy.ndimage',
        'scipy.signal',
    ]

    MINIMUM_PYTHON = (3, 8)

    def __init__(self, project_root: Optional[str] = None):
        """
        初始化检查器

        Args:
            project_root: 项目根目录（默认为脚本所在目录）
        """
        self.project_root = Path(project_root) if project_root else Path(__file__).parent
        if str(self.project_root) not in sys.path:
            sys.path.insert(0, str(self.project_root))

    def check_file_exists(self, file_path: str) -> CheckResult:
        if (self.project_root / file_path).exists():
            return True, f"✓ {file_path}"
        return False, f"✗ {file_path} (缺失)"

    def check_module_importable(self, module_name: str) -> CheckResult:
        try:
            __import__(module_name)
            return True, f"✓ {module_name}"
        except ImportError as e:
            return False, f"✗ {module_name} (导入失败: {e})"

    def check_python_version(self) -> CheckResult:
        version = sys.version_info
        text = f"Python {version.major}.{version.minor}.{version.micro}"
        if version >= self.MINIMUM_PYTHON:
            return True, f"✓ {text}"
        return False, f"✗ {text} (需要{self.MINIMUM_PYTHON[0]}.{self.MINIMUM_PYTHON[1]}+)"

    def check_dependencies(self) -> List[CheckResult]:
        return [self.check_module_importable(dep) for dep in self.DEPENDENCIES]

    def check_core_modules(self) -> List[CheckResult]:
        """核心模块必须存在且可导入"""
        results = []
        for file_name in self.CORE_MODULES:
            exists, message = self.check_file_exists(file_name)
            if exists:
                exists, message = self.check_module_importable(file_name[:-3])
            results.append((exists, message))
        return results

    def check_test_modules(self) -> List[CheckResult]:
        return [self.check_file_exists(module) for module in self.TEST_MODULES]

    def check_smoke(self) -> CheckResult:
        """单量子比特、n̄=1 的精确演化与闭式解对比"""
        try:
            from dynamics import build_blocks, evolve, one_qubit_analytic
            from hilbert import ModelConfig, QubitState, embed_product

            model = ModelConfig(n_qubits=1, nbar=1.0)
            prop = build_blocks(model)
            initial = embed_product(QubitState.from_labels("g"), model.field, model.n_max)
            exact = evolve(prop, initial, 3.0).amplitudes
            closed = one_qubit_analytic(0.0, 1.0, model.field, 3.0, model.n_max).amplitudes
            error = float(abs(exact - closed).max())
        except Exception as e:
            return False, f"✗ 冒烟测试失败: {e}"
        if error < 1e-9:
            return True, f"✓ 精确演化与闭式解一致 (最大偏差 {error:.2e})"
        return False, f"✗ 精确演化与闭式解偏差 {error:.2e}"

    @staticmethod
    def _print_section(title: str, results: List[CheckResult]) -> int:
        print(title)
        print("-" * 70)
        for _, message in results:
            print(f"  {message}")
        passed = sum(1 for ok, _ in results if ok)
        print(f"  通过: {passed}/{len(results)}")
        print()
        return passed

    def run_all_checks(self) -> bool:
        """
        运行所有检查

        Returns:
            是否所有必需检查都通过
        """
        print("=" * 70)
        print("Tavis-Cummings 模拟库 - 完整性检查")
        print("=" * 70)
        print()

        version_ok, version_message = self.check_python_version()
        self._print_section("1. Python版本检查", [(version_ok, version_message)])

        dep_results = self.check_dependencies()
        dep_passed = self._print_section("2. 数值依赖检查", dep_results)

        core_results = self.check_core_modules()
        core_passed = self._print_section("3. 核心模块检查", core_results)

        smoke_ok = False
        if dep_passed == len(dep_results) and core_passed == len(core_results):
            smoke_ok, smoke_message = self.check_smoke()
        else:
            smoke_message = "✗ 依赖或核心模块缺失，跳过"
        self._print_section("4. 数值冒烟测试", [(smoke_ok, smoke_message)])

        test_results = self.check_test_modules()
        test_passed = self._print_section("5. 测试模块检查（可选）", test_results)

        all_required_passed = (version_ok and dep_passed == len(dep_results)
                               and core_passed == len(core_results) and smoke_ok)

        print("=" * 70)
        if all_required_passed:
            print("✓ 所有必需检查通过！")
            if test_passed < len(test_results):
                print(f"  提示: 有{len(test_results) - test_passed}个测试模块缺失（可选）")
        else:
            print("✗ 部分必需检查失败，请修复后再运行。")
            print()
            print("修复建议：")
            if not version_ok:
                print(f"  - 请安装Python {self.MINIMUM_PYTHON[0]}.{self.MINIMUM_PYTHON[1]}或更高版本")
            if dep_passed < len(dep_results):
                print("  - 请运行: pip install -r requirements.txt")
            if core_passed < len(core_results):
                print("  - 请确保所有核心模块文件存在于项目目录中")
        print("=" * 70)
        return all_required_passed


def main():
    """主函数"""
    import argparse

    parser = argparse.ArgumentParser(description='Tavis-Cummings 模拟库完整性检查')
    parser.add_argument('--project-root', type=str,
                        help='项目根目录（默认为脚本所在目录）')
    args = parser.parse_args()

    checker = SystemIntegrityChecker(args.project_root)
    return 0 if checker.run_all_checks() else 1


if __name__ == "__main__":
    sys.exit(main())
