#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
实验运行器、预设、配置与命令行测试
"""

import csv
import logging
import logging.handlers
import math
import sys
import tempfile
from pathlib import Path

import numpy as np

from cli import main as cli_main
from cli import resolve_config
from exceptions import ConfigurationError, InvalidStateError, UnknownPresetError
from experiment_runner import ExperimentRunner, build_initial_state, resolve_observables
from hilbert import DICKE_BASIS, PRODUCT_BASIS
from logger_config import LogContext, get_error_logger, get_experiment_logger, get_simulation_logger, setup_all_loggers
from parameter_config import ExperimentConfig, get_default_config, parse_assignments, parse_config_text
from presets import PRESETS, get_preset, list_presets


EXPECTED_PRESETS = [
    "fig1", "fig2", "fig4a", "fig4b", "fig5", "fig6",
    "fig7a", "fig7b", "fig7c", "fig7d", "fig7e",
    "fig8", "fig9a", "fig9b", "fig10", "fig11", "fig12", "table1",
]


def _read_csv(path: Path):
    with path.open(encoding="utf-8", newline="") as handle:
        rows = list(csv.reader(handle))
    return rows[0], rows[1:]


def _read_meta(path: Path) -> dict:
    values = {}
    for line in path.read_text(encoding="utf-8").splitlines():
        if line.startswith("#") or "=" not in line:
            continue
        key, value = line.split("=", 1)
        values[key.strip()] = value.strip()
    return values


def test_presets():
    """预设列表"""
    print("1. 测试预设顺序...")
    names = [name for name, _ in list_presets()]
    assert names == EXPECTED_PRESETS, f"预设顺序: {names}"
    assert all(description for _, description in list_presets())
    print(f"  ✓ {len(names)} 个预设")

    print("2. 测试预设内容...")
    fig4b = get_preset("fig4b")
    assert fig4b.n_qubits == 2 and fig4b.initial == "basin"
    assert math.isclose(fig4b.basin_a.real, math.sqrt(0.5))
    assert get_preset("fig11").engine == "largen"
    assert get_preset("table1").sweep == "revival_scan"
    for name in PRESETS:
        config = get_preset(name)
        config.validate()
        assert config.preset == name
        build_initial_state(config)
        resolve_observables(config.observables, config.n_qubits)
    print("  ✓ 每个预设都能构造初态并通过校验")

    print("3. 测试每次返回新对象...")
    first = get_preset("fig1")
    first.points = 3
    assert get_preset("fig1").points == 4001

    print("4. 测试未知预设...")
    try:
        get_preset("fig99")
        assert False, "未知预设应当报错"
    except UnknownPresetError as e:
        assert "fig1" in str(e) and "table1" in str(e), "错误信息应列出可用预设"
    print("  ✓ 错误信息列出可用预设")


def test_config_parsing():
    """配置文件与覆盖"""
    print("1. 测试 key = value 解析...")
    text = "# 注释\n\nn_qubits = 2   # 两个量子比特\nbasin_a = 0.5i\nobservables = entropy, tangle\n"
    values = parse_config_text(text)
    config = get_default_config().with_overrides(values)
    assert config.n_qubits == 2 and config.basin_a == 0.5j
    assert config.observables == ["entropy", "tangle"]
    print("  ✓ 注释、空行与列表解析正确")

    print("2. 测试错误输入...")
    for bad in ("n_qubits 2", " = 3"):
        try:
            parse_config_text(bad)
            assert False, f"'{bad}' 应当报错"
        except ConfigurationError:
            pass
    try:
        get_default_config().with_overrides({"unknown_key": "1"})
        assert False, "未知键应当报错"
    except ConfigurationError:
        pass
    try:
        get_default_config().with_overrides({"points": "many"})
        assert False, "无法解析的值应当报错"
    except ConfigurationError:
        pass
    try:
        parse_assignments(["points"])
        assert False, "缺少 '=' 应当报错"
    except ConfigurationError:
        pass
    print("  ✓ 错误输入被拒绝")

    print("3. 测试 to_lines 可读回...")
    default = get_default_config()
    again = get_default_config().with_overrides(parse_config_text("\n".join(default.to_lines())))
    assert again == default
    assert ExperimentConfig.from_dict(default.to_dict()) == default
    try:
        ExperimentConfig.from_dict({"points": 11, "leverage": 3})
        assert False, "未知字段应当报错"
    except ConfigurationError as e:
        assert "leverage" in str(e)
    print("  ✓ 文本与字典形式均可还原")

    print("4. 测试优先级 预设 < 文件 < --set < --out...")
    with tempfile.TemporaryDirectory() as tmp:
        config_file = Path(tmp) / "override.cfg"
        config_file.write_text("points = 11\nnbar = 9\n", encoding="utf-8")
        config = resolve_config("fig1", str(config_file), ["points=21", "output_dir=a"], "b")
        assert config.points == 21 and config.nbar == 9.0 and config.output_dir == "b"
        assert config.preset == "fig1"
    print("  ✓ 覆盖顺序正确")

    print("5. 测试取值校验...")
    for override in ({"engine": "magic"}, {"t_end": "0"}, {"points": "1"}, {"sweep": "other"}):
        try:
            get_default_config().with_overrides(override).validate()
            assert False, f"{override} 应当报错"
        except ConfigurationError:
            pass


def test_initial_state_errors():
    """初态描述"""
    config = get_default_config()
    print("1. 测试合法描述...")
    state = build_initial_state(config.with_overrides({"initial": "dicke:1,0,0", "n_qubits": "2"}))
    assert state.basis == DICKE_BASIS and state.n_qubits == 2
    state = build_initial_state(config.with_overrides({"initial": "amplitudes:1,1j", "normalize_initial": "true"}))
    assert np.allclose(state.amplitudes, np.array([1, 1j]) / math.sqrt(2))

    print("2. 测试非法描述...")
    for overrides in (
        {"initial": "label:gg"},                    # 量子比特数不符
        {"initial": "amplitudes:1,1"},              # 未归一化
        {"initial": "amplitudes:"},                 # 空列表
        {"initial": "amplitudes:1,x"},              # 无法解析
        {"initial": "vacuum"},                      # 未知类型
    ):
        try:
            build_initial_state(config.with_overrides(overrides))
            assert False, f"{overrides} 应当报错"
        except InvalidStateError:
            pass
    print("  ✓ 非法初态被拒绝")


def test_observable_validation():
    """可观测量与量子比特数的匹配"""
    resolve_observables(["entropy", "p_g", "mean_photon"], 1)
    for names, n_qubits in ((["tangle"], 1), (["pairwise_tangle_ab"], 2), (["magnetization"], 2)):
        try:
            resolve_observables(names, n_qubits)
            assert False, f"{names} 对 N_q={n_qubits} 应当报错"
        except ConfigurationError:
            pass
    print("  ✓ 不适用的可观测量被拒绝")


def test_small_run_and_determinism():
    """小规模运行与重复运行的字节一致性"""
    with tempfile.TemporaryDirectory() as tmp:
        config = get_preset("fig1").with_overrides({
            "nbar": "4", "t_end": "0.5", "points": "201", "q_times": "0.25", "q_points": "41",
            "output_dir": tmp,
        })
        result = ExperimentRunner(config).run()
        names = [path.name for path in result.files]
        assert names == ["series.csv", "qgrid_field_t0.25.csv", "meta.txt"], f"输出文件: {names}"
        print(f"  ✓ 输出文件 {names}")

        print("2. 测试 series.csv...")
        header, rows = _read_csv(Path(tmp) / "series.csv")
        assert header == ["t_over_tr", "entropy", "p_g", "p_att_plus", "p_att_minus"]
        assert len(rows) == 201
        assert float(rows[0][0]) == 0.0 and math.isclose(float(rows[-1][0]), 0.5)
        assert abs(float(rows[0][2]) - 1.0) < 1e-12, "t=0 时 P_g = 1"
        assert float(rows[0][1]) < 1e-12, "t=0 时熵为0"

        print("3. 测试 meta.txt...")
        meta = _read_meta(Path(tmp) / "meta.txt")
        assert meta["preset"] == "fig1"
        assert meta["n_max"] == "34"
        assert meta["basis"] == DICKE_BASIS
        assert meta["in_basin"] == "true"
        assert float(meta["max_norm_drift"]) < 1e-10
        assert float(meta["max_excitation_drift"]) < 1e-8
        assert float(meta["max_entropy_gap"]) < 1e-8
        assert abs(float(meta["q_integral_field_t0.25"]) - 1.0) < 0.01

        print("4. 测试重复运行字节一致...")
        first = (Path(tmp) / "series.csv").read_bytes()
        grid = (Path(tmp) / "qgrid_field_t0.25.csv").read_bytes()
        ExperimentRunner(config).run()
        assert (Path(tmp) / "series.csv").read_bytes() == first
        assert (Path(tmp) / "qgrid_field_t0.25.csv").read_bytes() == grid
    print("  ✓ 两次运行输出完全一致")


def test_product_basis_run():
    """非对称初态使用乘积基"""
    with tempfile.TemporaryDirectory() as tmp:
        config = get_preset("fig7b").with_overrides({
            "nbar": "4", "t_end": "0.3", "points": "31", "output_dir": tmp,
        })
        result = ExperimentRunner(config).run()
        assert result.basis == PRODUCT_BASIS
        assert not result.in_basin
        assert math.isclose(result.columns["concurrence"][0], 1.0, abs_tol=1e-9)
    print("  ✓ (|eg⟩+i|ge⟩)/√2 初始 concurrence = 1")


def test_basin_sweep():
    """吸引盆扫描"""
    with tempfile.TemporaryDirectory() as tmp:
        config = get_preset("fig5").with_overrides({"sweep_points": "41", "output_dir": tmp})
        ExperimentRunner(config).run()
        header, rows = _read_csv(Path(tmp) / "sweep.csv")
        assert header == ["a_re", "a_im", "tangle", "concurrence"]
        assert len(rows) == 82
        real = rows[:41]
        imaginary = rows[41:]
        assert math.isclose(float(real[20][2]), 1.0, abs_tol=1e-9), "a=0 时 τ=1"
        assert math.isclose(float(real[0][2]), 1.0, abs_tol=1e-9), "a=-1/√2 时 τ=1"
        assert min(float(row[2]) for row in real) < 0.01, "a≈±1/2 时 τ≈0"
        assert all(math.isclose(float(row[2]), 1.0, abs_tol=1e-9) for row in imaginary)
    print("  ✓ 实轴 τ = (4a²-1)²，虚轴 τ = 1")

    print("2. 测试三量子比特扫描...")
    with tempfile.TemporaryDirectory() as tmp:
        config = get_preset("fig8").with_overrides({"sweep_points": "21", "output_dir": tmp})
        ExperimentRunner(config).run()
        header, rows = _read_csv(Path(tmp) / "sweep.csv")
        assert header == ["a_re", "a_im", "three_tangle", "pairwise_tangle_ab"]
        assert math.isclose(float(rows[10][2]), 1.0, abs_tol=1e-9), "a=0 为GHZ型, τ_ABC=1"
        assert all(float(row[3]) < 1e-9 for row in rows)
    print("  ✓ 三量子比特扫描正确")

    print("3. 测试量子比特数不符...")
    with tempfile.TemporaryDirectory() as tmp:
        try:
            ExperimentRunner(get_preset("fig5").with_overrides({
                "n_qubits": "3", "basin_a": "0", "output_dir": tmp,
            })).run()
            assert False, "N_q=3 不能做两量子比特扫描"
        except ConfigurationError:
            pass


def test_largen_engine_run():
    """40量子比特大n̄运行汇聚到吸引子"""
    with tempfile.TemporaryDirectory() as tmp:
        config = get_preset("fig11").with_overrides({"spin_q_points": "81", "output_dir": tmp})
        result = ExperimentRunner(config).run()
        assert result.basis == DICKE_BASIS
        p_att = result.columns["p_att_plus"][-1]
        assert p_att > 1 - 1e-8, f"t_r/80 时 P_att = {p_att}"
        meta = _read_meta(Path(tmp) / "meta.txt")
        assert meta["max_excitation_drift"] == "none"
        assert float(meta["assembly_defect"]) < 1e-6
        assert (Path(tmp) / "qgrid_spin_t0.0125.csv").exists()
    print(f"  ✓ P_att(t_r/80) = {p_att:.12f}")

    print("2. 测试盆外初态被拒绝...")
    with tempfile.TemporaryDirectory() as tmp:
        try:
            ExperimentRunner(get_preset("fig11").with_overrides({
                "n_qubits": "3", "initial": "label:ggg", "output_dir": tmp,
            })).run()
            assert False, "盆外的三量子比特初态不能使用大n̄引擎"
        except InvalidStateError:
            pass


def test_cli_exit_codes():
    """命令行退出码"""
    assert cli_main(["list-presets"]) == 0
    assert cli_main(["describe", "--preset", "fig7c"]) == 0
    assert cli_main(["run", "--preset", "fig99"]) == 1
    assert cli_main(["run", "--preset", "fig1", "--set", "observables=tangle"]) == 1
    with tempfile.TemporaryDirectory() as tmp:
        code = cli_main(["run", "--preset", "fig1", "--set", "nbar=1", "--set", "points=51",
                         "--set", "t_end=0.2", "--out", tmp, "--quiet"])
        assert code == 0
        assert (Path(tmp) / "series.csv").exists() and (Path(tmp) / "meta.txt").exists()
    try:
        cli_main(["run"])
        assert False, "缺少 --preset 应当退出"
    except SystemExit as e:
        assert e.code == 2
    print("  ✓ 成功为0，配置错误为1，用法错误为2")


def test_logging_channels():
    """日志通道"""
    print("1. 测试通道级别...")
    setup_all_loggers("DEBUG")
    simulation = get_simulation_logger()
    assert simulation is get_simulation_logger(), "重复获取应返回同一记录器"
    assert simulation.level == logging.DEBUG
    assert get_error_logger().level == logging.ERROR
    console = [h for h in simulation.handlers if type(h) is logging.StreamHandler]
    assert len(console) == 1 and console[0].level == logging.WARNING
    files = [h for h in get_experiment_logger().handlers if isinstance(h, logging.handlers.RotatingFileHandler)]
    assert len(files) == 1 and Path(files[0].baseFilename).name.startswith("experiment_")
    print("  ✓ simulation 终端只显示警告，error 保持 ERROR")

    print("2. 测试 LogContext 记录失败...")
    records = []

    class _Collect(logging.Handler):
        def emit(self, record):
            records.append(record)

    collector = _Collect()
    logger = get_experiment_logger()
    logger.addHandler(collector)
    try:
        with LogContext(logger, logging.INFO, "失败操作"):
            raise ValueError("boom")
    except ValueError:
        pass
    finally:
        logger.removeHandler(collector)
    assert records[-1].levelno == logging.ERROR and "boom" in records[-1].getMessage()
    print("  ✓ 异常写入 ERROR 并继续抛出")


if __name__ == "__main__":
    from run_tests import run_module
    sys.exit(run_module(sys.modules[__name__]))
