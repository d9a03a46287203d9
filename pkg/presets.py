#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
实验预设
每个预设对应一组完整的实验参数，可被配置文件和 --set 覆盖
"""

import math
from collections import OrderedDict
from dataclasses import dataclass, replace
from typing import Callable, List, Tuple

from exceptions import UnknownPresetError
from parameter_config import ExperimentConfig


SQRT_HALF = math.sqrt(0.5)


@dataclass(frozen=True)
class Preset:
    """预设：名称、一行说明与参数工厂"""
    name: str
    description: str
    factory: Callable[[], ExperimentConfig]

    def build(self) -> ExperimentConfig:
        config = self.factory()
        return replace(config, preset=self.name, description=self.description)


def _amplitudes(*values) -> str:
    return "amplitudes:" + ",".join(repr(v) if isinstance(v, float) else str(v) for v in values)


_TWO_QUBIT_TANGLE = ["entropy", "p_g", "tangle", "concurrence", "raw_tangle"]


def _fig1() -> ExperimentConfig:
    return ExperimentConfig(
        n_qubits=1, initial="label:g", t_end=2.0, points=4001,
        observables=["entropy", "p_g", "p_att_plus", "p_att_minus"],
    )


def _fig2() -> ExperimentConfig:
    return ExperimentConfig(
        n_qubits=1, initial="label:g", t_end=2.0, points=801,
        observables=["entropy", "p_g"],
        q_times=[0.0, 0.125, 0.5, 0.97, 1.5, 2.0],
    )


def _fig4a() -> ExperimentConfig:
    return ExperimentConfig(
        n_qubits=2, initial="label:gg", t_end=1.0, points=2001,
        observables=["entropy", "p_g", "p_att_plus", "tangle"],
        q_times=[0.25],
    )


def _fig4b() -> ExperimentConfig:
    return ExperimentConfig(
        n_qubits=2, initial="basin", basin_a=complex(SQRT_HALF), t_end=1.0, points=2001,
        observables=["entropy", "p_g", "p_att_plus", "tangle"],
        q_times=[0.25],
    )


def _fig5() -> ExperimentConfig:
    return ExperimentConfig(
        n_qubits=2, initial="basin", sweep="basin_tangle", sweep_points=401, observables=[],
    )


def _fig6() -> ExperimentConfig:
    return ExperimentConfig(
        n_qubits=2, initial="basin", basin_a=complex(SQRT_HALF), t_end=1.0, points=2001,
        observables=list(_TWO_QUBIT_TANGLE),
    )


def _two_qubit_tangle(initial: str) -> Callable[[], ExperimentConfig]:
    def factory() -> ExperimentConfig:
        return ExperimentConfig(
            n_qubits=2, initial=initial, t_end=1.0, points=2001,
            observables=list(_TWO_QUBIT_TANGLE),
        )
    return factory


def _fig8() -> ExperimentConfig:
    return ExperimentConfig(
        n_qubits=3, initial="basin", sweep="basin_three_tangle", sweep_points=401, observables=[],
    )


def _basin_run(n_qubits: int, a: complex) -> Callable[[], ExperimentConfig]:
    def factory() -> ExperimentConfig:
        return ExperimentConfig(
            n_qubits=n_qubits, initial="basin", basin_a=complex(a), t_end=1.0, points=2001,
            observables=["entropy", "p_g", "p_att_plus", "p_init"],
        )
    return factory


def _fig10() -> ExperimentConfig:
    return ExperimentConfig(
        n_qubits=40, initial="basin", basin_a=0j, t_end=0.0125, points=2,
        observables=["entropy", "p_init"], spin_q_times=[0.0],
    )


def _fig11() -> ExperimentConfig:
    return ExperimentConfig(
        n_qubits=40, initial="basin", basin_a=0j, engine="largen", t_end=0.0125, points=2,
        observables=["entropy", "p_att_plus"], spin_q_times=[0.0125],
    )


def _fig12() -> ExperimentConfig:
    return ExperimentConfig(
        n_qubits=3, initial="basin", basin_a=0j, t_end=1.0, points=2001,
        observables=["entropy", "p_init", "p_g", "pairwise_tangle_max"],
    )


def _table1() -> ExperimentConfig:
    return ExperimentConfig(
        sweep="revival_scan", scan_qubits=[1, 2, 3, 4, 5], t_end=1.25, points=2501,
        observables=[],
    )


PRESETS: "OrderedDict[str, Preset]" = OrderedDict(
    (preset.name, preset) for preset in [
        Preset("fig1", "单量子比特 |g⟩, n̄=50, 0..2t_r：熵、P_g 与吸引子概率", _fig1),
        Preset("fig2", "单量子比特 |g⟩：六个时刻的光场Q函数快照", _fig2),
        Preset("fig4a", "两量子比特 |gg⟩：熵谷 0.35 与三个波包", _fig4a),
        Preset("fig4b", "两量子比特 (|ee⟩+|gg⟩)/√2：t_r/4 时近乎纯态", _fig4b),
        Preset("fig5", "两量子比特吸引盆态 tangle 随 a 的扫描", _fig5),
        Preset("fig6", "吸引盆态 (|ee⟩+|gg⟩)/√2 的纠缠坍缩与复苏", _fig6),
        Preset("fig7a", "√(1/10)|ee⟩-√(9/10)|gg⟩ 的 concurrence", _two_qubit_tangle(
            _amplitudes(math.sqrt(0.1), 0, 0, -math.sqrt(0.9)))),
        Preset("fig7b", "(|eg⟩+i|ge⟩)/√2 的 concurrence", _two_qubit_tangle(
            _amplitudes(0, SQRT_HALF, f"{SQRT_HALF!r}j", 0))),
        Preset("fig7c", "√(1/20)|ee⟩+√(19/20)|gg⟩：纠缠突然死亡", _two_qubit_tangle(
            _amplitudes(math.sqrt(0.05), 0, 0, math.sqrt(0.95)))),
        Preset("fig7d", "(|eg⟩+e^{iπ/4}|ge⟩)/√2 的 concurrence", _two_qubit_tangle(
            _amplitudes(0, SQRT_HALF, "0.5+0.5j", 0))),
        Preset("fig7e", "(|ee⟩+|gg⟩)/√2 的 concurrence", _two_qubit_tangle(
            _amplitudes(SQRT_HALF, 0, 0, SQRT_HALF))),
        Preset("fig8", "三量子比特吸引盆态 3-tangle 随 a 的扫描", _fig8),
        Preset("fig9a", "三量子比特吸引盆态 a=1/2", _basin_run(3, 0.5)),
        Preset("fig9b", "四量子比特吸引盆态 a=0 ((|m=1⟩+|m=-1⟩)/√2)", _basin_run(4, 0.0)),
        Preset("fig10", "40量子比特薛定谔猫 (a=0) 在 t=0 的自旋Q函数", _fig10),
        Preset("fig11", "40量子比特在 t_r/80 汇聚到吸引子的自旋Q函数（大n̄）", _fig11),
        Preset("fig12", "三量子比特GHZ型吸引盆态 a=0 的复苏", _fig12),
        Preset("table1", "N_q=1..5 的复苏时间与吸引子时间扫描", _table1),
    ]
)


def list_presets() -> List[Tuple[str, str]]:
    """所有预设的 (名称, 说明)，顺序固定"""
    return [(name, preset.description) for name, preset in PRESETS.items()]


def get_preset(name: str) -> ExperimentConfig:
    """
    获取预设参数（每次返回新对象）

    Raises:
        UnknownPresetError: 预设不存在
    """
    if name not in PRESETS:
        raise UnknownPresetError(name, PRESETS.keys())
    return PRESETS[name].build()
