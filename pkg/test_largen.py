#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
大n̄近似模块测试
"""

import math
import sys

import numpy as np

from exceptions import InvalidParameterError
from hilbert import (
    CoherentField,
    DensityMatrix,
    QubitState,
    partial_trace_field,
    revival_time,
    to_product_basis,
)
from largen import (
    BasinSpec,
    assemble,
    attractor_state,
    attractor_state_dicke,
    attractor_times,
    basin_as_cat,
    basin_defect,
    basin_ghz_form,
    basin_state,
    basin_state_dicke,
    component_basis,
    dipole_moment,
    field_rotation_angle,
    is_in_basin,
    nq_extreme_components,
    one_qubit_components,
    reconstruct_cat,
    revival_times,
    two_qubit_components,
    uniform_component_state,
)
from measures import pairwise_tangle, probability, tangle

FIELD = CoherentField(50.0)
T_R = revival_time(50.0)
N_MAX = 200


def test_attractor_states():
    """吸引子态"""
    print("1. 测试单量子比特吸引子...")
    plus = attractor_state(1, 0.0, 1)
    assert np.allclose(plus.amplitudes, np.array([1, 1j]) / math.sqrt(2))
    minus = attractor_state(1, 0.0, -1)
    assert np.allclose(minus.amplitudes, np.array([1, -1j]) / math.sqrt(2))
    for theta in (0.0, 0.4, math.pi / 3):
        overlap = attractor_state(1, theta, 1).overlap(attractor_state(1, theta, -1))
        assert abs(overlap) < 1e-12, f"θ={theta} 重叠 {overlap}"
        assert attractor_state(1, theta, 1).fidelity(attractor_state(1, theta, -1)) < 1e-20
    print("  ✓ (|e⟩ ± i|g⟩)/√2，两吸引子正交")

    print("2. 测试Dicke表示与乘积表示一致...")
    for theta in (0.0, 0.7):
        for sign in (1, -1):
            lifted = to_product_basis(attractor_state_dicke(3, theta, sign))
            assert np.allclose(lifted.amplitudes, attractor_state(3, theta, sign).amplitudes, atol=1e-12)
    print("  ✓ e^{-iNθ}|z=±ie^{iθ}⟩ 与张量积一致")

    print("3. 测试非法符号...")
    try:
        attractor_state(2, 0.0, 0)
        assert False, "sign=0 应当报错"
    except InvalidParameterError:
        pass


def test_basin_states():
    """吸引盆态"""
    print("1. 测试 N=2, a=1/√2 为 (|ee⟩+|gg⟩)/√2...")
    spec = BasinSpec(2, 1 / math.sqrt(2))
    assert spec.complement < 1e-7
    assert np.allclose(basin_state(spec).amplitudes, np.array([1, 0, 0, 1]) / math.sqrt(2), atol=1e-7)

    print("2. 测试 |a| 上限...")
    try:
        BasinSpec(2, 0.8)
        assert False, "|a| > 1/√2 应当报错"
    except InvalidParameterError:
        pass
    assert math.isclose(BasinSpec(3).max_amplitude, 0.5)

    print("3. 测试吸引盆判定...")
    for n_qubits, a in ((2, 0.3), (2, 0.2 + 0.4j), (3, 0.1), (4, 0.0)):
        for theta in (0.0, 0.9):
            state = basin_state_dicke(BasinSpec(n_qubits, a, theta))
            assert basin_defect(state, theta) < 1e-10, f"N={n_qubits}, a={a}, θ={theta}"
            assert is_in_basin(state, theta)
    gg = QubitState.from_labels("gg")
    assert math.isclose(basin_defect(gg, 0.0), 1 / math.sqrt(2), rel_tol=1e-12)
    assert not is_in_basin(gg, 0.0)
    assert is_in_basin(QubitState.from_labels("e"), 0.0), "单量子比特任意态都在吸引盆内"
    print("  ✓ 判定正确")


def test_basin_representations():
    """吸引盆态的自旋猫形式与GHZ形式"""
    for n_qubits, a, theta in ((2, 0.25, 0.0), (3, 0.1 + 0.2j, 0.4), (5, -0.05, 1.1)):
        spec = BasinSpec(n_qubits, a, theta)
        dicke = basin_state_dicke(spec)

        cat = reconstruct_cat(basin_as_cat(spec))
        assert np.allclose(cat.amplitudes, dicke.amplitudes, atol=1e-12), f"自旋猫形式 N={n_qubits}"

        ghz = sum(coefficient * vector for coefficient, vector in basin_ghz_form(spec))
        assert np.allclose(ghz, basin_state(spec).amplitudes, atol=1e-12), f"GHZ形式 N={n_qubits}"
    plus, minus = basin_as_cat(BasinSpec(2, 0.0, 0.0))
    assert math.isclose(plus.z.real, 1.0) and math.isclose(minus.z.real, -1.0)
    print("  ✓ 两种展开都还原出吸引盆态")


def test_component_weights():
    """各分量权重之和为1"""
    rng = np.random.default_rng(11)
    for _ in range(5):
        single = QubitState.normalized(rng.normal(size=2) + 1j * rng.normal(size=2))
        components = one_qubit_components(*single.amplitudes, FIELD, 0.37 * T_R)
        assert abs(sum(c.weight for c in components) - 1.0) < 1e-12

        pair = QubitState.normalized(rng.normal(size=4) + 1j * rng.normal(size=4))
        components = two_qubit_components(*pair.amplitudes, FIELD, 0.37 * T_R)
        assert abs(sum(c.weight for c in components) - 1.0) < 1e-12
    print("  ✓ Σ|β_k|² = 1")

    print("2. 测试 |gg⟩ 的 β₀...")
    _, middle, _ = two_qubit_components(0, 0, 0, 1, FIELD, 0.1 * T_R)
    assert math.isclose(abs(middle.beta), 1 / math.sqrt(2), rel_tol=1e-12)

    print("3. 测试吸引盆内 β₀ 为零...")
    a = 0.3
    s = BasinSpec(2, a).complement
    _, middle, _ = two_qubit_components(a, s, s, a, FIELD, 0.1 * T_R)
    assert middle.undefined_direction and middle.beta == 0


def test_component_basis():
    """t=0 的分量方向与等权重初态"""
    print("1. 测试本征矢正交归一、k 降序...")
    for n_qubits in range(1, 6):
        for theta in (0.0, 0.6):
            ks, vectors = component_basis(n_qubits, theta)
            assert np.allclose(ks, np.arange(n_qubits, -1, -1) - n_qubits / 2, atol=1e-10), f"k = {ks}"
            assert np.allclose(vectors.conj().T @ vectors, np.eye(n_qubits + 1), atol=1e-12)

            uniform = uniform_component_state(n_qubits, theta)
            weights = np.abs(vectors.conj().T @ uniform.amplitudes) ** 2
            assert np.allclose(weights, 1.0 / (n_qubits + 1), atol=1e-12)
            # 两端的本征矢就是 D_{±N/2}(0)
            expected = math.sqrt(1.0 - 2.0 / (n_qubits + 1))
            assert abs(basin_defect(uniform, theta) - expected) < 1e-10, f"N={n_qubits}, θ={theta}"
    print("  ✓ 每个分量权重 1/(N+1)")

    print("2. 测试与两量子比特分量展开一致...")
    pair = to_product_basis(uniform_component_state(2, 0.3))
    components = two_qubit_components(*pair.amplitudes, CoherentField(50.0, 0.3), 0.0)
    assert np.allclose([c.weight for c in components], 1 / 3, atol=1e-12)
    print("  ✓ β_{+1}, β_0, β_{-1} 权重均为 1/3")


def test_attractor_at_predicted_times():
    """吸引子时间所有分量的量子比特态重合"""
    rng = np.random.default_rng(3)
    print("1. 单量子比特 t = t_r/2...")
    target = attractor_state(1, 0.0, 1)
    for _ in range(5):
        single = QubitState.normalized(rng.normal(size=2) + 1j * rng.normal(size=2))
        plus, minus = one_qubit_components(*single.amplitudes, FIELD, 0.5 * T_R)
        assert plus.qubit_state.equals_up_to_phase(target)
        assert minus.qubit_state.equals_up_to_phase(target)
        state, _ = assemble([plus, minus], N_MAX)
        assert probability(partial_trace_field(state), target) > 1 - 1e-10
    print("  ✓ 任意初态在大n̄极限下都到达同一吸引子")

    print("2. 两量子比特吸引盆态 t = t_r/4...")
    for a in (0.0, 0.3, 0.5 + 0.2j):
        amplitudes = basin_state(BasinSpec(2, a)).amplitudes
        state, _ = assemble(two_qubit_components(*amplitudes, FIELD, 0.25 * T_R), N_MAX)
        assert probability(partial_trace_field(state), attractor_state(2, 0.0, 1)) > 1 - 1e-10

    print("3. 三量子比特吸引盆态 t = t_r/6...")
    qubits = basin_state_dicke(BasinSpec(3, 0.2))
    components = nq_extreme_components(qubits, FIELD, T_R / 6)
    assert abs(sum(c.weight for c in components) - 1.0) < 1e-12
    for component in components:
        assert component.qubit_state.equals_up_to_phase(attractor_state_dicke(3, 0.0, 1))
    print("  ✓ 吸引子时间正确")


def test_largen_rank_two():
    """吸引盆内的大n̄态 ρ_q 秩不超过2，raw 组合非负"""
    rng = np.random.default_rng(20)
    for _ in range(20):
        radius = rng.uniform(0, 1 / math.sqrt(2))
        a = radius * np.exp(1j * rng.uniform(0, 2 * math.pi))
        amplitudes = basin_state(BasinSpec(2, complex(a))).amplitudes
        for fraction in (0.05, 0.15, 0.3, 0.5, 0.8):
            state, _ = assemble(two_qubit_components(*amplitudes, FIELD, fraction * T_R), N_MAX)
            breakdown = tangle(partial_trace_field(state))
            assert breakdown.rank <= 2, f"a={a:.3f}, t={fraction}t_r 秩为 {breakdown.rank}"
            assert breakdown.raw >= -1e-9, f"a={a:.3f}, t={fraction}t_r raw={breakdown.raw:.3e}"
    print("  ✓ 20 个随机吸引盆态全部满足")


def test_time_tables():
    """复苏时间与吸引子时间"""
    assert revival_times(1) == [1.0]
    assert revival_times(2) == [0.5, 1.0]
    assert np.allclose(revival_times(3), [1 / 3, 1 / 2, 2 / 3, 1])
    assert attractor_times(1) == [0.5]
    assert attractor_times(2) == [0.25, 0.75]
    assert np.allclose(attractor_times(3), [1 / 6, 1 / 2, 5 / 6])
    assert np.allclose(revival_times(1, k_max=2), [1.0, 2.0])
    print("  ✓ 表格正确")

    print("2. 测试吸引子时间与复苏时间的交集...")
    for n_qubits in (2, 4):
        assert not set(attractor_times(n_qubits)) & set(revival_times(n_qubits)), f"N={n_qubits}"
    for n_qubits in (3, 5):
        assert set(attractor_times(n_qubits)) & set(revival_times(n_qubits)) == {0.5}
    print("  ✓ N=2,4 不相交，N=3,5 只在 t_r/2 重合")


def test_field_rotation_and_dipole():
    """光场旋转角与偶极矩"""
    assert math.isclose(field_rotation_angle(0.5, 0.5, 1.0), math.pi / 2)
    assert math.isclose(field_rotation_angle(-1, 0.25, 1.0), -math.pi / 2)
    component, _ = one_qubit_components(0, 1, FIELD, 0.5 * T_R)
    assert abs(component.field_state.alpha - 1j * FIELD.alpha) < 1e-12, "Φ_+(t_r/2) = |iα⟩"

    assert np.allclose(dipole_moment(0.5, 0.0, 0.0), [0.5, 0.0])
    assert np.allclose(dipole_moment(-0.5, 0.0, 0.0), [-0.5, 0.0])
    assert np.allclose(dipole_moment(1.0, 0.0, 0.25), [0.0, 1.0], atol=1e-12)
    assert np.allclose(dipole_moment(0, 0.3, 0.2), [0.0, 0.0])
    print("  ✓ 旋转角与偶极矩方向正确")


def test_three_qubit_ghz_basin():
    """a=0 的三量子比特吸引盆态的两体约化无纠缠"""
    rho = DensityMatrix.from_pure(basin_state(BasinSpec(3, 0.0)))
    for first, second in ((0, 1), (0, 2), (1, 2)):
        assert pairwise_tangle(rho, first, second).tangle < 1e-12
    print("  ✓ 两体 tangle 为零")


if __name__ == "__main__":
    from run_tests import run_module
    sys.exit(run_module(sys.modules[__name__]))
