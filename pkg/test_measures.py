#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
测量模块测试
"""

import math
import sys

import numpy as np
from scipy.stats import unitary_group

from exceptions import GridTooCoarseError, InvalidParameterError, MixedStateError
from hilbert import (
    DICKE_BASIS,
    CoherentField,
    DensityMatrix,
    QubitState,
    embed_product,
    partial_trace_qubits,
    to_dicke_basis,
)
from largen import BasinSpec, attractor_state, attractor_state_dicke, basin_state
from measures import (
    PhaseGridSpec,
    detect_minima,
    detect_revivals,
    entropy,
    pairwise_tangle,
    probability,
    q_function,
    spin_q_function,
    spin_q_normalization,
    tangle,
    three_tangle,
    trace_distance,
)


def _werner(p: float) -> DensityMatrix:
    bell = np.array([1, 0, 0, 1]) / math.sqrt(2)
    entries = p * np.outer(bell, bell) + (1 - p) * np.eye(4) / 4
    return DensityMatrix(entries, n_qubits=2)


def test_entropy():
    """归一化熵"""
    print("1. 测试纯态熵为0...")
    pure = DensityMatrix.from_pure(QubitState.from_labels("eg"))
    assert entropy(pure, 2) == 0.0
    print("2. 测试最大混合态熵为1...")
    mixed = DensityMatrix(np.eye(4) / 4, n_qubits=2)
    assert math.isclose(entropy(mixed, 2), 1.0, rel_tol=1e-12)
    print("3. 测试Bell态单比特约化...")
    half = DensityMatrix(np.eye(2) / 2, n_qubits=1)
    assert math.isclose(entropy(half, 1), 1.0, rel_tol=1e-12)
    try:
        entropy(half, 0)
        assert False, "N_q=0 应当报错"
    except InvalidParameterError:
        pass
    print("  ✓ 熵正确")


def test_werner_tangle():
    """Werner态的concurrence与突然死亡"""
    print("1. 测试 ζ = (3p-1)/2...")
    for p in (0.5, 0.8, 1.0):
        breakdown = tangle(_werner(p))
        assert math.isclose(breakdown.concurrence, (3 * p - 1) / 2, abs_tol=1e-9), f"p={p}"
        assert math.isclose(breakdown.tangle, ((3 * p - 1) / 2) ** 2, abs_tol=1e-9)
    print("  ✓ p=0.5, 0.8, 1.0 正确")

    print("2. 测试 p < 1/3 的突然死亡...")
    breakdown = tangle(_werner(0.2))
    assert breakdown.tangle == 0.0 and breakdown.concurrence == 0.0
    assert math.isclose(breakdown.raw, -0.2, abs_tol=1e-9), f"raw = {breakdown.raw}"
    assert breakdown.sudden_death
    assert breakdown.rank == 4
    print(f"  ✓ raw = {breakdown.raw:.6f}")

    print("3. 测试乘积态与Bell态...")
    assert tangle(DensityMatrix.from_pure(QubitState.from_labels("eg"))).tangle < 1e-12
    bell = tangle(DensityMatrix.from_pure(QubitState.normalized([1, 0, 0, 1])))
    assert math.isclose(bell.tangle, 1.0, abs_tol=1e-9) and bell.rank == 1


def test_tangle_basis_independent():
    """Dicke基与乘积基的tangle一致"""
    for a in (0.0, 0.2, 0.5, 0.3j):
        state = basin_state(BasinSpec(2, a))
        product = tangle(DensityMatrix.from_pure(state))
        dicke = tangle(DensityMatrix.from_pure(to_dicke_basis(state)))
        assert math.isclose(product.tangle, dicke.tangle, abs_tol=1e-12)
        if isinstance(a, float):
            expected = abs(4 * a ** 2 - 1)
        else:
            expected = 1.0
        assert math.isclose(product.concurrence, expected, abs_tol=1e-9), f"a={a}"
    print("  ✓ 吸引盆态 ζ = |4a²-1|，纯虚 a 时 τ=1")


def test_tangle_local_unitary_invariant():
    """局域幺正变换不改变tangle"""
    rng = np.random.default_rng(7)
    for rank in (1, 2, 4):
        vectors = rng.normal(size=(4, rank)) + 1j * rng.normal(size=(4, rank))
        entries = vectors @ vectors.conj().T
        rho = DensityMatrix(entries / np.trace(entries), n_qubits=2)
        local = np.kron(unitary_group.rvs(2, random_state=rng), unitary_group.rvs(2, random_state=rng))
        rotated = DensityMatrix(local @ rho.entries @ local.conj().T, n_qubits=2)
        before, after = tangle(rho), tangle(rotated)
        assert math.isclose(before.raw, after.raw, abs_tol=1e-9), f"rank={rank}: {before.raw} vs {after.raw}"
        assert math.isclose(before.tangle, after.tangle, abs_tol=1e-9)
    print("  ✓ 秩 1、2、4 的随机态在 U_A⊗U_B 下 τ 不变")


def test_three_tangle():
    """三体tangle"""
    print("1. 测试GHZ与W态...")
    ghz = QubitState.normalized([1, 0, 0, 0, 0, 0, 0, 1])
    w = QubitState.normalized([0, 1, 1, 0, 1, 0, 0, 0])
    assert math.isclose(three_tangle(ghz), 1.0, abs_tol=1e-9)
    assert abs(three_tangle(w)) < 1e-9
    for pivot in (1, 2):
        assert math.isclose(three_tangle(ghz, pivot), 1.0, abs_tol=1e-9)
    print("  ✓ τ(GHZ)=1, τ(W)=0")

    print("2. 测试非对称随机态的支点无关性...")
    rng = np.random.default_rng(11)
    random_state = QubitState.normalized(rng.normal(size=8) + 1j * rng.normal(size=8))
    values = [three_tangle(random_state, pivot) for pivot in (0, 1, 2)]
    assert values[0] > 1e-3, f"随机态 τ = {values[0]}"
    assert np.allclose(values, values[0], atol=1e-10), f"各支点 τ = {values}"
    print(f"  ✓ 三个支点 τ = {values[0]:.4f}")

    print("3. 测试吸引盆态 τ = 16(a²-s²)²...")
    for a in (0.0, 0.2, 1 / (2 * math.sqrt(2))):
        spec = BasinSpec(3, a)
        expected = 16 * (a ** 2 - spec.complement ** 2) ** 2
        assert math.isclose(three_tangle(basin_state(spec)), expected, abs_tol=1e-9), f"a={a}"
    assert math.isclose(three_tangle(basin_state(BasinSpec(3, 0.2))), 0.4624, abs_tol=1e-9)
    print("  ✓ 与解析式一致")

    print("4. 测试混合态报错...")
    try:
        three_tangle(DensityMatrix(np.eye(8) / 8, n_qubits=3))
        assert False, "混合态应当报错"
    except MixedStateError:
        pass
    print("  ✓ 混合态被拒绝")


def test_pairwise_tangle():
    """两体约化tangle"""
    w = DensityMatrix.from_pure(QubitState.normalized([0, 1, 1, 0, 1, 0, 0, 0]))
    for first, second in ((0, 1), (0, 2), (1, 2)):
        assert math.isclose(pairwise_tangle(w, first, second).tangle, 4 / 9, abs_tol=1e-9)
    print("  ✓ W态每对 τ = 4/9")


def test_probability_and_distance():
    """态概率与迹距离"""
    print("1. 测试乘积基...")
    rho = DensityMatrix.from_pure(QubitState.from_labels("e"))
    assert probability(rho, QubitState.from_labels("e")) == 1.0
    assert probability(rho, QubitState.from_labels("g")) == 0.0
    assert math.isclose(probability(rho, attractor_state(1, 0.0)), 0.5, rel_tol=1e-12)

    print("2. 测试Dicke基密度矩阵与乘积基目标态...")
    dicke_rho = DensityMatrix.from_pure(attractor_state_dicke(4, 0.3, 1))
    assert dicke_rho.basis == DICKE_BASIS
    assert math.isclose(probability(dicke_rho, attractor_state(4, 0.3, 1)), 1.0, rel_tol=1e-10)
    assert probability(dicke_rho, attractor_state(4, 0.3, -1)) < 1e-12

    print("3. 测试迹距离...")
    first = DensityMatrix.from_pure(QubitState.from_labels("e"))
    second = DensityMatrix.from_pure(QubitState.from_labels("g"))
    assert math.isclose(trace_distance(first, second), 1.0, rel_tol=1e-12)
    assert trace_distance(first, first) < 1e-15
    print("  ✓ 概率与迹距离正确")


def test_field_q_function():
    """光场Q函数"""
    field_state = CoherentField(50.0)
    joint = embed_product(QubitState.from_labels("g"), field_state, 200)
    rho_f = partial_trace_qubits(joint)
    spec = PhaseGridSpec.for_field(50.0)
    grid = q_function(rho_f, spec)

    re, im, value = grid.peak()
    step = (spec.re_max - spec.re_min) / (spec.re_points - 1)
    assert abs(re - math.sqrt(50.0)) <= step and abs(im) <= step, f"峰位置 ({re:.3f}, {im:.3f})"
    assert math.isclose(value, 1 / math.pi, rel_tol=0.02)
    integral = grid.riemann_sum()
    assert abs(integral - 1.0) < 1e-3, f"∫Q = {integral:.6f}"
    assert len(grid.local_maxima()) == 1
    print(f"  ✓ 峰位于 ({re:.3f}, {im:.3f})，∫Q = {integral:.6f}")


def test_spin_q_function():
    """自旋Q函数"""
    n_qubits = 40
    rho_q = DensityMatrix.from_pure(attractor_state_dicke(n_qubits, 0.0, 1))
    grid = spin_q_function(rho_q, PhaseGridSpec.for_spin(points=241), n_qubits)
    re, im, _ = grid.peak()
    # 1/(1+|z|²)² 因子使峰略向原点偏移
    assert abs(re) < 0.03 and 0.85 < im <= 1.0, f"峰位置 ({re:.3f}, {im:.3f})"
    normalization = spin_q_normalization(grid, n_qubits)
    assert abs(normalization - 1.0) < 0.02, f"归一化 {normalization:.4f}"
    print(f"  ✓ N=40 吸引子峰位于 z≈i，归一化 {normalization:.4f}")

    print("2. 测试乘积基输入与Dicke基输入一致...")
    spec = PhaseGridSpec.for_spin(points=61)
    product = spin_q_function(DensityMatrix.from_pure(attractor_state(2, 0.0, -1)), spec, 2)
    dicke = spin_q_function(DensityMatrix.from_pure(attractor_state_dicke(2, 0.0, -1)), spec, 2)
    assert np.allclose(product.values, dicke.values, atol=1e-12)

    print("3. 测试非法网格...")
    try:
        PhaseGridSpec(-1, 1, -1, 1, 1, 10)
        assert False, "单点网格应当报错"
    except InvalidParameterError:
        pass


def test_detect_revivals():
    """复苏峰检测"""
    times = np.linspace(0.0, 3.0, 301)
    bursts = np.exp(-((times - 1.0) / 0.1) ** 2) + np.exp(-((times - 2.0) / 0.1) ** 2)
    values = 0.5 + 0.4 * np.cos(50.0 * times) * bursts

    peaks = detect_revivals(times, values, collapse=0.2)
    assert len(peaks) == 2, f"检测到 {peaks}"
    assert abs(peaks[0] - 1.0) < 0.05 and abs(peaks[1] - 2.0) < 0.05
    print(f"  ✓ 检测到 {[round(p, 3) for p in peaks]}")

    print("2. 测试相对阈值...")
    initial = np.exp(-(times / 0.1) ** 2)
    weak = 0.5 + np.cos(50.0 * times) * (0.4 * initial + 0.02 * bursts)
    assert detect_revivals(times, weak, collapse=0.2) == [], "弱复苏低于绝对阈值"
    peaks = detect_revivals(times, weak, collapse=0.2, threshold=0.03, min_prominence=0.01, relative=True)
    assert len(peaks) == 2, f"检测到 {peaks}"
    assert abs(peaks[0] - 1.0) < 0.05 and abs(peaks[1] - 2.0) < 0.05
    print("  ✓ 相对包络最大值的阈值找到弱复苏")

    print("3. 测试网格过粗...")
    coarse = np.linspace(0.0, 3.0, 61)
    try:
        detect_revivals(coarse, np.zeros_like(coarse), collapse=0.2)
        assert False, "步长 0.05 > t_c/10 应当报错"
    except GridTooCoarseError:
        pass
    print("  ✓ 网格过粗被拒绝")


def test_detect_minima():
    """熵谷检测"""
    times = np.linspace(0.0, 3.0, 301)
    values = 0.9 - 0.8 * np.exp(-((times - 1.2) / 0.1) ** 2)
    minima = detect_minima(times, values, collapse=0.2)
    assert len(minima) == 1 and abs(minima[0] - 1.2) < 0.02, f"检测到 {minima}"
    assert detect_minima(times, np.full_like(times, 0.5), collapse=0.2) == []
    print("  ✓ 熵谷位于 t=1.2")


if __name__ == "__main__":
    from run_tests import run_module
    sys.exit(run_module(sys.modules[__name__]))
