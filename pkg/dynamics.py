#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
精确动力学模块
共振Tavis-Cummings哈密顿量按激发数 Λ = n + N_e 分块对角化，
在相互作用绘景下对任意时间精确演化联合态
"""

import math
from dataclasses import dataclass, field
from typing import Callable, Dict, List, Mapping, Optional, Sequence, Tuple, Union

import numpy as np
import scipy.linalg as la
import scipy.sparse as sparse

from exceptions import DimensionMismatchError, InvalidParameterError, InvalidStateError
from hilbert import (
    DICKE_BASIS,
    E_INDEX,
    G_INDEX,
    PRODUCT_BASIS,
    CoherentField,
    DickeState,
    JointState,
    ModelConfig,
    QubitState,
    coherent_amplitudes,
    excitation_numbers,
    is_symmetric,
    qubit_dimension,
    to_dicke_basis,
    to_product_basis,
)
from logger_config import get_simulation_logger, log_execution_time
from utils import chunk_ranges


logger = get_simulation_logger()

# 批量演化时每块包含的时间点数
DEFAULT_TIME_CHUNK = 64


@dataclass(frozen=True)
class TimeGrid:
    """时间网格，默认以复苏时间 t_r 为单位"""
    start: float = 0.0          # 起点
    end: float = 2.0            # 终点
    points: int = 4001          # 点数
    absolute: bool = False      # True 时直接以 λt 为单位

    def __post_init__(self):
        if int(self.points) != self.points or self.points < 1:
            raise InvalidParameterError("points", self.points, "网格点数必须是正整数")
        if self.points > 1 and not self.end > self.start:
            raise InvalidParameterError("end", self.end, "网格必须单调递增 (end > start)")
        if self.start < 0:
            raise InvalidParameterError("start", self.start, "起始时间不能为负")

    def fractions(self) -> np.ndarray:
        """网格点（原单位）"""
        if self.points == 1:
            return np.array([float(self.start)])
        return np.linspace(self.start, self.end, int(self.points))

    def times(self, revival: float) -> np.ndarray:
        """
        绝对时间

        Args:
            revival: 复苏时间 t_r

        Returns:
            时间数组
        """
        if self.absolute:
            return self.fractions()
        if revival <= 0:
            raise InvalidParameterError("revival_time", revival, "n̄=0 时没有复苏时间，请使用绝对时间网格")
        return self.fractions() * revival


@dataclass(frozen=True, eq=False)
class ExcitationBlock:
    """固定激发数 Λ 的哈密顿量块"""
    excitation: int                                      # 激发数 Λ
    qubit_indices: np.ndarray = field(repr=False)        # 各成员的量子比特基矢下标
    fock_levels: np.ndarray = field(repr=False)          # 各成员的Fock能级
    hamiltonian: np.ndarray = field(repr=False)
    energies: np.ndarray = field(repr=False)             # 本征值（以 λ 为单位乘入）
    eigenvectors: np.ndarray = field(repr=False)         # 列为本征矢

    @property
    def size(self) -> int:
        return len(self.qubit_indices)


def _raising_transitions(n_qubits: int, basis: str) -> List[Tuple[int, int, float]]:
    """
    集体升算符的矩阵元

    Returns:
        (低激发下标, 高激发下标, 系数) 列表；高激发态与低激发态之间
        通过吸收/发射一个光子耦合
    """
    transitions = []
    if basis == PRODUCT_BASIS:
        for index in range(2 ** n_qubits):
            for site in range(n_qubits):
                bit = 1 << (n_qubits - 1 - site)
                if index & bit:
                    # 第 site 个量子比特由 g 翻转为 e
                    transitions.append((index, index & ~bit, 1.0))
    else:
        for d in range(1, n_qubits + 1):
            transitions.append((d, d - 1, math.sqrt(d * (n_qubits - d + 1))))
    return transitions


@dataclass(frozen=True, eq=False)
class Propagator:
    """
    分块对角化后的传播子

    eigenvectors 为所有块本征矢拼成的稀疏块对角矩阵，permutation 把
    展平的联合态振幅重排成块顺序。
    """
    model: ModelConfig
    basis: str
    blocks: Tuple[ExcitationBlock, ...] = field(repr=False)
    permutation: np.ndarray = field(init=False, repr=False)
    energies: np.ndarray = field(init=False, repr=False)
    eigenvectors: sparse.csr_matrix = field(init=False, repr=False)

    def __post_init__(self):
        n_levels = self.model.n_max + 1
        flat = np.concatenate([b.qubit_indices * n_levels + b.fock_levels for b in self.blocks])
        total = qubit_dimension(self.model.n_qubits, self.basis) * n_levels
        if flat.size != total or np.unique(flat).size != total:
            raise DimensionMismatchError(total, flat.size, "截断基矢没有被激发数块恰好覆盖一次")
        object.__setattr__(self, "permutation", flat)
        object.__setattr__(self, "energies", np.concatenate([b.energies for b in self.blocks]))
        object.__setattr__(
            self, "eigenvectors",
            sparse.block_diag([b.eigenvectors for b in self.blocks], format="csr")
        )

    @property
    def n_qubits(self) -> int:
        return self.model.n_qubits

    @property
    def n_max(self) -> int:
        return self.model.n_max

    @property
    def shape(self) -> Tuple[int, int]:
        return qubit_dimension(self.n_qubits, self.basis), self.n_max + 1

    def check_state(self, state: JointState):
        if state.basis != self.basis or state.n_qubits != self.n_qubits:
            raise DimensionMismatchError(
                (self.n_qubits, self.basis), (state.n_qubits, state.basis), "联合态与传播子不匹配"
            )
        if state.amplitudes.shape != self.shape:
            raise DimensionMismatchError(self.shape, state.amplitudes.shape, "联合态与传播子不匹配")

    def spectral_coefficients(self, state: JointState) -> np.ndarray:
        """c = U†·ψ（块顺序）"""
        self.check_state(state)
        flat = state.amplitudes.reshape(-1)[self.permutation]
        return self.eigenvectors.conj().T @ flat

    def evolve_coefficients(self, coefficients: np.ndarray, times: np.ndarray) -> np.ndarray:
        """
        由谱系数计算一组时间点的振幅

        Returns:
            形状 (len(times), 量子比特维度, n_max+1) 的数组
        """
        phases = np.exp(-1j * np.outer(self.energies, times))
        block_order = self.eigenvectors @ (coefficients[:, None] * phases)
        result = np.empty((len(times), block_order.shape[0]), dtype=complex)
        result[:, self.permutation] = block_order.T
        return result.reshape((len(times),) + self.shape)


@log_execution_time(logger)
def build_blocks(config: ModelConfig, basis: str = PRODUCT_BASIS) -> Propagator:
    """
    构造并对角化所有激发数块

    Args:
        config: 模型参数
        basis: 'product'（全空间）或 'dicke'（对称子空间快速通道）

    Returns:
        Propagator
    """
    if basis not in (PRODUCT_BASIS, DICKE_BASIS):
        raise InvalidParameterError("basis", basis, "只支持 product 或 dicke")

    n_qubits = config.n_qubits
    n_max = config.n_max
    # 截断充分性（Poisson尾部）
    coherent_amplitudes(config.field, n_max)

    excitations = excitation_numbers(n_qubits, basis)
    dimension = qubit_dimension(n_qubits, basis)
    transitions = _raising_transitions(n_qubits, basis)

    blocks = []
    for excitation in range(n_max + n_qubits + 1):
        fock = excitation - excitations
        members = np.nonzero((fock >= 0) & (fock <= n_max))[0]
        if members.size == 0:
            continue
        position = {int(q): i for i, q in enumerate(members)}
        hamiltonian = np.zeros((members.size, members.size))
        for low, high, factor in transitions:
            if low not in position or high not in position:
                continue
            # |high, n⟩ ↔ |low, n+1⟩，矩阵元 λ√(n+1)
            photons = excitation - excitations[low]
            element = config.coupling * math.sqrt(photons) * factor
            hamiltonian[position[high], position[low]] = element
            hamiltonian[position[low], position[high]] = element
        energies, eigenvectors = la.eigh(hamiltonian)
        blocks.append(ExcitationBlock(
            excitation=excitation,
            qubit_indices=members,
            fock_levels=fock[members],
            hamiltonian=hamiltonian,
            energies=energies,
            eigenvectors=eigenvectors,
        ))

    logger.debug(f"N_q={n_qubits} basis={basis} n_max={n_max}: {len(blocks)} 个激发数块, "
                 f"最大块 {max(b.size for b in blocks)}, 总维度 {dimension * (n_max + 1)}")
    return Propagator(model=config, basis=basis, blocks=tuple(blocks))


def evolve(prop: Propagator, state: JointState, t: float) -> JointState:
    """
    精确演化到时间 t（相互作用绘景）

    Args:
        prop: 传播子
        state: 初态
        t: 时间（λt 单位下的绝对时间）

    Returns:
        演化后的联合态；t=0 时原样返回
    """
    prop.check_state(state)
    if t == 0:
        return state
    coefficients = prop.spectral_coefficients(state)
    amplitudes = prop.evolve_coefficients(coefficients, np.array([float(t)]))[0]
    return JointState(amplitudes, state.n_qubits, state.basis)


def iter_evolved(
    prop: Propagator,
    state: JointState,
    times: Sequence[float],
    chunk_size: int = DEFAULT_TIME_CHUNK
):
    """
    逐个时间点产生演化后的联合态，每次只展开一块时间点

    Yields:
        (t, JointState)
    """
    times = np.asarray(times, dtype=float)
    coefficients = prop.spectral_coefficients(state)
    for window in chunk_ranges(times.size, chunk_size):
        batch = prop.evolve_coefficients(coefficients, times[window])
        for t, amplitudes in zip(times[window], batch):
            if t == 0:
                yield float(t), state
            else:
                yield float(t), JointState(amplitudes, state.n_qubits, state.basis)


Observable = Callable[[JointState], float]


def evolve_series(
    prop: Propagator,
    initial: JointState,
    grid: TimeGrid,
    observables: Optional[Mapping[str, Observable]] = None
) -> List[Tuple[float, Union[JointState, Dict[str, float]]]]:
    """
    在时间网格上演化

    Args:
        prop: 传播子
        initial: 初态
        grid: 时间网格
        observables: 名称 → 可观测量函数；给出时只保留标量结果

    Returns:
        [(t, JointState)] 或 [(t, {名称: 值})]，t 为绝对时间
    """
    times = grid.times(prop.model.revival_time)
    series = []
    for t, state in iter_evolved(prop, initial, times):
        if observables is None:
            series.append((t, state))
        else:
            series.append((t, {name: float(func(state)) for name, func in observables.items()}))
    return series


def one_qubit_analytic(
    c_e: complex,
    c_g: complex,
    field_state: CoherentField,
    t: float,
    n_max: int,
    coupling: float = 1.0
) -> JointState:
    """
    单量子比特Jaynes-Cummings闭式解

    |ψ(t)⟩ = Σ_n [(C_e C_n cos(λt√(n+1)) - i C_g C_{n+1} sin(λt√(n+1)))|e,n⟩
                 + (C_g C_{n+1} cos(λt√(n+1)) - i C_e C_n sin(λt√(n+1)))|g,n+1⟩] + C_g C_0|g,0⟩

    截断处 |e,n_max⟩ 与被截掉的 |g,n_max+1⟩ 不再耦合，保持静止。

    Args:
        c_e, c_g: 初始量子比特振幅
        field_state: 相干光场
        t: 时间
        n_max: 截断能级
        coupling: 耦合常数 λ

    Returns:
        乘积基下的 JointState
    """
    if abs(abs(c_e) ** 2 + abs(c_g) ** 2 - 1.0) > 1e-12:
        raise InvalidStateError("单量子比特振幅未归一化")

    fock = coherent_amplitudes(field_state, n_max)
    n = np.arange(n_max)
    angle = coupling * t * np.sqrt(n + 1)
    cos, sin = np.cos(angle), np.sin(angle)

    amplitudes = np.zeros((2, n_max + 1), dtype=complex)
    amplitudes[E_INDEX, :n_max] = c_e * fock[:-1] * cos - 1j * c_g * fock[1:] * sin
    amplitudes[E_INDEX, n_max] = c_e * fock[n_max]
    amplitudes[G_INDEX, 1:] = c_g * fock[1:] * cos - 1j * c_e * fock[:-1] * sin
    amplitudes[G_INDEX, 0] = c_g * fock[0]
    return JointState(amplitudes, 1, PRODUCT_BASIS)


def excitation_expectation(state: JointState) -> float:
    """激发数期望 ⟨Λ⟩ = ⟨n + N_e⟩"""
    excitations = excitation_numbers(state.n_qubits, state.basis)
    photons = np.arange(state.n_max + 1)
    weights = np.abs(state.amplitudes) ** 2
    return float(np.sum(weights * (excitations[:, None] + photons[None, :])))


def mean_photon_number(state: JointState) -> float:
    """光子数期望 ⟨a†a⟩"""
    weights = np.sum(np.abs(state.amplitudes) ** 2, axis=0)
    return float(weights @ np.arange(state.n_max + 1))


def choose_basis(qubits: QubitState, requested: str = "auto") -> str:
    """
    选择演化所用的基

    Args:
        qubits: 初始量子比特态
        requested: auto / product / dicke

    Returns:
        'product' 或 'dicke'
    """
    if requested == PRODUCT_BASIS:
        return PRODUCT_BASIS
    symmetric = is_symmetric(qubits)
    if requested == DICKE_BASIS:
        if not symmetric:
            raise InvalidStateError("初态不在对称子空间内，不能使用Dicke基")
        return DICKE_BASIS
    if requested != "auto":
        raise InvalidParameterError("space", requested, "只支持 auto / product / dicke")
    return DICKE_BASIS if symmetric else PRODUCT_BASIS


def prepare_qubits(qubits: Union[QubitState, DickeState], basis: str) -> Union[QubitState, DickeState]:
    """把初始量子比特态换到演化所用的基"""
    if basis == DICKE_BASIS and isinstance(qubits, QubitState):
        return to_dicke_basis(qubits)
    if basis == PRODUCT_BASIS and isinstance(qubits, DickeState):
        return to_product_basis(qubits)
    return qubits
