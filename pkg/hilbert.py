#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
希尔伯特空间模块
量子比特⊗截断Fock空间中的态、约化密度矩阵与基变换

基矢约定:
- 单量子比特 |e⟩ 下标为0，|g⟩ 下标为1
- 多量子比特按字典序排列，第1个量子比特为最高位
- Dicke基下标 d = 基态量子比特个数，对应 m = N/2 - d（d=0 为全激发态）
- 相干态参数 α = √n̄·e^{-iθ}
"""

import math
from dataclasses import dataclass, field
from functools import cached_property, lru_cache
from typing import Iterable, Optional, Sequence, Union

import numpy as np
from scipy.special import gammaln, pdtrc

from exceptions import (
    DensityMatrixError,
    DimensionMismatchError,
    InvalidParameterError,
    InvalidStateError,
    TruncationError,
)


E_INDEX = 0
G_INDEX = 1

PRODUCT_BASIS = "product"
DICKE_BASIS = "dicke"
FOCK_BASIS = "fock"

QUBIT_SIDE = "qubit"
FIELD_SIDE = "field"

NORM_TOLERANCE = 1e-12            # 量子比特态归一化
JOINT_NORM_TOLERANCE = 1e-10      # 联合态归一化
SYMMETRY_TOLERANCE = 1e-10        # 对称子空间判定
POISSON_TAIL_TOLERANCE = 1e-10    # 相干态截断尾部
LEAKAGE_TOLERANCE = 1e-8          # 最高Fock能级占据
HERMITIAN_TOLERANCE = 1e-12
TRACE_TOLERANCE = 1e-10

# 乘积基向量允许的最大量子比特数（2^16 维）
MAX_PRODUCT_QUBITS = 16

# n̄=50 时沿用的截断能级
REFERENCE_NBAR = 50.0
REFERENCE_CUTOFF = 200
# 其余 n̄ 在 n̄+10√n̄ 之上额外保留的能级（容纳量子比特发射的光子）
CUTOFF_HEADROOM = 10


def revival_time(nbar: float, coupling: float = 1.0) -> float:
    """复苏时间 t_r = 2π√n̄/λ"""
    return 2.0 * math.pi * math.sqrt(nbar) / coupling


def collapse_time(coupling: float = 1.0) -> float:
    """坍缩时间 t_c = 2/λ"""
    return 2.0 / coupling


def minimum_fock_cutoff(nbar: float) -> float:
    """截断充分性下限 n̄ + 10√n̄"""
    return nbar + 10.0 * math.sqrt(nbar)


def default_fock_cutoff(nbar: float) -> int:
    """
    默认Fock截断

    Args:
        nbar: 平均光子数

    Returns:
        n_max
    """
    if math.isclose(nbar, REFERENCE_NBAR):
        return REFERENCE_CUTOFF
    return int(math.ceil(minimum_fock_cutoff(nbar))) + CUTOFF_HEADROOM


@dataclass(frozen=True)
class CoherentField:
    """相干光场 |α⟩，α = √n̄·e^{-iθ}"""
    nbar: float                # 平均光子数 n̄
    theta: float = 0.0         # 相位 θ

    def __post_init__(self):
        if not np.isfinite(self.nbar) or self.nbar < 0:
            raise InvalidParameterError("nbar", self.nbar, "平均光子数必须非负")
        if not np.isfinite(self.theta):
            raise InvalidParameterError("theta", self.theta, "相位必须是有限实数")

    @property
    def alpha(self) -> complex:
        return math.sqrt(self.nbar) * complex(math.cos(self.theta), -math.sin(self.theta))

    def rotated(self, angle: float) -> "CoherentField":
        """返回 |e^{i·angle}α⟩"""
        return CoherentField(self.nbar, self.theta - angle)


@dataclass(frozen=True)
class ModelConfig:
    """模型参数"""
    n_qubits: int                          # 量子比特数 N_q
    nbar: float = 50.0                     # 平均光子数 n̄
    theta: float = 0.0                     # 光场相位 θ
    coupling: float = 1.0                  # 耦合常数 λ
    fock_cutoff: Optional[int] = None      # 截断能级 n_max（None 表示默认值）

    def __post_init__(self):
        if int(self.n_qubits) != self.n_qubits or self.n_qubits < 1:
            raise InvalidParameterError("n_qubits", self.n_qubits, "量子比特数必须是正整数")
        if not np.isfinite(self.coupling) or self.coupling <= 0:
            raise InvalidParameterError("coupling", self.coupling, "耦合常数必须为正")
        # 复用 CoherentField 的校验
        CoherentField(self.nbar, self.theta)
        if self.fock_cutoff is not None:
            if int(self.fock_cutoff) != self.fock_cutoff or self.fock_cutoff < 1:
                raise InvalidParameterError("fock_cutoff", self.fock_cutoff, "截断能级必须是正整数")
            if self.fock_cutoff < minimum_fock_cutoff(self.nbar):
                raise TruncationError(
                    self.fock_cutoff,
                    f"截断低于 n̄+10√n̄ = {minimum_fock_cutoff(self.nbar):.2f}"
                )

    @property
    def n_max(self) -> int:
        if self.fock_cutoff is not None:
            return int(self.fock_cutoff)
        return default_fock_cutoff(self.nbar)

    @property
    def field(self) -> CoherentField:
        return CoherentField(self.nbar, self.theta)

    @property
    def revival_time(self) -> float:
        return revival_time(self.nbar, self.coupling)

    @property
    def collapse_time(self) -> float:
        return collapse_time(self.coupling)


def coherent_amplitudes(
    field_state: CoherentField,
    n_max: int,
    tolerance: float = POISSON_TAIL_TOLERANCE
) -> np.ndarray:
    """
    相干态的Fock振幅 C_n = e^{-n̄/2} α^n / √(n!)，n = 0..n_max

    对数空间计算以避免阶乘溢出，截断后重新归一化。

    Args:
        field_state: 相干光场
        n_max: 截断能级
        tolerance: 允许丢弃的Poisson尾部概率

    Returns:
        长度 n_max+1 的复数数组
    """
    if n_max < 0:
        raise InvalidParameterError("n_max", n_max, "截断能级不能为负")

    nbar = field_state.nbar
    amplitudes = np.zeros(n_max + 1, dtype=complex)
    if nbar == 0:
        amplitudes[0] = 1.0
        return amplitudes

    tail = float(pdtrc(n_max, nbar))
    if tail > tolerance:
        raise TruncationError(n_max, f"Poisson尾部 {tail:.3e} 超过 {tolerance:.1e}")

    n = np.arange(n_max + 1)
    log_magnitude = -0.5 * nbar + 0.5 * n * math.log(nbar) - 0.5 * gammaln(n + 1)
    amplitudes = np.exp(log_magnitude) * np.exp(-1j * n * field_state.theta)
    return amplitudes / np.linalg.norm(amplitudes)


def coherent_vectors(alphas: np.ndarray, n_max: int) -> np.ndarray:
    """
    一组相干态在截断Fock基上的分量 ⟨n|β⟩（不重新归一化）

    Args:
        alphas: 相干态参数数组
        n_max: 截断能级

    Returns:
        形状 (len(alphas), n_max+1) 的数组
    """
    alphas = np.asarray(alphas, dtype=complex).ravel()
    n = np.arange(n_max + 1)
    radius = np.abs(alphas)
    phase = np.angle(alphas)

    power = _log_powers(radius, n)
    log_magnitude = -0.5 * radius[:, None] ** 2 + power - 0.5 * gammaln(n + 1)[None, :]
    return np.exp(log_magnitude) * np.exp(1j * phase[:, None] * n[None, :])


def _log_powers(radius: np.ndarray, exponents: np.ndarray) -> np.ndarray:
    """log(r^k)，约定 0^0 = 1、0^k = 0"""
    safe = np.where(radius > 0, radius, 1.0)
    power = np.outer(np.log(safe), exponents)
    power[(radius == 0)[:, None] & (exponents > 0)[None, :]] = -np.inf
    return power


def _ln_binom(n: int, k: np.ndarray) -> np.ndarray:
    return gammaln(n + 1) - gammaln(k + 1) - gammaln(n - k + 1)


@lru_cache(maxsize=None)
def ground_counts(n_qubits: int) -> np.ndarray:
    """乘积基各下标中处于 |g⟩ 的量子比特个数"""
    if n_qubits > MAX_PRODUCT_QUBITS:
        raise InvalidParameterError("n_qubits", n_qubits, f"乘积基最多支持 {MAX_PRODUCT_QUBITS} 个量子比特")
    counts = np.array([bin(q).count("1") for q in range(2 ** n_qubits)], dtype=int)
    counts.setflags(write=False)
    return counts


def qubit_dimension(n_qubits: int, basis: str) -> int:
    if basis == PRODUCT_BASIS:
        return 2 ** n_qubits
    if basis == DICKE_BASIS:
        return n_qubits + 1
    raise InvalidParameterError("basis", basis, "未知基")


def excitation_numbers(n_qubits: int, basis: str) -> np.ndarray:
    """各量子比特基矢的激发数 N_e"""
    if basis == PRODUCT_BASIS:
        return n_qubits - ground_counts(n_qubits)
    if basis == DICKE_BASIS:
        return n_qubits - np.arange(n_qubits + 1)
    raise InvalidParameterError("basis", basis, "未知基")


def _check_unit_norm(amplitudes: np.ndarray, tolerance: float, what: str):
    norm = float(np.linalg.norm(amplitudes))
    if not abs(norm - 1.0) <= tolerance:
        raise InvalidStateError(f"{what}未归一化 (‖ψ‖ = {norm:.15f})")


@dataclass(frozen=True, eq=False)
class _PureQubitState:
    """量子比特纯态基类，振幅只读"""
    amplitudes: np.ndarray = field(repr=False)

    basis = PRODUCT_BASIS

    def __post_init__(self):
        amplitudes = np.array(self.amplitudes, dtype=complex).ravel()
        self._validate_size(amplitudes.size)
        _check_unit_norm(amplitudes, NORM_TOLERANCE, "量子比特态")
        amplitudes.setflags(write=False)
        object.__setattr__(self, "amplitudes", amplitudes)

    def _validate_size(self, size: int):
        raise NotImplementedError

    @property
    def n_qubits(self) -> int:
        raise NotImplementedError

    @property
    def dimension(self) -> int:
        return self.amplitudes.size

    def overlap(self, other: "_PureQubitState") -> complex:
        """⟨self|other⟩"""
        if type(other) is not type(self) or other.dimension != self.dimension:
            raise DimensionMismatchError(self.dimension, other.dimension, "量子比特态维度不匹配")
        return complex(np.vdot(self.amplitudes, other.amplitudes))

    def fidelity(self, other: "_PureQubitState") -> float:
        return abs(self.overlap(other)) ** 2

    def equals_up_to_phase(self, other: "_PureQubitState", tolerance: float = 1e-10) -> bool:
        """判断两态是否只差一个全局相位（|⟨x|y⟩|² = 1）"""
        return abs(self.fidelity(other) - 1.0) < tolerance


@dataclass(frozen=True, eq=False)
class QubitState(_PureQubitState):
    """乘积基下的 N_q 量子比特纯态（2^N_q 个振幅）"""

    basis = PRODUCT_BASIS

    def _validate_size(self, size: int):
        if size < 2 or size & (size - 1):
            raise InvalidStateError(f"振幅个数 {size} 不是2的正整数次幂")

    @property
    def n_qubits(self) -> int:
        return self.amplitudes.size.bit_length() - 1

    @classmethod
    def from_labels(cls, labels: str) -> "QubitState":
        """
        由 e/g 标签构造计算基态，如 'gg'、'eeg'

        Args:
            labels: 只含 e、g 的字符串

        Returns:
            QubitState
        """
        labels = labels.strip().lower()
        if not labels or set(labels) - {"e", "g"}:
            raise InvalidStateError(f"无效的量子比特标签: '{labels}'")
        index = int("".join("1" if c == "g" else "0" for c in labels), 2)
        amplitudes = np.zeros(2 ** len(labels), dtype=complex)
        amplitudes[index] = 1.0
        return cls(amplitudes)

    @classmethod
    def normalized(cls, amplitudes: Sequence[complex]) -> "QubitState":
        amplitudes = np.asarray(amplitudes, dtype=complex)
        norm = np.linalg.norm(amplitudes)
        if norm == 0:
            raise InvalidStateError("零向量不能归一化")
        return cls(amplitudes / norm)

    @classmethod
    def product(cls, singles: Iterable[Sequence[complex]]) -> "QubitState":
        """单量子比特态 (c_e, c_g) 的张量积，第一个为最高位"""
        vector = np.ones(1, dtype=complex)
        for single in singles:
            vector = np.kron(vector, np.asarray(single, dtype=complex))
        return cls(vector)


@dataclass(frozen=True, eq=False)
class DickeState(_PureQubitState):
    """对称子空间中的纯态，振幅按 m = N/2, N/2-1, ..., -N/2 排列"""

    basis = DICKE_BASIS

    def _validate_size(self, size: int):
        if size < 2:
            raise InvalidStateError("Dicke态至少需要2个振幅")

    @property
    def n_qubits(self) -> int:
        return self.amplitudes.size - 1

    @classmethod
    def normalized(cls, amplitudes: Sequence[complex]) -> "DickeState":
        amplitudes = np.asarray(amplitudes, dtype=complex)
        norm = np.linalg.norm(amplitudes)
        if norm == 0:
            raise InvalidStateError("零向量不能归一化")
        return cls(amplitudes / norm)


AnyQubitState = Union[QubitState, DickeState]


def dicke_index(n_qubits: int, m: float) -> int:
    """m 对应的Dicke下标 d = N/2 - m"""
    d = n_qubits / 2.0 - float(m)
    rounded = int(round(d))
    if abs(d - rounded) > 1e-9 or not 0 <= rounded <= n_qubits:
        raise InvalidParameterError("m", m, f"N_q={n_qubits} 时 m 必须属于 -N/2..N/2 且与 N/2 相差整数")
    return rounded


@lru_cache(maxsize=None)
def dicke_isometry(n_qubits: int) -> np.ndarray:
    """
    Dicke基到乘积基的等距映射 W，形状 (2^N, N+1)

    第 d 列在所有含 d 个 |g⟩ 的乘积基矢上取 1/√C(N,d)。
    """
    counts = ground_counts(n_qubits)
    isometry = np.zeros((2 ** n_qubits, n_qubits + 1))
    for d in range(n_qubits + 1):
        members = counts == d
        isometry[members, d] = 1.0 / math.sqrt(math.comb(n_qubits, d))
    isometry.setflags(write=False)
    return isometry


def dicke_state(n_qubits: int, m: float) -> QubitState:
    """
    Dicke态 |N_q, m⟩ 的乘积基表示

    Args:
        n_qubits: 量子比特数
        m: 半整数，-N/2 ≤ m ≤ N/2

    Returns:
        QubitState
    """
    d = dicke_index(n_qubits, m)
    return QubitState(dicke_isometry(n_qubits)[:, d].astype(complex))


def to_product_basis(state: DickeState) -> QubitState:
    """Dicke基 → 乘积基"""
    return QubitState(dicke_isometry(state.n_qubits) @ state.amplitudes)


def to_dicke_basis(state: QubitState, tolerance: float = SYMMETRY_TOLERANCE) -> DickeState:
    """
    乘积基 → Dicke基（要求态位于对称子空间）

    Args:
        state: 乘积基态
        tolerance: 对称子空间外分量的容差

    Returns:
        DickeState

    Raises:
        InvalidStateError: 态不在对称子空间内
    """
    isometry = dicke_isometry(state.n_qubits)
    coefficients = isometry.T @ state.amplitudes
    residual = float(np.linalg.norm(state.amplitudes - isometry @ coefficients))
    if residual > tolerance:
        raise InvalidStateError(f"态不在对称子空间内 (残差 {residual:.3e})")
    return DickeState(coefficients / np.linalg.norm(coefficients))


def is_symmetric(state: QubitState, tolerance: float = SYMMETRY_TOLERANCE) -> bool:
    """判断乘积基态是否位于对称子空间"""
    isometry = dicke_isometry(state.n_qubits)
    residual = np.linalg.norm(state.amplitudes - isometry @ (isometry.T @ state.amplitudes))
    return bool(residual <= tolerance)


def spin_coherent_vectors(zs: np.ndarray, n_qubits: int) -> np.ndarray:
    """
    一组自旋相干态 |z⟩ 的Dicke基分量（已归一化）

    |z⟩ = (1+|z|²)^{-N/2} Σ_d √C(N,d) z^d |N/2-d⟩，对数空间计算。

    Args:
        zs: 复数数组
        n_qubits: 量子比特数

    Returns:
        形状 (len(zs), N+1) 的数组
    """
    zs = np.asarray(zs, dtype=complex).ravel()
    d = np.arange(n_qubits + 1)
    radius = np.abs(zs)
    power = _log_powers(radius, d)
    log_magnitude = (
        0.5 * _ln_binom(n_qubits, d)[None, :]
        + power
        - 0.5 * n_qubits * np.log1p(radius ** 2)[:, None]
    )
    return np.exp(log_magnitude) * np.exp(1j * np.angle(zs)[:, None] * d[None, :])


def spin_coherent_dicke(z: complex, n_qubits: int, at_infinity: bool = False) -> DickeState:
    """
    Dicke基下的自旋相干态 |z⟩

    Args:
        z: 球极投影坐标
        n_qubits: 量子比特数
        at_infinity: True 时返回 z=∞ 对应的全基态

    Returns:
        DickeState
    """
    if at_infinity:
        amplitudes = np.zeros(n_qubits + 1, dtype=complex)
        amplitudes[-1] = 1.0
        return DickeState(amplitudes)
    if not np.isfinite(z):
        raise InvalidParameterError("z", z, "z=∞ 需使用 at_infinity=True")
    vector = spin_coherent_vectors(np.array([z]), n_qubits)[0]
    return DickeState(vector / np.linalg.norm(vector))


def spin_coherent(z: complex, n_qubits: int, at_infinity: bool = False) -> QubitState:
    """
    乘积基下的自旋相干态 |z⟩，等于 ((|e⟩ + z|g⟩)/√(1+|z|²))^{⊗N}

    Args:
        z: 球极投影坐标
        n_qubits: 量子比特数
        at_infinity: True 时返回全基态 |g…g⟩

    Returns:
        QubitState
    """
    return to_product_basis(spin_coherent_dicke(z, n_qubits, at_infinity))


@dataclass(frozen=True, eq=False)
class JointState:
    """
    量子比特⊗光场的联合纯态（相互作用绘景）

    振幅矩阵形状 (量子比特维度, n_max+1)，行是量子比特基矢，列是Fock能级。
    """
    amplitudes: np.ndarray = field(repr=False)
    n_qubits: int
    basis: str = PRODUCT_BASIS

    def __post_init__(self):
        amplitudes = np.array(self.amplitudes, dtype=complex)
        if amplitudes.ndim != 2:
            raise DimensionMismatchError(2, amplitudes.ndim, "联合态振幅必须是二维数组")
        expected = qubit_dimension(self.n_qubits, self.basis)
        if amplitudes.shape[0] != expected:
            raise DimensionMismatchError(expected, amplitudes.shape[0], "量子比特维度不匹配")
        _check_unit_norm(amplitudes, JOINT_NORM_TOLERANCE, "联合态")
        leakage = float(np.sum(np.abs(amplitudes[:, -1]) ** 2))
        if leakage > LEAKAGE_TOLERANCE:
            raise TruncationError(amplitudes.shape[1] - 1, f"最高Fock能级占据 {leakage:.3e} 超过 {LEAKAGE_TOLERANCE:.0e}")
        amplitudes.setflags(write=False)
        object.__setattr__(self, "amplitudes", amplitudes)

    @property
    def n_max(self) -> int:
        return self.amplitudes.shape[1] - 1

    @property
    def qubit_dimension(self) -> int:
        return self.amplitudes.shape[0]

    @property
    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))

    @property
    def fock_leakage(self) -> float:
        return float(np.sum(np.abs(self.amplitudes[:, -1]) ** 2))

    def overlap(self, other: "JointState") -> complex:
        """⟨self|other⟩"""
        if other.amplitudes.shape != self.amplitudes.shape or other.basis != self.basis:
            raise DimensionMismatchError(self.amplitudes.shape, other.amplitudes.shape, "联合态维度不匹配")
        return complex(np.vdot(self.amplitudes, other.amplitudes))

    def to_product_basis(self) -> "JointState":
        if self.basis == PRODUCT_BASIS:
            return self
        return JointState(dicke_isometry(self.n_qubits) @ self.amplitudes, self.n_qubits, PRODUCT_BASIS)


def embed_product(qubits: AnyQubitState, field_state: CoherentField, n_max: int) -> JointState:
    """
    构造乘积初态 ψ ⊗ |α⟩

    Args:
        qubits: 量子比特态（乘积基或Dicke基）
        field_state: 相干光场
        n_max: 截断能级

    Returns:
        JointState，基与输入量子比特态一致
    """
    field_amplitudes = coherent_amplitudes(field_state, n_max)
    return JointState(np.outer(qubits.amplitudes, field_amplitudes), qubits.n_qubits, qubits.basis)


@dataclass(frozen=True, eq=False)
class DensityMatrix:
    """约化密度矩阵（厄米、迹为1）"""
    entries: np.ndarray = field(repr=False)
    side: str = QUBIT_SIDE                 # qubit 或 field
    basis: str = PRODUCT_BASIS             # product / dicke / fock
    n_qubits: Optional[int] = None

    def __post_init__(self):
        entries = np.array(self.entries, dtype=complex)
        if entries.ndim != 2 or entries.shape[0] != entries.shape[1]:
            raise DensityMatrixError(f"密度矩阵必须是方阵，实际形状 {entries.shape}")
        if self.side == QUBIT_SIDE:
            if self.n_qubits is None:
                raise DensityMatrixError("量子比特侧密度矩阵需要给出 n_qubits")
            expected = qubit_dimension(self.n_qubits, self.basis)
            if entries.shape[0] != expected:
                raise DimensionMismatchError(expected, entries.shape[0], "密度矩阵维度不匹配")
        deviation = float(np.max(np.abs(entries - entries.conj().T)))
        if deviation > HERMITIAN_TOLERANCE:
            raise DensityMatrixError(f"密度矩阵不厄米 (偏差 {deviation:.3e})")
        trace = complex(np.trace(entries))
        if abs(trace - 1.0) > TRACE_TOLERANCE:
            raise DensityMatrixError(f"密度矩阵迹不为1 (Tr ρ = {trace:.12f})")
        entries = 0.5 * (entries + entries.conj().T)
        entries.setflags(write=False)
        object.__setattr__(self, "entries", entries)

    @classmethod
    def from_pure(cls, state: AnyQubitState) -> "DensityMatrix":
        return cls(np.outer(state.amplitudes, state.amplitudes.conj()), QUBIT_SIDE, state.basis, state.n_qubits)

    @property
    def dimension(self) -> int:
        return self.entries.shape[0]

    @cached_property
    def eigenvalues(self) -> np.ndarray:
        """升序本征值"""
        return np.linalg.eigvalsh(self.entries)

    @property
    def purity(self) -> float:
        return float(np.real(np.sum(self.entries * self.entries.T)))

    def to_product_basis(self) -> "DensityMatrix":
        """将对称子空间上的量子比特密度矩阵提升到乘积基"""
        if self.basis == PRODUCT_BASIS:
            return self
        if self.basis != DICKE_BASIS:
            raise DensityMatrixError("只有量子比特侧的Dicke基密度矩阵可以提升到乘积基")
        isometry = dicke_isometry(self.n_qubits)
        return DensityMatrix(isometry @ self.entries @ isometry.T, QUBIT_SIDE, PRODUCT_BASIS, self.n_qubits)


def partial_trace_field(state: JointState) -> DensityMatrix:
    """对光场求迹，ρ_q = A·A†"""
    amplitudes = state.amplitudes
    return DensityMatrix(amplitudes @ amplitudes.conj().T, QUBIT_SIDE, state.basis, state.n_qubits)


def partial_trace_qubits(state: JointState) -> DensityMatrix:
    """对量子比特求迹，ρ_f = Aᵀ·A*"""
    amplitudes = state.amplitudes
    return DensityMatrix(amplitudes.T @ amplitudes.conj(), FIELD_SIDE, FOCK_BASIS, state.n_qubits)


def partial_trace_qubit_subset(rho: DensityMatrix, keep: Sequence[int]) -> DensityMatrix:
    """
    对部分量子比特求迹

    Args:
        rho: 乘积基（或可提升到乘积基）的量子比特密度矩阵
        keep: 保留的量子比特编号（从0开始，第0个为最高位）

    Returns:
        保留量子比特上的约化密度矩阵，顺序与原顺序一致
    """
    rho = rho.to_product_basis()
    n_qubits = rho.n_qubits
    keep = sorted(set(keep))
    if not keep or keep[0] < 0 or keep[-1] >= n_qubits:
        raise InvalidParameterError("keep", keep, f"量子比特编号必须属于 0..{n_qubits - 1}")

    tensor = rho.entries.reshape((2,) * (2 * n_qubits))
    remaining = n_qubits
    for qubit in sorted(set(range(n_qubits)) - set(keep), reverse=True):
        tensor = np.trace(tensor, axis1=qubit, axis2=qubit + remaining)
        remaining -= 1

    dimension = 2 ** remaining
    return DensityMatrix(tensor.reshape(dimension, dimension), QUBIT_SIDE, PRODUCT_BASIS, remaining)
