#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
大n̄近似模块
在 n̄ ≫ 1 时把联合态写成若干 β_k·D_k(t)⊗|Φ_k(t)⟩ 分量之和，
并给出吸引子态、吸引盆态、复苏/吸引子时间与偶极矩方向
"""

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

import numpy as np
import scipy.linalg as la

from exceptions import DimensionMismatchError, InvalidParameterError, InvalidStateError
from hilbert import (
    DICKE_BASIS,
    AnyQubitState,
    CoherentField,
    DickeState,
    JointState,
    QubitState,
    coherent_amplitudes,
    revival_time,
    spin_coherent_dicke,
    to_dicke_basis,
    to_product_basis,
)
from logger_config import get_simulation_logger


logger = get_simulation_logger()

# |β₀| 低于此值视为位于吸引盆内
BASIN_THRESHOLD = 1e-10


@dataclass(frozen=True, eq=False)
class LargeNComponent:
    """大n̄展开中的一个分量 β_k·D_k(t)⊗|Φ_k(t)⟩"""
    k: float                                   # 半整数标签
    beta: complex                              # 权重 β_k(t)
    qubit_state: Optional[AnyQubitState]       # D_k(t)；None 表示方向无定义
    field_state: CoherentField                 # Φ_k(t)
    rotation: float = 0.0                      # Φ_k 相对 |α⟩ 的旋转角

    @property
    def undefined_direction(self) -> bool:
        return self.qubit_state is None

    @property
    def weight(self) -> float:
        return abs(self.beta) ** 2


@dataclass(frozen=True)
class BasinSpec:
    """吸引盆态参数"""
    n_qubits: int           # 量子比特数
    a: complex = 0.0        # 偶数 d 分量的振幅
    theta: float = 0.0      # 光场相位 θ

    def __post_init__(self):
        if int(self.n_qubits) != self.n_qubits or self.n_qubits < 1:
            raise InvalidParameterError("n_qubits", self.n_qubits, "量子比特数必须是正整数")
        if abs(self.a) > self.max_amplitude + 1e-12:
            raise InvalidParameterError(
                "a", self.a, f"|a| 不能超过 1/√(2^(N-1)) = {self.max_amplitude:.12g}"
            )

    @property
    def max_amplitude(self) -> float:
        return 1.0 / math.sqrt(2.0 ** (self.n_qubits - 1))

    @property
    def complement(self) -> float:
        """奇数 d 分量的振幅 s = √(1/2^(N-1) - |a|²)"""
        return math.sqrt(max(0.0, self.max_amplitude ** 2 - abs(self.a) ** 2))


@dataclass(frozen=True, eq=False)
class SpinCatComponent:
    """自旋猫态的一支 w·|z⟩"""
    weight: complex
    z: complex
    state: DickeState = field(repr=False)


def field_rotation_angle(k: float, t: float, revival: float) -> float:
    """Φ_k(t) = |e^{iφ}α⟩ 的旋转角 φ = 2πk·t/t_r"""
    return 2.0 * math.pi * k * t / revival


def _revival_or_fail(field_state: CoherentField, coupling: float) -> float:
    if field_state.nbar <= 0:
        raise InvalidParameterError("nbar", field_state.nbar, "大n̄近似需要 n̄ > 0")
    return revival_time(field_state.nbar, coupling)


def _check_sign(sign: int):
    if sign not in (1, -1):
        raise InvalidParameterError("sign", sign, "符号只能是 +1 或 -1")


def _extreme_single(theta: float, sign: int, tau: float) -> np.ndarray:
    """D_{±1/2} 在 τ = t/t_r 时的单量子比特向量 (e^{-iθ}|e⟩ ∓ e^{∓iπτ}|g⟩)/√2"""
    return np.array([np.exp(-1j * theta), -sign * np.exp(-1j * sign * math.pi * tau)]) / math.sqrt(2.0)


def _extreme_dicke(n_qubits: int, theta: float, sign: int, tau: float) -> DickeState:
    """
    D_{±N/2}(t) = D_{±1/2}(N t)^{⊗N} 的Dicke基表示

    单量子比特因子为 e^{-iθ}(|e⟩ + z|g⟩)/√2，z = ∓e^{iθ}e^{∓iπNτ}
    """
    z = -sign * np.exp(1j * theta) * np.exp(-1j * sign * math.pi * n_qubits * tau)
    coherent = spin_coherent_dicke(z, n_qubits)
    return DickeState(np.exp(-1j * n_qubits * theta) * coherent.amplitudes)


def attractor_state(n_qubits: int, theta: float, sign: int = 1) -> QubitState:
    """
    吸引子态 ((e^{-iθ}|e⟩ ± i|g⟩)/√2)^{⊗N}

    Args:
        n_qubits: 量子比特数
        theta: 光场相位
        sign: +1 或 -1

    Returns:
        乘积基 QubitState
    """
    _check_sign(sign)
    single = np.array([np.exp(-1j * theta), sign * 1j]) / math.sqrt(2.0)
    return QubitState.product([single] * n_qubits)


def attractor_state_dicke(n_qubits: int, theta: float, sign: int = 1) -> DickeState:
    """吸引子态的Dicke基表示，等于 e^{-iNθ}|z = ±i·e^{iθ}⟩"""
    _check_sign(sign)
    coherent = spin_coherent_dicke(sign * 1j * np.exp(1j * theta), n_qubits)
    return DickeState(np.exp(-1j * n_qubits * theta) * coherent.amplitudes)


def basin_state_dicke(spec: BasinSpec) -> DickeState:
    """
    Dicke基下的吸引盆态

    振幅 A·e^{i(N/2-m)θ}·√C(N, N/2-m)，N/2-m 为偶数时 A=a，为奇数时 A=s。
    """
    n_qubits = spec.n_qubits
    d = np.arange(n_qubits + 1)
    coefficient = np.where(d % 2 == 0, complex(spec.a), complex(spec.complement))
    binomials = np.array([math.comb(n_qubits, int(k)) for k in d], dtype=float)
    return DickeState(coefficient * np.exp(1j * d * spec.theta) * np.sqrt(binomials))


def basin_state(spec: BasinSpec) -> QubitState:
    """乘积基下的吸引盆态"""
    return to_product_basis(basin_state_dicke(spec))


def basin_as_cat(spec: BasinSpec) -> Tuple[SpinCatComponent, SpinCatComponent]:
    """
    把吸引盆态写成两支自旋相干态的叠加

    w_± = √(2^(N-2))·(a ± s)，中心 z = ±e^{iθ}

    Returns:
        (正支, 负支)
    """
    scale = math.sqrt(2.0 ** (spec.n_qubits - 2))
    a, s = complex(spec.a), spec.complement
    components = []
    for sign in (1, -1):
        z = sign * np.exp(1j * spec.theta)
        components.append(SpinCatComponent(
            weight=scale * (a + sign * s),
            z=complex(z),
            state=spin_coherent_dicke(z, spec.n_qubits),
        ))
    return components[0], components[1]


def reconstruct_cat(components: Sequence[SpinCatComponent]) -> DickeState:
    """按权重叠加自旋猫态的各支"""
    amplitudes = sum(c.weight * c.state.amplitudes for c in components)
    return DickeState(amplitudes)


def basin_ghz_form(spec: BasinSpec) -> List[Tuple[complex, np.ndarray]]:
    """
    吸引盆态的GHZ形式：½(a±s)·(|e⟩ ± e^{iθ}|g⟩)^{⊗N}

    Returns:
        [(系数, 未归一化的乘积基向量)]，正支在前
    """
    terms = []
    for sign in (1, -1):
        single = np.array([1.0, sign * np.exp(1j * spec.theta)])
        vector = np.ones(1, dtype=complex)
        for _ in range(spec.n_qubits):
            vector = np.kron(vector, single)
        terms.append((0.5 * (complex(spec.a) + sign * spec.complement), vector))
    return terms


def one_qubit_components(
    c_e: complex,
    c_g: complex,
    field_state: CoherentField,
    t: float,
    coupling: float = 1.0
) -> Tuple[LargeNComponent, LargeNComponent]:
    """
    单量子比特的两个大n̄分量（k = +1/2, -1/2）

    β_± = e^{±iπ(t/t_r)(n̄+1)}(e^{iθ}C_e ∓ C_g)/√2
    D_± = (e^{-iθ}|e⟩ ∓ e^{∓iπt/t_r}|g⟩)/√2
    Φ_± = |e^{±iπt/t_r}α⟩
    """
    if abs(abs(c_e) ** 2 + abs(c_g) ** 2 - 1.0) > 1e-12:
        raise InvalidStateError("单量子比特振幅未归一化")
    revival = _revival_or_fail(field_state, coupling)
    tau = t / revival
    theta = field_state.theta

    components = []
    for sign in (1, -1):
        beta = (np.exp(1j * sign * math.pi * tau * (field_state.nbar + 1))
                * (np.exp(1j * theta) * c_e - sign * c_g) / math.sqrt(2.0))
        angle = field_rotation_angle(0.5 * sign, t, revival)
        components.append(LargeNComponent(
            k=0.5 * sign,
            beta=complex(beta),
            qubit_state=QubitState(_extreme_single(theta, sign, tau)),
            field_state=field_state.rotated(angle),
            rotation=angle,
        ))
    return components[0], components[1]


def two_qubit_components(
    c_ee: complex,
    c_eg: complex,
    c_ge: complex,
    c_gg: complex,
    field_state: CoherentField,
    t: float,
    coupling: float = 1.0
) -> Tuple[LargeNComponent, LargeNComponent, LargeNComponent]:
    """
    两量子比特的三个大n̄分量（k = +1, 0, -1）

    记 X = e^{2iθ}C_ee, Y = e^{iθ}(C_eg+C_ge), Z = C_gg：
    β_±1 = ½e^{±2πi(t/t_r)(n̄+3/2)}(X ∓ Y + Z)，D_±1(t) = D_±½(2t)^{⊗2}
    β_0 = √(|X-Z|² + |C_eg-C_ge|²)/√2，D_0 与 Φ_0 = |α⟩ 不随时间变化

    Returns:
        (k=+1, k=0, k=-1)；β_0 为零时 k=0 分量标记为方向无定义
    """
    amplitudes = np.array([c_ee, c_eg, c_ge, c_gg], dtype=complex)
    if abs(np.linalg.norm(amplitudes) - 1.0) > 1e-12:
        raise InvalidStateError("两量子比特振幅未归一化")
    revival = _revival_or_fail(field_state, coupling)
    tau = t / revival
    theta = field_state.theta
    nbar = field_state.nbar

    x = np.exp(2j * theta) * c_ee
    y = np.exp(1j * theta) * (c_eg + c_ge)
    z = c_gg
    antisymmetric = c_eg - c_ge

    extremes = {}
    for sign in (1, -1):
        beta = 0.5 * np.exp(2j * sign * math.pi * tau * (nbar + 1.5)) * (x - sign * y + z)
        single = _extreme_single(theta, sign, 2.0 * tau)
        angle = field_rotation_angle(sign, t, revival)
        extremes[sign] = LargeNComponent(
            k=float(sign),
            beta=complex(beta),
            qubit_state=QubitState(np.kron(single, single)),
            field_state=field_state.rotated(angle),
            rotation=angle,
        )

    spread = math.sqrt(abs(x - z) ** 2 + abs(antisymmetric) ** 2)
    beta_0 = spread / math.sqrt(2.0)
    if beta_0 < BASIN_THRESHOLD:
        middle = LargeNComponent(k=0.0, beta=0j, qubit_state=None, field_state=field_state)
    else:
        vector = np.array([
            (x - z) * np.exp(-2j * theta),
            antisymmetric,
            -antisymmetric,
            -(x - z),
        ]) / (math.sqrt(2.0) * spread)
        middle = LargeNComponent(k=0.0, beta=complex(beta_0), qubit_state=QubitState(vector), field_state=field_state)

    return extremes[1], middle, extremes[-1]


def _extreme_overlaps(qubits: AnyQubitState, theta: float) -> Tuple[complex, complex]:
    """⟨D_{±N/2}(0)|ψ⟩"""
    overlaps = []
    for sign in (1, -1):
        extreme = _extreme_dicke(qubits.n_qubits, theta, sign, 0.0)
        if qubits.basis != DICKE_BASIS:
            extreme = to_product_basis(extreme)
        overlaps.append(extreme.overlap(qubits))
    return overlaps[0], overlaps[1]


def nq_extreme_components(
    qubits: AnyQubitState,
    field_state: CoherentField,
    t: float,
    coupling: float = 1.0
) -> Tuple[LargeNComponent, LargeNComponent]:
    """
    N 量子比特的两个极端分量（k = ±N/2）

    β_±(t) = ⟨D_±(0)|ψ⟩·e^{±iπN(t/t_r)(n̄+(N+1)/2)}，D_±(t) = D_±½(Nt)^{⊗N}，
    Φ_± = |e^{±iπNt/t_r}α⟩

    Args:
        qubits: 对称子空间中的初始量子比特态（乘积基或Dicke基）
        field_state: 相干光场
        t: 时间
        coupling: 耦合常数

    Returns:
        (k=+N/2, k=-N/2)，量子比特态的基与输入一致
    """
    if qubits.basis != DICKE_BASIS:
        # 只做对称性检查
        to_dicke_basis(qubits)
    revival = _revival_or_fail(field_state, coupling)
    n_qubits = qubits.n_qubits
    tau = t / revival
    theta = field_state.theta
    initial = _extreme_overlaps(qubits, theta)

    components = []
    for sign, beta_0 in zip((1, -1), initial):
        phase = sign * math.pi * n_qubits * tau * (field_state.nbar + 0.5 * (n_qubits + 1))
        direction = _extreme_dicke(n_qubits, theta, sign, tau)
        if qubits.basis != DICKE_BASIS:
            direction = to_product_basis(direction)
        angle = field_rotation_angle(0.5 * n_qubits * sign, t, revival)
        components.append(LargeNComponent(
            k=0.5 * n_qubits * sign,
            beta=complex(beta_0 * np.exp(1j * phase)),
            qubit_state=direction,
            field_state=field_state.rotated(angle),
            rotation=angle,
        ))
    return components[0], components[1]


def basin_defect(qubits: AnyQubitState, theta: float) -> float:
    """
    初态落在两个极端分量之外的振幅 √(1 - |β_+|² - |β_-|²)

    两量子比特时等于 |β₀|；单量子比特恒为0。
    """
    plus, minus = _extreme_overlaps(qubits, theta)
    return math.sqrt(max(0.0, 1.0 - abs(plus) ** 2 - abs(minus) ** 2))


def is_in_basin(qubits: AnyQubitState, theta: float, threshold: float = BASIN_THRESHOLD) -> bool:
    """初态是否位于吸引盆内"""
    return basin_defect(qubits, theta) < threshold


def component_basis(n_qubits: int, theta: float) -> Tuple[np.ndarray, np.ndarray]:
    """
    t=0 时各分量的量子比特方向 D_k(0)（Dicke基）

    D_k(0) 是 W = e^{-iθ}J₊ + e^{iθ}J₋ 的本征矢，本征值 -2k。

    Returns:
        (k 降序数组, 按列排列的本征矢矩阵)
    """
    if int(n_qubits) != n_qubits or n_qubits < 1:
        raise InvalidParameterError("n_qubits", n_qubits, "量子比特数必须是正整数")
    coupling = np.zeros((n_qubits + 1, n_qubits + 1), dtype=complex)
    for d in range(1, n_qubits + 1):
        # J₊|d⟩ = √(d(N-d+1))|d-1⟩，d 为基态量子比特数
        element = math.sqrt(d * (n_qubits - d + 1))
        coupling[d - 1, d] = np.exp(-1j * theta) * element
        coupling[d, d - 1] = np.exp(1j * theta) * element
    eigenvalues, vectors = la.eigh(coupling)
    return -0.5 * eigenvalues, vectors


def uniform_component_state(n_qubits: int, theta: float) -> DickeState:
    """
    所有分量权重相等（均为 1/(N+1)）的初态

    相差 d 的每一对分量都有权重，p·t_r/d 处的复苏全部可见。
    """
    _, vectors = component_basis(n_qubits, theta)
    return DickeState.normalized(vectors.sum(axis=1))


def assemble(components: Sequence[LargeNComponent], n_max: int) -> Tuple[JointState, float]:
    """
    把大n̄分量叠加成联合态

    Args:
        components: 分量列表（方向无定义的分量跳过）
        n_max: 截断能级

    Returns:
        (归一化后的 JointState, 归一化缺陷 |‖Ψ‖ - 1|)
    """
    defined = [c for c in components if not c.undefined_direction]
    if not defined:
        raise InvalidStateError("没有可叠加的分量")
    basis = defined[0].qubit_state.basis
    n_qubits = defined[0].qubit_state.n_qubits
    dimension = defined[0].qubit_state.dimension
    for component in defined[1:]:
        if component.qubit_state.basis != basis or component.qubit_state.dimension != dimension:
            raise DimensionMismatchError(dimension, component.qubit_state.dimension, "分量的量子比特基不一致")

    amplitudes = np.zeros((dimension, n_max + 1), dtype=complex)
    for component in defined:
        amplitudes += component.beta * np.outer(
            component.qubit_state.amplitudes,
            coherent_amplitudes(component.field_state, n_max),
        )

    norm = float(np.linalg.norm(amplitudes))
    if norm == 0:
        raise InvalidStateError("分量叠加结果为零向量")
    defect = abs(norm - 1.0)
    logger.debug(f"大n̄组装: {len(defined)} 个分量, 归一化缺陷 {defect:.3e}")
    return JointState(amplitudes / norm, n_qubits, basis), defect


def revival_times(n_qubits: int, k_max: int = 1) -> List[float]:
    """
    复苏时间（以 t_r 为单位）：(k + 1/p) 与 (k + (p-1)/p)，p = 1..N，k = 0..k_max-1

    Returns:
        去重、升序、严格大于0的列表
    """
    times = set()
    for k in range(k_max):
        for p in range(1, n_qubits + 1):
            times.add(k + Fraction(1, p))
            times.add(k + Fraction(p - 1, p))
    return [float(x) for x in sorted(times) if x > 0]


def attractor_times(n_qubits: int, k_max: int = 1) -> List[float]:
    """吸引子时间（以 t_r 为单位）：k + (2p-1)/(2N)，p = 1..N"""
    times = set()
    for k in range(k_max):
        for p in range(1, n_qubits + 1):
            times.add(k + Fraction(2 * p - 1, 2 * n_qubits))
    return [float(x) for x in sorted(times)]


def dipole_moment(k: float, theta: float, t: float, revival: float = 1.0) -> np.ndarray:
    """
    分量 k 的平面偶极矩（自旋单位）

    d_k = |k|·(sign(k)·cos(θ + 2|k|πt/t_r), sin(θ + 2|k|πt/t_r))

    Args:
        k: 半整数标签
        theta: 光场相位
        t: 时间
        revival: 复苏时间 t_r（t 以 t_r 为单位时取1）

    Returns:
        二维向量
    """
    if k == 0:
        return np.zeros(2)
    angle = theta + 2.0 * abs(k) * math.pi * t / revival
    return abs(k) * np.array([math.copysign(1.0, k) * math.cos(angle), math.sin(angle)])
