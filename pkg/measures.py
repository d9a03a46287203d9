#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
测量模块
纠缠与相空间诊断：归一化熵、Wootters tangle、三体tangle、
态概率、光场与自旋Q函数以及复苏峰检测
"""

import math
from dataclasses import dataclass, field
from typing import Iterator, List, Sequence, Tuple, Union

import numpy as np
import scipy.linalg as la
from scipy.ndimage import maximum_filter, maximum_filter1d, minimum_filter1d, uniform_filter1d
from scipy.signal import find_peaks

from exceptions import (
    DensityMatrixError,
    DimensionMismatchError,
    GridTooCoarseError,
    InvalidParameterError,
    MixedStateError,
)
from hilbert import (
    DICKE_BASIS,
    FIELD_SIDE,
    PRODUCT_BASIS,
    QUBIT_SIDE,
    AnyQubitState,
    DensityMatrix,
    QubitState,
    coherent_vectors,
    dicke_isometry,
    partial_trace_qubit_subset,
    spin_coherent_vectors,
    to_product_basis,
)
from utils import chunk_ranges, clamp


PSD_TOLERANCE = 1e-10       # 允许的负本征值噪声
SPECTRUM_DUST = 1e-12       # ρρ̃ 本征值低于此量级视为0
RANK_THRESHOLD = 1e-9
PURITY_TOLERANCE = 1e-10
REAL_TOLERANCE = 1e-12
WEIGHT_CUTOFF = 1e-14       # Q函数计算中忽略的密度矩阵本征权重

SIGMA_Y = np.array([[0.0, -1.0j], [1.0j, 0.0]])
SPIN_FLIP = np.kron(SIGMA_Y, SIGMA_Y)


@dataclass(frozen=True)
class TangleBreakdown:
    """Wootters tangle 的完整分解"""
    tangle: float                                   # τ = max(raw, 0)²
    concurrence: float                              # ζ = √τ
    raw: float                                      # λ1-λ2-λ3-λ4（取max之前）
    eigenvalues: Tuple[float, float, float, float]  # 开方后的降序本征值 λ1..λ4
    product_eigenvalues: Tuple[float, float, float, float]  # ρρ̃ 的降序本征值

    @property
    def rank(self) -> int:
        """ρρ̃ 中大于 RANK_THRESHOLD 的本征值个数"""
        return sum(1 for x in self.product_eigenvalues if x > RANK_THRESHOLD)

    @property
    def sudden_death(self) -> bool:
        """raw < 0 时concurrence被截成0"""
        return self.raw < 0


def _clipped_spectrum(rho: DensityMatrix) -> np.ndarray:
    eigenvalues = rho.eigenvalues
    if eigenvalues.min() < -PSD_TOLERANCE:
        raise DensityMatrixError(f"密度矩阵不是半正定的 (最小本征值 {eigenvalues.min():.3e})")
    return np.clip(eigenvalues, 0.0, None)


def entropy(rho: DensityMatrix, n_qubits: int) -> float:
    """
    归一化von Neumann熵 -Tr(ρ log₂ρ)/N_q

    Args:
        rho: 密度矩阵（量子比特侧或光场侧）
        n_qubits: 归一化用的量子比特数

    Returns:
        [0, 1] 内的熵
    """
    if n_qubits < 1:
        raise InvalidParameterError("n_qubits", n_qubits, "量子比特数必须为正")
    probabilities = _clipped_spectrum(rho)
    probabilities = probabilities[probabilities > 0]
    value = float(-np.sum(probabilities * np.log2(probabilities)))
    return max(0.0, value / n_qubits)


def trace_distance(first: DensityMatrix, second: DensityMatrix) -> float:
    """迹距离 ½‖ρ₁-ρ₂‖₁"""
    if first.entries.shape != second.entries.shape or first.basis != second.basis:
        raise DimensionMismatchError(first.entries.shape, second.entries.shape, "密度矩阵维度不匹配")
    difference = first.entries - second.entries
    return float(0.5 * np.sum(np.abs(np.linalg.eigvalsh(difference))))


def _as_two_qubit(rho: DensityMatrix) -> DensityMatrix:
    if rho.side != QUBIT_SIDE or rho.n_qubits != 2:
        raise DimensionMismatchError(2, rho.n_qubits, "tangle 需要两量子比特密度矩阵")
    return rho.to_product_basis()


def tangle(rho: DensityMatrix) -> TangleBreakdown:
    """
    两量子比特的Wootters tangle

    ρρ̃ 的本征值由厄米矩阵 √ρ·ρ̃·√ρ 求得，ρ̃ = (σʸ⊗σʸ)ρ*(σʸ⊗σʸ)。

    Args:
        rho: 两量子比特密度矩阵（Dicke基会先提升到乘积基）

    Returns:
        TangleBreakdown
    """
    entries = _as_two_qubit(rho).entries
    flipped = SPIN_FLIP @ entries.conj() @ SPIN_FLIP

    weights, vectors = la.eigh(entries)
    weights[weights < SPECTRUM_DUST] = 0.0
    sqrt_rho = (vectors * np.sqrt(weights)) @ vectors.conj().T

    product = sqrt_rho @ flipped @ sqrt_rho
    product = 0.5 * (product + product.conj().T)
    spectrum = np.sort(la.eigvalsh(product))[::-1]
    spectrum[np.abs(spectrum) < SPECTRUM_DUST] = 0.0
    spectrum = np.clip(spectrum, 0.0, None)

    lambdas = np.sqrt(spectrum)
    raw = float(lambdas[0] - lambdas[1] - lambdas[2] - lambdas[3])
    concurrence = max(raw, 0.0)
    return TangleBreakdown(
        tangle=concurrence ** 2,
        concurrence=concurrence,
        raw=raw,
        eigenvalues=tuple(float(x) for x in lambdas),
        product_eigenvalues=tuple(float(x) for x in spectrum),
    )


def pairwise_tangle(rho: DensityMatrix, first: int, second: int) -> TangleBreakdown:
    """对其余量子比特求迹后，两量子比特 (first, second) 之间的 tangle"""
    return tangle(partial_trace_qubit_subset(rho, [first, second]))


def three_tangle(psi: Union[QubitState, DensityMatrix], pivot: int = 0) -> float:
    """
    三量子比特纯态的residual tangle

    τ_ABC = 4·det ρ_A - τ_AB - τ_AC

    Args:
        psi: 三量子比特纯态，或纯态密度矩阵
        pivot: 作为A的量子比特编号

    Returns:
        τ_ABC
    """
    if isinstance(psi, DensityMatrix):
        rho = psi
        if rho.purity < 1.0 - PURITY_TOLERANCE:
            raise MixedStateError(rho.purity)
    else:
        rho = DensityMatrix.from_pure(psi)
    if rho.side != QUBIT_SIDE or rho.n_qubits != 3:
        raise DimensionMismatchError(3, rho.n_qubits, "three_tangle 需要三量子比特态")
    if pivot not in (0, 1, 2):
        raise InvalidParameterError("pivot", pivot, "A必须是0、1、2之一")

    others = [q for q in range(3) if q != pivot]
    single = partial_trace_qubit_subset(rho, [pivot]).entries
    one_to_rest = 4.0 * float(np.real(np.linalg.det(single)))
    pairs = sum(pairwise_tangle(rho, pivot, other).tangle for other in others)
    return one_to_rest - pairs


def _target_vector(rho: DensityMatrix, target: AnyQubitState) -> np.ndarray:
    if rho.side != QUBIT_SIDE:
        raise DimensionMismatchError(QUBIT_SIDE, rho.side, "probability 需要量子比特侧密度矩阵")
    if target.n_qubits != rho.n_qubits:
        raise DimensionMismatchError(rho.n_qubits, target.n_qubits, "目标态量子比特数不匹配")
    if rho.basis == target.basis:
        return target.amplitudes
    if rho.basis == DICKE_BASIS:
        # ρ 支撑在对称子空间上，只需目标态的对称投影
        return dicke_isometry(rho.n_qubits).T @ target.amplitudes
    return to_product_basis(target).amplitudes


def probability(rho: DensityMatrix, target: AnyQubitState) -> float:
    """
    ⟨target|ρ|target⟩

    Args:
        rho: 量子比特侧密度矩阵
        target: 目标态（乘积基或Dicke基）

    Returns:
        [0, 1] 内的概率
    """
    vector = _target_vector(rho, target)
    value = complex(np.vdot(vector, rho.entries @ vector))
    if abs(value.imag) > REAL_TOLERANCE:
        raise DensityMatrixError(f"期望值虚部过大 ({value.imag:.3e})")
    return clamp(value.real, 0.0, 1.0)


@dataclass(frozen=True)
class PhaseGridSpec:
    """复平面采样网格"""
    re_min: float
    re_max: float
    im_min: float
    im_max: float
    re_points: int = 201
    im_points: int = 201

    def __post_init__(self):
        if self.re_points < 2 or self.im_points < 2:
            raise InvalidParameterError("points", (self.re_points, self.im_points), "每个方向至少2个点")
        if not (self.re_max > self.re_min and self.im_max > self.im_min):
            raise InvalidParameterError("range", (self.re_min, self.re_max, self.im_min, self.im_max), "范围必须非空")

    @classmethod
    def square(cls, half_width: float, points: int = 201) -> "PhaseGridSpec":
        return cls(-half_width, half_width, -half_width, half_width, points, points)

    @classmethod
    def for_field(cls, nbar: float, points: int = 201, margin: float = 4.0) -> "PhaseGridSpec":
        """光场默认网格 [-√n̄-4, √n̄+4]²"""
        return cls.square(math.sqrt(nbar) + margin, points)

    @classmethod
    def for_spin(cls, extent: float = 3.0, points: int = 201) -> "PhaseGridSpec":
        """自旋默认网格 [-3, 3]²"""
        return cls.square(extent, points)

    @property
    def re_axis(self) -> np.ndarray:
        return np.linspace(self.re_min, self.re_max, self.re_points)

    @property
    def im_axis(self) -> np.ndarray:
        return np.linspace(self.im_min, self.im_max, self.im_points)

    @property
    def cell_area(self) -> float:
        return ((self.re_max - self.re_min) / (self.re_points - 1)
                * (self.im_max - self.im_min) / (self.im_points - 1))


@dataclass(frozen=True, eq=False)
class PhaseGrid:
    """复平面上的Q函数表，values[i, j] 对应 re_axis[i] + i·im_axis[j]"""
    spec: PhaseGridSpec
    values: np.ndarray = field(repr=False)

    def riemann_sum(self, factor: float = 1.0) -> float:
        return float(factor * np.sum(self.values) * self.spec.cell_area)

    def peak(self) -> Tuple[float, float, float]:
        """最大值位置 (re, im, value)"""
        i, j = np.unravel_index(int(np.argmax(self.values)), self.values.shape)
        return float(self.spec.re_axis[i]), float(self.spec.im_axis[j]), float(self.values[i, j])

    def local_maxima(self, min_fraction: float = 0.1, size: int = 5) -> List[Tuple[float, float, float]]:
        """
        局部极大值（高度不低于全局最大值的 min_fraction）

        Returns:
            按高度降序的 (re, im, value) 列表
        """
        ceiling = float(self.values.max())
        if ceiling <= 0:
            return []
        is_peak = (self.values == maximum_filter(self.values, size=size, mode="nearest"))
        is_peak &= self.values >= min_fraction * ceiling
        re_axis, im_axis = self.spec.re_axis, self.spec.im_axis
        peaks = [(float(re_axis[i]), float(im_axis[j]), float(self.values[i, j]))
                 for i, j in zip(*np.nonzero(is_peak))]
        return sorted(peaks, key=lambda p: -p[2])

    def rows(self) -> Iterator[Tuple[float, float, float]]:
        """按 re 外层、im 内层的顺序输出 (re, im, value)"""
        re_axis, im_axis = self.spec.re_axis, self.spec.im_axis
        for i, re in enumerate(re_axis):
            for j, im in enumerate(im_axis):
                yield float(re), float(im), float(self.values[i, j])


def _weighted_eigenvectors(rho: DensityMatrix) -> np.ndarray:
    """ρ = Σ w_i|u_i⟩⟨u_i| 中 √w_i·u_i 组成的列"""
    weights, vectors = la.eigh(rho.entries)
    keep = weights > WEIGHT_CUTOFF
    return vectors[:, keep] * np.sqrt(weights[keep])


def _expectation_rows(vectors: np.ndarray, weighted: np.ndarray) -> np.ndarray:
    """每行向量 v 的 ⟨v|ρ|v⟩"""
    return np.sum(np.abs(vectors.conj() @ weighted) ** 2, axis=1)


def q_function(rho_f: DensityMatrix, grid: PhaseGridSpec, chunk_rows: int = 16) -> PhaseGrid:
    """
    光场Q函数 Q(β) = ⟨β|ρ_f|β⟩/π

    Args:
        rho_f: 光场侧密度矩阵
        grid: 采样网格
        chunk_rows: 每批处理的 re 行数

    Returns:
        PhaseGrid
    """
    if rho_f.side != FIELD_SIDE:
        raise DensityMatrixError("q_function 需要光场侧密度矩阵")
    n_max = rho_f.dimension - 1
    weighted = _weighted_eigenvectors(rho_f)
    re_axis, im_axis = grid.re_axis, grid.im_axis

    values = np.empty((grid.re_points, grid.im_points))
    for rows in chunk_ranges(grid.re_points, chunk_rows):
        betas = (re_axis[rows, None] + 1j * im_axis[None, :]).ravel()
        overlaps = _expectation_rows(coherent_vectors(betas, n_max), weighted)
        values[rows] = overlaps.reshape(-1, grid.im_points) / math.pi
    return PhaseGrid(grid, np.clip(values, 0.0, None))


def spin_q_function(rho_q: DensityMatrix, grid: PhaseGridSpec, n_qubits: int, chunk_rows: int = 32) -> PhaseGrid:
    """
    自旋Q函数 Q_q(z) = ⟨z|ρ_q|z⟩/(1+|z|²)²

    完备性：(N+1)/π ∫ Q_q d²z = 1

    Args:
        rho_q: 量子比特侧密度矩阵（乘积基或Dicke基）
        grid: z 平面网格
        n_qubits: 量子比特数

    Returns:
        PhaseGrid
    """
    if rho_q.side != QUBIT_SIDE:
        raise DensityMatrixError("spin_q_function 需要量子比特侧密度矩阵")
    if rho_q.n_qubits != n_qubits:
        raise DimensionMismatchError(n_qubits, rho_q.n_qubits, "量子比特数不匹配")
    weighted = _weighted_eigenvectors(rho_q)
    lift = dicke_isometry(n_qubits).T if rho_q.basis == PRODUCT_BASIS else None
    re_axis, im_axis = grid.re_axis, grid.im_axis

    values = np.empty((grid.re_points, grid.im_points))
    for rows in chunk_ranges(grid.re_points, chunk_rows):
        zs = (re_axis[rows, None] + 1j * im_axis[None, :]).ravel()
        vectors = spin_coherent_vectors(zs, n_qubits)
        if lift is not None:
            vectors = vectors @ lift
        overlaps = _expectation_rows(vectors, weighted) / (1.0 + np.abs(zs) ** 2) ** 2
        values[rows] = overlaps.reshape(-1, grid.im_points)
    return PhaseGrid(grid, np.clip(values, 0.0, None))


def spin_q_normalization(grid: PhaseGrid, n_qubits: int) -> float:
    """自旋Q函数完备性积分 (N+1)/π Σ Q_q ΔA"""
    return grid.riemann_sum((n_qubits + 1) / math.pi)


def oscillation_envelope(values: np.ndarray, window: int) -> np.ndarray:
    """滑动窗口内的 max - min"""
    return maximum_filter1d(values, window, mode="nearest") - minimum_filter1d(values, window, mode="nearest")


def detect_revivals(
    times: Sequence[float],
    values: Sequence[float],
    collapse: float,
    threshold: float = 0.05,
    min_prominence: float = 0.02,
    relative: bool = False
) -> List[float]:
    """
    在序列的振荡包络上寻找复苏峰

    包络为宽度 t_c 的滑动 max-min，再做一次同宽度平滑；
    峰取包络局部极大值（高于阈值、两端点除外）对应的窗口中心。
    relative 为真时阈值与突出度按包络最大值缩放。

    Args:
        times: 均匀时间网格
        values: 序列，如 P_g(t) 或纯度 Tr ρ_q²
        collapse: 坍缩时间 t_c（与 times 同单位）
        threshold: 包络高度下限
        min_prominence: 峰的最小突出度
        relative: 阈值是否相对于包络最大值

    Returns:
        峰所在时间
    """
    times = np.asarray(times, dtype=float)
    values = np.asarray(values, dtype=float)
    if times.size != values.size:
        raise DimensionMismatchError(times.size, values.size, "时间与数值长度不一致")
    if times.size < 3:
        return []
    steps = np.diff(times)
    step = float(steps.mean())
    if not np.allclose(steps, step, rtol=1e-6, atol=0.0):
        raise InvalidParameterError("times", "non-uniform", "时间网格必须均匀")
    if step >= collapse / 10.0:
        raise GridTooCoarseError(step, collapse / 10.0)

    window = max(3, int(round(collapse / step)) | 1)
    envelope = uniform_filter1d(oscillation_envelope(values, window), window, mode="nearest")
    scale = float(envelope.max()) if relative else 1.0
    peaks, _ = find_peaks(envelope, height=threshold * scale, distance=window, prominence=min_prominence * scale)
    return [float(times[i]) for i in peaks]


def detect_minima(
    times: Sequence[float],
    values: Sequence[float],
    collapse: float,
    min_prominence: float = 0.05
) -> List[float]:
    """
    平滑后序列的局部极小值（用于熵谷）

    Args:
        times: 均匀时间网格
        values: 序列，如 S_q(t)
        collapse: 坍缩时间 t_c（与 times 同单位），作为平滑窗口与最小间距
        min_prominence: 极小值的最小深度

    Returns:
        极小值所在时间
    """
    times = np.asarray(times, dtype=float)
    values = np.asarray(values, dtype=float)
    if times.size != values.size:
        raise DimensionMismatchError(times.size, values.size, "时间与数值长度不一致")
    if times.size < 3:
        return []
    step = float(np.diff(times).mean())
    window = max(3, int(round(collapse / step)) | 1)
    smoothed = uniform_filter1d(values, window, mode="nearest")
    troughs, _ = find_peaks(-smoothed, distance=window, prominence=min_prominence)
    return [float(times[i]) for i in troughs]
