#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
实验运行器
按 ExperimentConfig 运行一次实验：构造初态、选择引擎演化、
计算标量可观测量与Q函数快照，并写出确定性的 CSV 与 meta 文件
"""

import csv
import logging
import math
from dataclasses import dataclass, field
from functools import cached_property
from pathlib import Path
from typing import Callable, Dict, Iterator, List, Optional, Sequence, Tuple

import numpy as np

from dynamics import (
    TimeGrid,
    build_blocks,
    choose_basis,
    evolve,
    excitation_expectation,
    iter_evolved,
    mean_photon_number,
    prepare_qubits,
)
from exceptions import ConfigurationError, InvalidStateError, SimulationError
from hilbert import (
    DICKE_BASIS,
    PRODUCT_BASIS,
    AnyQubitState,
    DensityMatrix,
    DickeState,
    JointState,
    ModelConfig,
    QubitState,
    embed_product,
    partial_trace_field,
    partial_trace_qubits,
    spin_coherent_dicke,
    to_dicke_basis,
    to_product_basis,
)
from largen import (
    BasinSpec,
    assemble,
    attractor_state_dicke,
    attractor_times,
    basin_defect,
    basin_state,
    basin_state_dicke,
    is_in_basin,
    nq_extreme_components,
    one_qubit_components,
    revival_times,
    two_qubit_components,
    uniform_component_state,
)
from logger_config import LogContext, get_experiment_logger
from measures import (
    PhaseGridSpec,
    TangleBreakdown,
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
)
from parameter_config import ExperimentConfig
from utils import Timer, format_complex, format_number, parse_complex, split_list


logger = get_experiment_logger()

# 守恒量告警阈值
NORM_DRIFT_LIMIT = 1e-10
EXCITATION_DRIFT_LIMIT = 1e-8
ENTROPY_GAP_LIMIT = 1e-8

# 复苏扫描的包络阈值（相对包络最大值）
REVIVAL_SCAN_THRESHOLD = 0.03
REVIVAL_SCAN_PROMINENCE = 0.01

SERIES_FILE = "series.csv"
SWEEP_FILE = "sweep.csv"
REVIVALS_FILE = "revivals.csv"
META_FILE = "meta.txt"


# ==================== 可观测量 ====================

@dataclass
class ObservableTargets:
    """可观测量用到的参考态（按需构造，Dicke基表示）"""
    n_qubits: int
    theta: float
    initial: AnyQubitState

    @cached_property
    def ground(self) -> DickeState:
        return spin_coherent_dicke(0j, self.n_qubits, at_infinity=True)

    @cached_property
    def attractor_plus(self) -> DickeState:
        return attractor_state_dicke(self.n_qubits, self.theta, 1)

    @cached_property
    def attractor_minus(self) -> DickeState:
        return attractor_state_dicke(self.n_qubits, self.theta, -1)


class Snapshot:
    """某一时刻的联合态，约化密度矩阵与 tangle 只计算一次"""

    def __init__(self, state: JointState, targets: ObservableTargets):
        self.state = state
        self.targets = targets

    @cached_property
    def rho_q(self) -> DensityMatrix:
        return partial_trace_field(self.state)

    @cached_property
    def rho_f(self) -> DensityMatrix:
        return partial_trace_qubits(self.state)

    @cached_property
    def pair(self) -> TangleBreakdown:
        return tangle(self.rho_q)

    @cached_property
    def pairwise(self) -> Dict[str, float]:
        return {
            label: pairwise_tangle(self.rho_q, first, second).tangle
            for label, (first, second) in PAIR_LABELS.items()
        }


PAIR_LABELS = {"ab": (0, 1), "ac": (0, 2), "bc": (1, 2)}


@dataclass(frozen=True)
class ObservableSpec:
    """标量可观测量"""
    name: str
    description: str
    compute: Callable[[Snapshot], float] = field(repr=False)
    qubit_counts: Optional[Tuple[int, ...]] = None      # None 表示任意 N_q

    def supports(self, n_qubits: int) -> bool:
        return self.qubit_counts is None or n_qubits in self.qubit_counts


def _pairwise(label: str) -> Callable[[Snapshot], float]:
    return lambda snap: snap.pairwise[label]


OBSERVABLES: Dict[str, ObservableSpec] = {spec.name: spec for spec in [
    ObservableSpec("entropy", "量子比特归一化熵 S_q/N_q",
                   lambda snap: entropy(snap.rho_q, snap.state.n_qubits)),
    ObservableSpec("entropy_field", "光场归一化熵 S_f/N_q",
                   lambda snap: entropy(snap.rho_f, snap.state.n_qubits)),
    ObservableSpec("p_g", "全基态概率 P_g",
                   lambda snap: probability(snap.rho_q, snap.targets.ground)),
    ObservableSpec("p_att_plus", "吸引子态(+)概率",
                   lambda snap: probability(snap.rho_q, snap.targets.attractor_plus)),
    ObservableSpec("p_att_minus", "吸引子态(-)概率",
                   lambda snap: probability(snap.rho_q, snap.targets.attractor_minus)),
    ObservableSpec("p_init", "回到初态的概率",
                   lambda snap: probability(snap.rho_q, snap.targets.initial)),
    ObservableSpec("tangle", "两量子比特 tangle τ", lambda snap: snap.pair.tangle, (2,)),
    ObservableSpec("concurrence", "两量子比特 concurrence ζ", lambda snap: snap.pair.concurrence, (2,)),
    ObservableSpec("raw_tangle", "λ1-λ2-λ3-λ4（截断前）", lambda snap: snap.pair.raw, (2,)),
    ObservableSpec("pairwise_tangle_ab", "对第3个量子比特求迹后的 tangle", _pairwise("ab"), (3,)),
    ObservableSpec("pairwise_tangle_ac", "对第2个量子比特求迹后的 tangle", _pairwise("ac"), (3,)),
    ObservableSpec("pairwise_tangle_bc", "对第1个量子比特求迹后的 tangle", _pairwise("bc"), (3,)),
    ObservableSpec("pairwise_tangle_max", "三对 tangle 的最大值",
                   lambda snap: max(snap.pairwise.values()), (3,)),
    ObservableSpec("mean_photon", "平均光子数 ⟨a†a⟩", lambda snap: mean_photon_number(snap.state)),
    ObservableSpec("excitation", "激发数期望 ⟨Λ⟩", lambda snap: excitation_expectation(snap.state)),
]}


def resolve_observables(names: Sequence[str], n_qubits: int) -> List[ObservableSpec]:
    """
    检查并解析可观测量名称

    Raises:
        ConfigurationError: 名称未知或对当前 N_q 无效
    """
    resolved = []
    for name in names:
        if name not in OBSERVABLES:
            raise ConfigurationError("observables", f"未知可观测量 '{name}'，可用: {', '.join(OBSERVABLES)}")
        spec = OBSERVABLES[name]
        if not spec.supports(n_qubits):
            raise ConfigurationError("observables", f"'{name}' 只适用于 N_q ∈ {spec.qubit_counts}，当前 N_q={n_qubits}")
        resolved.append(spec)
    return resolved


# ==================== 初态 ====================

def _parse_amplitudes(text: str) -> np.ndarray:
    items = split_list(text)
    if not items:
        raise InvalidStateError("振幅列表为空")
    try:
        return np.array([parse_complex(item) for item in items], dtype=complex)
    except ValueError as e:
        raise InvalidStateError(f"无法解析振幅 '{text}': {e}")


def build_initial_state(config: ExperimentConfig) -> AnyQubitState:
    """
    由初态描述构造量子比特态

    支持 label:<e/g串>、amplitudes:<乘积基振幅>、dicke:<m=N/2..-N/2 振幅> 与 basin。

    Raises:
        InvalidStateError: 描述无效、未归一化或量子比特数不符
    """
    descriptor = config.initial.strip()
    kind, _, body = descriptor.partition(":")
    kind = kind.strip().lower()

    if kind == "label":
        state = QubitState.from_labels(body)
    elif kind == "amplitudes":
        amplitudes = _parse_amplitudes(body)
        state = QubitState.normalized(amplitudes) if config.normalize_initial else QubitState(amplitudes)
    elif kind == "dicke":
        amplitudes = _parse_amplitudes(body)
        state = DickeState.normalized(amplitudes) if config.normalize_initial else DickeState(amplitudes)
    elif kind == "basin":
        state = basin_state_dicke(BasinSpec(config.n_qubits, config.basin_a, config.theta))
    else:
        raise InvalidStateError(f"无法识别的初态描述 '{config.initial}'")

    if state.n_qubits != config.n_qubits:
        raise InvalidStateError(f"初态含 {state.n_qubits} 个量子比特，但 n_qubits = {config.n_qubits}")
    return state


# ==================== 引擎 ====================

class ExactEngine:
    """分块对角化的精确演化"""

    name = "exact"

    def __init__(self, model: ModelConfig, qubits: AnyQubitState, space: str):
        self.model = model
        if isinstance(qubits, DickeState):
            self.basis = PRODUCT_BASIS if space == PRODUCT_BASIS else DICKE_BASIS
        else:
            self.basis = choose_basis(qubits, space)
        self.qubits = prepare_qubits(qubits, self.basis)
        self.propagator = build_blocks(model, self.basis)
        self.initial = embed_product(self.qubits, model.field, model.n_max)
        self.assembly_defect: Optional[float] = None

    def iter_states(self, times: np.ndarray) -> Iterator[Tuple[float, JointState]]:
        return iter_evolved(self.propagator, self.initial, times)

    def state_at(self, t: float) -> JointState:
        return evolve(self.propagator, self.initial, t)


class LargeNEngine:
    """大n̄近似：把各分量叠加成联合态"""

    name = "largen"

    def __init__(self, model: ModelConfig, qubits: AnyQubitState, space: str):
        self.model = model
        n_qubits = model.n_qubits
        if n_qubits <= 2:
            self.basis = PRODUCT_BASIS
            self.qubits = to_product_basis(qubits) if isinstance(qubits, DickeState) else qubits
        else:
            if not is_in_basin(qubits, model.theta):
                raise InvalidStateError(
                    f"N_q={n_qubits} 的大n̄引擎只适用于吸引盆内的初态 "
                    f"(盆外振幅 {basin_defect(qubits, model.theta):.3e})"
                )
            use_product = space == PRODUCT_BASIS
            if isinstance(qubits, DickeState):
                self.qubits = to_product_basis(qubits) if use_product else qubits
            else:
                self.qubits = qubits if use_product else to_dicke_basis(qubits)
            self.basis = self.qubits.basis
        self.assembly_defect = 0.0
        self.initial = self._assemble(0.0)

    def _components(self, t: float):
        field_state = self.model.field
        coupling = self.model.coupling
        amplitudes = self.qubits.amplitudes
        if self.model.n_qubits == 1:
            return one_qubit_components(amplitudes[0], amplitudes[1], field_state, t, coupling)
        if self.model.n_qubits == 2:
            return two_qubit_components(*amplitudes, field_state, t, coupling)
        return nq_extreme_components(self.qubits, field_state, t, coupling)

    def _assemble(self, t: float) -> JointState:
        state, defect = assemble(self._components(t), self.model.n_max)
        self.assembly_defect = max(self.assembly_defect, defect)
        return state

    def iter_states(self, times: np.ndarray) -> Iterator[Tuple[float, JointState]]:
        for t in times:
            yield float(t), self._assemble(float(t))

    def state_at(self, t: float) -> JointState:
        return self._assemble(float(t))


def create_engine(config: ExperimentConfig, model: ModelConfig, qubits: AnyQubitState):
    """按 config.engine 创建演化引擎"""
    if config.engine == ExactEngine.name:
        return ExactEngine(model, qubits, config.space)
    if config.engine == LargeNEngine.name:
        return LargeNEngine(model, qubits, config.space)
    raise ConfigurationError("engine", f"未知引擎 '{config.engine}'")


# ==================== 结果 ====================

@dataclass
class RunDiagnostics:
    """守恒量诊断"""
    max_norm_drift: float = 0.0                      # max |‖ψ‖ - 1|
    max_excitation_drift: Optional[float] = None     # max |⟨Λ⟩(t) - ⟨Λ⟩(0)|（仅精确引擎）
    max_entropy_gap: float = 0.0                     # max |S_q - S_f|（按步长抽样）
    max_leakage: float = 0.0                         # 最高Fock能级最大占据
    assembly_defect: Optional[float] = None          # 大n̄组装的最大归一化缺陷
    samples: int = 0                                 # S_q = S_f 检查次数

    def to_lines(self) -> List[str]:
        def show(value):
            return "none" if value is None else format_number(value)
        return [
            f"max_norm_drift = {show(self.max_norm_drift)}",
            f"max_excitation_drift = {show(self.max_excitation_drift)}",
            f"max_entropy_gap = {show(self.max_entropy_gap)}",
            f"entropy_gap_samples = {self.samples}",
            f"max_fock_leakage = {show(self.max_leakage)}",
            f"assembly_defect = {show(self.assembly_defect)}",
        ]


@dataclass
class RunResult:
    """一次实验的结果"""
    config: ExperimentConfig
    output_dir: Path
    n_max: int                                   # 截断能级
    revival_time: float                          # t_r
    collapse_time: float                         # t_c
    basis: str                                   # 演化所用的基
    in_basin: bool                               # 初态是否在吸引盆内
    basin_defect: float                          # 盆外振幅
    diagnostics: RunDiagnostics
    columns: Dict[str, np.ndarray] = field(default_factory=dict, repr=False)
    extra_meta: List[str] = field(default_factory=list)
    files: List[Path] = field(default_factory=list)


# ==================== 运行器 ====================

class ExperimentRunner:
    """实验运行器"""

    def __init__(self, config: ExperimentConfig):
        """
        初始化运行器

        Args:
            config: 实验参数（已合并预设、配置文件与命令行覆盖）
        """
        config.validate()
        self.config = config
        self.model = ModelConfig(
            n_qubits=config.n_qubits,
            nbar=config.nbar,
            theta=config.theta,
            coupling=config.coupling,
            fock_cutoff=config.fock_cutoff,
        )
        if self.model.nbar <= 0:
            raise ConfigurationError("nbar", "时间以 t_r 为单位，需要 n̄ > 0")
        self.qubits = build_initial_state(config)
        self.observables = resolve_observables(config.observables, config.n_qubits)
        self.output_dir = Path(config.output_dir)
        logger.info(f"实验运行器初始化完成: {config.preset} (N_q={config.n_qubits}, n̄={config.nbar}, "
                    f"n_max={self.model.n_max}, engine={config.engine})")

    def run(self) -> RunResult:
        """
        运行实验并写出全部文件

        Returns:
            RunResult
        """
        timer = Timer()
        timer.start()
        with LogContext(logger, logging.INFO, f"运行实验 {self.config.preset}"):
            defect = basin_defect(self.qubits, self.config.theta)
            result = RunResult(
                config=self.config,
                output_dir=self.output_dir,
                n_max=self.model.n_max,
                revival_time=self.model.revival_time,
                collapse_time=self.model.collapse_time,
                basis=self.qubits.basis,
                in_basin=is_in_basin(self.qubits, self.config.theta),
                basin_defect=defect,
                diagnostics=RunDiagnostics(),
            )
            self.output_dir.mkdir(parents=True, exist_ok=True)

            if self.config.sweep == "basin_tangle":
                self._run_basin_sweep(result, three_qubit=False)
            elif self.config.sweep == "basin_three_tangle":
                self._run_basin_sweep(result, three_qubit=True)
            elif self.config.sweep == "revival_scan":
                self._run_revival_scan(result)
            else:
                self._run_series(result)

            result.files.append(self._write_meta(result))
        timer.stop()
        logger.info(f"实验 {self.config.preset} 输出 {len(result.files)} 个文件, 耗时 {timer.get_elapsed():.2f}秒")
        return result

    # ---------- 时间演化 ----------

    def _run_series(self, result: RunResult):
        config = self.config
        engine = create_engine(config, self.model, self.qubits)
        result.basis = engine.basis
        targets = ObservableTargets(config.n_qubits, config.theta, engine.qubits)

        grid = TimeGrid(config.t_start, config.t_end, config.points)
        fractions = grid.fractions()
        times = grid.times(self.model.revival_time)
        columns = {spec.name: np.empty(fractions.size) for spec in self.observables}
        diagnostics = result.diagnostics
        reference_excitation = excitation_expectation(engine.initial) if engine.name == ExactEngine.name else None

        logger.info(f"时间演化: {fractions.size} 个时间点, 基 {engine.basis}, 可观测量 {config.observables}")
        for index, (t, state) in enumerate(engine.iter_states(times)):
            snapshot = Snapshot(state, targets)
            for spec in self.observables:
                columns[spec.name][index] = spec.compute(snapshot)
            self._check_conservation(index, snapshot, reference_excitation, diagnostics)

        diagnostics.assembly_defect = engine.assembly_defect
        self._warn_on_drift(diagnostics)
        result.columns = columns
        result.files.append(self._write_series(fractions, columns))

        for fraction in config.q_times:
            result.files.append(self._write_field_q(engine, fraction, result))
        for fraction in config.spin_q_times:
            result.files.append(self._write_spin_q(engine, fraction, result))

    def _check_conservation(
        self,
        index: int,
        snapshot: Snapshot,
        reference_excitation: Optional[float],
        diagnostics: RunDiagnostics
    ):
        state = snapshot.state
        diagnostics.max_norm_drift = max(diagnostics.max_norm_drift, abs(state.norm - 1.0))
        diagnostics.max_leakage = max(diagnostics.max_leakage, state.fock_leakage)
        if reference_excitation is not None:
            drift = abs(excitation_expectation(state) - reference_excitation)
            diagnostics.max_excitation_drift = max(diagnostics.max_excitation_drift or 0.0, drift)
        if index % self.config.conservation_stride == 0:
            n_qubits = state.n_qubits
            gap = abs(entropy(snapshot.rho_q, n_qubits) - entropy(snapshot.rho_f, n_qubits))
            diagnostics.max_entropy_gap = max(diagnostics.max_entropy_gap, gap)
            diagnostics.samples += 1

    def _warn_on_drift(self, diagnostics: RunDiagnostics):
        if diagnostics.max_norm_drift > NORM_DRIFT_LIMIT:
            logger.warning(f"范数漂移 {diagnostics.max_norm_drift:.3e} 超过 {NORM_DRIFT_LIMIT:.0e}")
        if (diagnostics.max_excitation_drift or 0.0) > EXCITATION_DRIFT_LIMIT:
            logger.warning(f"激发数漂移 {diagnostics.max_excitation_drift:.3e} 超过 {EXCITATION_DRIFT_LIMIT:.0e}")
        if diagnostics.max_entropy_gap > ENTROPY_GAP_LIMIT:
            logger.warning(f"|S_q - S_f| = {diagnostics.max_entropy_gap:.3e} 超过 {ENTROPY_GAP_LIMIT:.0e}")

    def _write_field_q(self, engine, fraction: float, result: RunResult) -> Path:
        state = engine.state_at(fraction * self.model.revival_time)
        spec = PhaseGridSpec.for_field(self.model.nbar, self.config.q_points, self.config.q_margin)
        grid = q_function(partial_trace_qubits(state), spec)
        tag = f"field_t{format_number(fraction)}"
        result.extra_meta.append(f"q_integral_{tag} = {format_number(grid.riemann_sum())}")
        logger.debug(f"光场Q函数 t={fraction}t_r: 峰值位置 {grid.peak()[:2]}")
        return self._write_grid(tag, grid)

    def _write_spin_q(self, engine, fraction: float, result: RunResult) -> Path:
        state = engine.state_at(fraction * self.model.revival_time)
        spec = PhaseGridSpec.for_spin(self.config.spin_q_extent, self.config.spin_q_points)
        grid = spin_q_function(partial_trace_field(state), spec, self.model.n_qubits)
        tag = f"spin_t{format_number(fraction)}"
        normalization = spin_q_normalization(grid, self.model.n_qubits)
        result.extra_meta.append(f"q_integral_{tag} = {format_number(normalization)}")
        logger.debug(f"自旋Q函数 t={fraction}t_r: 峰值位置 {grid.peak()[:2]}")
        return self._write_grid(tag, grid)

    # ---------- 吸引盆扫描 ----------

    def _basin_samples(self) -> List[complex]:
        """实轴上 sweep_points 个点，再加虚轴上 sweep_points 个点"""
        limit = BasinSpec(self.config.n_qubits).max_amplitude
        points = self.config.sweep_points
        real = np.linspace(-limit, limit, points)
        imaginary = np.linspace(0.0, limit, points)
        return [complex(a) for a in real] + [complex(0.0, b) for b in imaginary]

    def _run_basin_sweep(self, result: RunResult, three_qubit: bool):
        expected = 3 if three_qubit else 2
        if self.config.n_qubits != expected:
            raise ConfigurationError("n_qubits", f"扫描 {self.config.sweep} 需要 N_q={expected}")

        if three_qubit:
            header = ["a_re", "a_im", "three_tangle", "pairwise_tangle_ab"]
        else:
            header = ["a_re", "a_im", "tangle", "concurrence"]
        rows = []
        for a in self._basin_samples():
            qubits = basin_state(BasinSpec(self.config.n_qubits, a, self.config.theta))
            if three_qubit:
                rho = DensityMatrix.from_pure(qubits)
                values = [three_tangle(qubits), pairwise_tangle(rho, 0, 1).tangle]
            else:
                breakdown = tangle(DensityMatrix.from_pure(qubits))
                values = [breakdown.tangle, breakdown.concurrence]
            rows.append([a.real, a.imag] + values)

        logger.info(f"吸引盆扫描 {self.config.sweep}: {len(rows)} 个样本")
        result.files.append(self._write_table(SWEEP_FILE, header, rows))

    # ---------- 复苏时间扫描 ----------

    def _run_revival_scan(self, result: RunResult):
        config = self.config
        grid = TimeGrid(config.t_start, config.t_end, config.points)
        fractions = grid.fractions()
        k_max = int(math.ceil(config.t_end))
        rows = []

        for n_qubits in config.scan_qubits:
            model = ModelConfig(n_qubits, config.nbar, config.theta, config.coupling, config.fock_cutoff)
            window = model.collapse_time / model.revival_time
            uniform = uniform_component_state(n_qubits, config.theta)
            basin = basin_state_dicke(BasinSpec(n_qubits, 0j, config.theta))

            with LogContext(logger, logging.INFO, f"复苏扫描 N_q={n_qubits}"):
                prop = build_blocks(model, DICKE_BASIS)
                times = fractions * model.revival_time
                purity = np.array([
                    partial_trace_field(state).purity
                    for _, state in iter_evolved(prop, embed_product(uniform, model.field, model.n_max), times)
                ])
                s_q = np.array([
                    entropy(partial_trace_field(state), n_qubits)
                    for _, state in iter_evolved(prop, embed_product(basin, model.field, model.n_max), times)
                ])

            detected_revivals = detect_revivals(
                fractions, purity, window,
                threshold=REVIVAL_SCAN_THRESHOLD, min_prominence=REVIVAL_SCAN_PROMINENCE, relative=True,
            )
            detected_minima = detect_minima(fractions, s_q, window)
            for kind, predicted, detected in (
                ("revival", revival_times(n_qubits, k_max), detected_revivals),
                ("attractor", attractor_times(n_qubits, k_max), detected_minima),
            ):
                for target in predicted:
                    if not config.t_start < target < config.t_end:
                        continue
                    match = _nearest(detected, target, window)
                    rows.append([n_qubits, kind, target, match, None if match is None else match - target])
            logger.info(f"N_q={n_qubits}: 检测到复苏 {detected_revivals}, 熵谷 {detected_minima}")

        header = ["n_qubits", "kind", "predicted_t_over_tr", "detected_t_over_tr", "deviation"]
        result.files.append(self._write_table(REVIVALS_FILE, header, rows))

    # ---------- 输出 ----------

    def _write_table(self, name: str, header: Sequence[str], rows: Sequence[Sequence]) -> Path:
        path = self.output_dir / name
        with path.open("w", encoding="utf-8", newline="") as handle:
            writer = csv.writer(handle, lineterminator="\n")
            writer.writerow(header)
            for row in rows:
                writer.writerow([_format_cell(value) for value in row])
        logger.debug(f"写出 {path} ({len(rows)} 行)")
        return path

    def _write_series(self, fractions: np.ndarray, columns: Dict[str, np.ndarray]) -> Path:
        header = ["t_over_tr"] + list(columns)
        rows = [[fraction] + [columns[name][i] for name in columns] for i, fraction in enumerate(fractions)]
        return self._write_table(SERIES_FILE, header, rows)

    def _write_grid(self, tag: str, grid) -> Path:
        return self._write_table(f"qgrid_{tag}.csv", ["re", "im", "value"], list(grid.rows()))

    def _write_meta(self, result: RunResult) -> Path:
        lines = ["# 配置"] + self.config.to_lines() + [
            "# 派生量",
            f"n_max = {result.n_max}",
            f"revival_time = {format_number(result.revival_time)}",
            f"collapse_time = {format_number(result.collapse_time)}",
            f"basis = {result.basis}",
            f"in_basin = {'true' if result.in_basin else 'false'}",
            f"basin_defect = {format_number(result.basin_defect)}",
            "# 诊断",
        ] + result.diagnostics.to_lines() + result.extra_meta
        path = self.output_dir / META_FILE
        path.write_text("\n".join(lines) + "\n", encoding="utf-8")
        return path

    def print_result(self, result: RunResult):
        """打印运行摘要"""
        print("\n" + "=" * 60)
        print(f"实验: {result.config.preset}  {result.config.description}")
        print("=" * 60)
        print(f"N_q = {result.config.n_qubits}, n̄ = {result.config.nbar}, n_max = {result.n_max}, 基 = {result.basis}")
        print(f"t_r = {result.revival_time:.6f}, t_c = {result.collapse_time:.6f}")
        print(f"吸引盆内: {'是' if result.in_basin else '否'} (盆外振幅 {result.basin_defect:.3e})")
        for name, values in result.columns.items():
            print(f"  {name:<20} 最小 {values.min():.6f}  最大 {values.max():.6f}")
        print("输出文件:")
        for path in result.files:
            print(f"  {path}")
        print("=" * 60 + "\n")


def _nearest(detected: Sequence[float], target: float, window: float) -> Optional[float]:
    """window 范围内离 target 最近的检测值"""
    candidates = [value for value in detected if abs(value - target) <= window]
    if not candidates:
        return None
    return min(candidates, key=lambda value: abs(value - target))


def _format_cell(value) -> str:
    if value is None:
        return ""
    if isinstance(value, str):
        return value
    if isinstance(value, (int, np.integer)) and not isinstance(value, bool):
        return str(int(value))
    if isinstance(value, complex):
        return format_complex(value)
    return format_number(value)


def run(config: ExperimentConfig) -> List[Path]:
    """
    运行一次实验

    Args:
        config: 实验参数

    Returns:
        写出的文件路径（series/qgrid/sweep/revivals 在前，meta 最后）
    """
    try:
        return ExperimentRunner(config).run().files
    except SimulationError as e:
        logger.error(f"实验 {config.preset} 失败: {e}")
        raise


if __name__ == "__main__":
    from presets import get_preset

    demo = get_preset("fig1")
    demo.points = 401
    demo.output_dir = "output/demo_fig1"
    runner = ExperimentRunner(demo)
    runner.print_result(runner.run())
