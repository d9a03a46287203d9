#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
参数配置管理
实验运行参数的集中定义，以及扁平 key = value 配置文件的解析
"""

from dataclasses import asdict, dataclass, field, fields, replace
from pathlib import Path
from typing import Any, Callable, Dict, List, Mapping, Optional

from exceptions import ConfigurationError
from utils import format_complex, format_number, parse_bool, parse_complex, split_list


ENGINES = ("exact", "largen")
SPACES = ("auto", "product", "dicke")
SWEEPS = ("", "basin_tangle", "basin_three_tangle", "revival_scan")


@dataclass
class ExperimentConfig:
    """实验参数（所有键都可由配置文件或 --set 覆盖）"""
    preset: str = "custom"                   # 预设名
    description: str = ""                    # 一行说明
    n_qubits: int = 1                        # 量子比特数 N_q
    nbar: float = 50.0                       # 平均光子数 n̄
    theta: float = 0.0                       # 光场相位 θ
    coupling: float = 1.0                    # 耦合常数 λ
    fock_cutoff: Optional[int] = None        # 截断能级（none 使用默认值）
    initial: str = "label:g"                 # 初态描述
    basin_a: complex = 0j                    # 吸引盆态参数 a（initial = basin 时使用）
    normalize_initial: bool = False          # 是否对给定振幅重新归一化
    engine: str = "exact"                    # exact / largen
    space: str = "auto"                      # auto / product / dicke
    t_start: float = 0.0                     # 起始时间（t_r 单位）
    t_end: float = 2.0                       # 终止时间（t_r 单位）
    points: int = 4001                       # 时间点数
    observables: List[str] = field(default_factory=lambda: ["entropy", "p_g"])
    q_times: List[float] = field(default_factory=list)        # 光场Q快照时间（t_r 单位）
    spin_q_times: List[float] = field(default_factory=list)   # 自旋Q快照时间（t_r 单位）
    q_points: int = 201                      # 光场Q网格每边点数
    q_margin: float = 4.0                    # 光场Q网格 √n̄ 之外的边距
    spin_q_points: int = 201                 # 自旋Q网格每边点数
    spin_q_extent: float = 3.0               # 自旋Q网格半宽
    conservation_stride: int = 20            # 每隔多少个时间点检查 S_q = S_f
    sweep: str = ""                          # 扫描类型（空表示时间演化）
    sweep_points: int = 401                  # 扫描点数
    scan_qubits: List[int] = field(default_factory=lambda: [1, 2, 3, 4, 5])
    output_dir: str = "output"               # 输出目录

    def to_dict(self) -> Dict[str, Any]:
        """转换为字典"""
        return asdict(self)

    @classmethod
    def from_dict(cls, data: Mapping[str, Any]) -> "ExperimentConfig":
        """从字典创建（未知键报错）"""
        known = {f.name for f in fields(cls)}
        unknown = set(data) - known
        if unknown:
            raise ConfigurationError(", ".join(sorted(unknown)), "未知配置项")
        return cls(**dict(data))

    def with_overrides(self, overrides: Mapping[str, str]) -> "ExperimentConfig":
        """
        用文本形式的键值覆盖参数

        Args:
            overrides: 键 → 文本值

        Returns:
            新的配置对象
        """
        parsed = {}
        for key, text in overrides.items():
            key = key.strip()
            if key not in _PARSERS:
                raise ConfigurationError(key, f"未知配置项，可用: {', '.join(_PARSERS)}")
            try:
                parsed[key] = _PARSERS[key](text.strip())
            except ValueError as e:
                raise ConfigurationError(key, f"无法解析 '{text}': {e}")
        return replace(self, **parsed)

    def validate(self):
        """检查取值范围"""
        if self.engine not in ENGINES:
            raise ConfigurationError("engine", f"只支持 {ENGINES}")
        if self.space not in SPACES:
            raise ConfigurationError("space", f"只支持 {SPACES}")
        if self.sweep not in SWEEPS:
            raise ConfigurationError("sweep", f"只支持 {SWEEPS}")
        if self.points < 2:
            raise ConfigurationError("points", "时间网格至少需要2个点")
        if not self.t_end > self.t_start:
            raise ConfigurationError("t_end", "终止时间必须大于起始时间")
        if self.conservation_stride < 1:
            raise ConfigurationError("conservation_stride", "必须为正整数")
        if self.q_points < 2 or self.spin_q_points < 2:
            raise ConfigurationError("q_points", "Q网格每边至少2个点")
        if self.sweep and self.sweep_points < 2:
            raise ConfigurationError("sweep_points", "扫描至少需要2个点")

    def to_lines(self) -> List[str]:
        """按字段顺序输出 key = value 行（可被 parse_config_text 读回）"""
        return [f"{f.name} = {_format_value(getattr(self, f.name))}" for f in fields(self)]


def _optional_int(text: str) -> Optional[int]:
    return None if text.lower() in ("", "none") else int(text)


def _float_list(text: str) -> List[float]:
    return [float(item) for item in split_list(text)]


def _int_list(text: str) -> List[int]:
    return [int(item) for item in split_list(text)]


_PARSERS: Dict[str, Callable[[str], Any]] = {
    "preset": str,
    "description": str,
    "n_qubits": int,
    "nbar": float,
    "theta": float,
    "coupling": float,
    "fock_cutoff": _optional_int,
    "initial": str,
    "basin_a": parse_complex,
    "normalize_initial": parse_bool,
    "engine": str,
    "space": str,
    "t_start": float,
    "t_end": float,
    "points": int,
    "observables": split_list,
    "q_times": _float_list,
    "spin_q_times": _float_list,
    "q_points": int,
    "q_margin": float,
    "spin_q_points": int,
    "spin_q_extent": float,
    "conservation_stride": int,
    "sweep": str,
    "sweep_points": int,
    "scan_qubits": _int_list,
    "output_dir": str,
}


def _format_value(value: Any) -> str:
    if value is None:
        return "none"
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, complex):
        return format_complex(value)
    if isinstance(value, float):
        return format_number(value)
    if isinstance(value, (list, tuple)):
        return ",".join(_format_value(item) for item in value)
    return str(value)


def parse_config_text(text: str) -> Dict[str, str]:
    """
    解析扁平配置文本

    每行 key = value，# 之后为注释，空行忽略，不支持嵌套。

    Args:
        text: 配置文本

    Returns:
        键 → 文本值（后出现的覆盖先出现的）
    """
    values: Dict[str, str] = {}
    for number, line in enumerate(text.splitlines(), start=1):
        content = line.split("#", 1)[0].strip()
        if not content:
            continue
        if "=" not in content:
            raise ConfigurationError(f"第{number}行", f"缺少 '=': {line.strip()}")
        key, value = content.split("=", 1)
        key = key.strip()
        if not key:
            raise ConfigurationError(f"第{number}行", "键为空")
        values[key] = value.strip()
    return values


def load_config_file(path) -> Dict[str, str]:
    """读取 UTF-8 配置文件"""
    path = Path(path)
    if not path.is_file():
        raise ConfigurationError("config", f"配置文件不存在: {path}")
    return parse_config_text(path.read_text(encoding="utf-8"))


def parse_assignments(assignments: Optional[List[str]]) -> Dict[str, str]:
    """解析命令行 --set key=value 列表"""
    values: Dict[str, str] = {}
    for item in assignments or []:
        if "=" not in item:
            raise ConfigurationError(item, "--set 需要 key=value 形式")
        key, value = item.split("=", 1)
        values[key.strip()] = value.strip()
    return values


def get_default_config() -> ExperimentConfig:
    """获取默认配置（每次返回新对象）"""
    return ExperimentConfig()


if __name__ == "__main__":
    config = get_default_config().with_overrides({"n_qubits": "2", "basin_a": "0.5+0.1i"})
    print("\n".join(config.to_lines()))
