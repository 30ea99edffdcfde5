"""
TWPA Field Model Schemas - 数据模型定义.

包含:
- GapModelKind / FieldAxis: 能隙模型与磁场方向
- FilmParams / CurrentProfile / JunctionGeometry / CircuitParams: 器件参数
- DeviceModel: 所有模型计算的唯一参数来源
- FieldPoint: 磁场方向与大小
- Spectrum / BandStructure: 频谱与能带
- FitResult / FgDataset: 拟合结果与带隙数据
- GainMetrics / PumpSetting: 增益指标与泵浦设置

接口单位: mT, GHz, nm, µm, pH, fF, K。
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from enum import Enum
from typing import Any, Dict, List, Optional

import numpy as np

from twpa_field.errors import InvalidParameterError


class GapModelKind(Enum):
    """超导能隙抑制模型."""
    AG_NUMERIC = "ag-numeric"  # AG 方程数值解
    AG_INTERP = "ag-interp"  # AG 插值公式 (默认)
    GL = "gl"  # GL 形式近似

    @classmethod
    def from_name(cls, name: str) -> "GapModelKind":
        """按 CLI 名称解析."""
        try:
            return cls(name.lower())
        except ValueError:
            valid = ", ".join(k.value for k in cls)
            raise InvalidParameterError(f"Unknown gap model '{name}'. Valid: {valid}")


class FieldAxis(Enum):
    """磁场方向."""
    PAR1 = "par1"  # 面内，垂直于未调制的结宽 w
    PAR2 = "par2"  # 面内，垂直于被调制的结高 h
    PERP = "perp"  # 垂直于薄膜

    @classmethod
    def from_name(cls, name: str) -> "FieldAxis":
        try:
            return cls(name.lower())
        except ValueError:
            valid = ", ".join(a.value for a in cls)
            raise InvalidParameterError(f"Unknown field axis '{name}'. Valid: {valid}")


class SpectrumKind(Enum):
    MEASURED = "measured"
    SIMULATED = "simulated"


# 低于噪声底的显式标记值
BELOW_NOISE_FLOOR = -math.inf


@dataclass(frozen=True)
class FieldPoint:
    """磁场点 (带符号，所有模值表达式使用 |B|)."""
    axis: FieldAxis
    b_mt: float = 0.0

    @property
    def magnitude_mt(self) -> float:
        return abs(self.b_mt)

    def to_dict(self) -> Dict[str, Any]:
        return {"axis": self.axis.value, "b_mt": self.b_mt}


@dataclass(frozen=True)
class FilmParams:
    """超导薄膜参数."""
    t_nm: float  # 膜厚
    ell_nm: float  # 平均自由程
    d_m2s: float  # 扩散系数
    delta0_uev: float  # 零场能隙

    def __post_init__(self) -> None:
        for name in ("t_nm", "ell_nm", "d_m2s", "delta0_uev"):
            if not getattr(self, name) > 0:
                raise InvalidParameterError(f"FilmParams.{name} must be > 0, got {getattr(self, name)}")


@dataclass(frozen=True)
class CurrentProfile:
    """结内电流密度分布参数 χ (χ=0 为均匀电流)."""
    chi: float = 0.0

    def __post_init__(self) -> None:
        if not self.chi >= 0:
            raise InvalidParameterError(f"chi must be >= 0, got {self.chi}")


@dataclass(frozen=True)
class JunctionGeometry:
    """约瑟夫森结几何与调制参数."""
    w_um: float  # 结宽 (未调制)
    h_um: float  # 平均结高 (被调制)
    eta: float  # 面积调制幅度
    n_p: int  # 调制周期 (结数)
    n_j: int  # 结总数
    l_nm: float  # 磁通穿透厚度

    def __post_init__(self) -> None:
        if not (0.0 <= self.eta < 1.0):
            raise InvalidParameterError(f"eta must be in [0, 1), got {self.eta}")
        if self.n_p < 2:
            raise InvalidParameterError(f"n_p must be >= 2, got {self.n_p}")
        if self.n_j < self.n_p:
            raise InvalidParameterError(f"n_j ({self.n_j}) must be >= n_p ({self.n_p})")
        for name in ("w_um", "h_um", "l_nm"):
            if not getattr(self, name) > 0:
                raise InvalidParameterError(f"JunctionGeometry.{name} must be > 0")

    @property
    def g(self) -> float:
        """调制波矢 G = 2π/N_p (每单元弧度)."""
        return 2.0 * math.pi / self.n_p


@dataclass(frozen=True)
class CircuitParams:
    """平均电路参数."""
    lj_ph: float  # 平均约瑟夫森电感
    cj_ff: float  # 平均结电容
    cg_ff: float  # 平均对地电容

    def __post_init__(self) -> None:
        for name in ("lj_ph", "cj_ff", "cg_ff"):
            if not getattr(self, name) > 0:
                raise InvalidParameterError(f"CircuitParams.{name} must be > 0")


@dataclass(frozen=True)
class DeviceModel:
    """TWPA 器件模型.

    可选的拟合覆盖值 (fp0_ghz, b_phi1_mt, b_phi2_mt) 设置后替代闭式/几何值；
    chi_par2 为 ∥2 方向的 χ 覆盖，None 表示沿用 chi。
    """
    geometry: JunctionGeometry
    circuit: CircuitParams
    chi: CurrentProfile
    bc_par_mt: float
    bc_perp_mt: float
    tc_k: float
    name: str = "device"
    fp0_ghz: Optional[float] = None
    b_phi1_mt: Optional[float] = None
    b_phi2_mt: Optional[float] = None
    chi_par2: Optional[float] = None

    def __post_init__(self) -> None:
        if not self.bc_par_mt > 0 or not self.bc_perp_mt > 0:
            raise InvalidParameterError("critical fields must be > 0")
        if not self.bc_perp_mt < self.bc_par_mt:
            raise InvalidParameterError(
                f"bc_perp_mt ({self.bc_perp_mt}) must be < bc_par_mt ({self.bc_par_mt})"
            )
        if not self.tc_k > 0:
            raise InvalidParameterError(f"tc_k must be > 0, got {self.tc_k}")
        for name in ("fp0_ghz", "b_phi1_mt", "b_phi2_mt"):
            value = getattr(self, name)
            if value is not None and not value > 0:
                raise InvalidParameterError(f"{name} must be > 0 when set, got {value}")
        if self.chi_par2 is not None and not self.chi_par2 >= 0:
            raise InvalidParameterError(f"chi_par2 must be >= 0, got {self.chi_par2}")

    def chi_for(self, axis: FieldAxis) -> float:
        """该方向使用的 χ."""
        if axis is FieldAxis.PAR2 and self.chi_par2 is not None:
            return self.chi_par2
        return self.chi.chi

    def with_overrides(self, **changes: Any) -> "DeviceModel":
        """返回修改后的副本 (chi 可直接传 float)."""
        if "chi" in changes and not isinstance(changes["chi"], CurrentProfile):
            changes["chi"] = CurrentProfile(float(changes["chi"]))
        return replace(self, **changes)


@dataclass
class Spectrum:
    """频谱: 频率网格 (GHz, 严格递增) + dB 值 + 元数据."""
    freqs_ghz: np.ndarray
    values_db: np.ndarray
    field: Optional[FieldPoint] = None
    device_id: str = ""
    kind: SpectrumKind = SpectrumKind.MEASURED
    quantity: str = "s21"

    def __post_init__(self) -> None:
        self.freqs_ghz = np.asarray(self.freqs_ghz, dtype=float)
        self.values_db = np.asarray(self.values_db, dtype=float)
        if self.freqs_ghz.ndim != 1 or self.freqs_ghz.shape != self.values_db.shape:
            raise InvalidParameterError("freqs and values must be 1-D arrays of equal length")
        if self.freqs_ghz.size >= 2 and not np.all(np.diff(self.freqs_ghz) > 0):
            raise InvalidParameterError("spectrum frequencies must be strictly increasing")
        bad = ~np.isfinite(self.values_db) & (self.values_db != BELOW_NOISE_FLOOR)
        if np.any(bad):
            raise InvalidParameterError("spectrum values must be finite or the below-noise-floor sentinel")

    @property
    def span_ghz(self) -> float:
        return float(self.freqs_ghz[-1] - self.freqs_ghz[0])

    def same_grid(self, other: "Spectrum") -> bool:
        return self.freqs_ghz.shape == other.freqs_ghz.shape and bool(
            np.array_equal(self.freqs_ghz, other.freqs_ghz)
        )

    def with_values(self, values_db: np.ndarray, **changes: Any) -> "Spectrum":
        """同网格的新频谱."""
        return replace(self, values_db=np.asarray(values_db, dtype=float), **changes)


@dataclass
class BandStructure:
    """色散能带: k ∈ [0, G/2] (每单元弧度) 与各支 ω(k) (GHz)."""
    k: np.ndarray
    branches: List[np.ndarray] = field(default_factory=list)

    @property
    def edge_frequencies(self) -> List[float]:
        """k = G/2 处各支频率."""
        return [float(b[-1]) for b in self.branches]


@dataclass
class FitResult:
    """最小二乘拟合结果."""
    params: Dict[str, float]
    residual_norm: float  # 残差平方和
    iterations: int
    converged: bool
    message: str = ""
    history: List[float] = field(default_factory=list)  # 每次迭代的最优目标值

    def to_dict(self) -> Dict[str, Any]:
        return {
            "params": dict(self.params),
            "residual_norm": self.residual_norm,
            "iterations": self.iterations,
            "converged": self.converged,
        }


@dataclass
class FgDataset:
    """带隙频率数据集: (B mT, f_g GHz) 行，带方向与扫场标签."""
    fields_mt: np.ndarray
    fg_ghz: np.ndarray
    axis: FieldAxis = FieldAxis.PAR1
    sweep: Optional[str] = None  # up / down

    def __post_init__(self) -> None:
        self.fields_mt = np.asarray(self.fields_mt, dtype=float)
        self.fg_ghz = np.asarray(self.fg_ghz, dtype=float)
        if self.fields_mt.shape != self.fg_ghz.shape or self.fields_mt.ndim != 1:
            raise InvalidParameterError("fields and fg must be 1-D arrays of equal length")
        if self.fields_mt.size >= 2:
            steps = np.diff(self.fields_mt)
            if not (np.all(steps > 0) or np.all(steps < 0)):
                raise InvalidParameterError("fields must be strictly monotone within a sweep")
        if np.any(~(self.fg_ghz > 0)):
            raise InvalidParameterError("fg values must be > 0")
        if self.sweep is not None and self.sweep not in ("up", "down"):
            raise InvalidParameterError(f"sweep must be 'up' or 'down', got {self.sweep!r}")

    def __len__(self) -> int:
        return int(self.fields_mt.size)


@dataclass
class GainMetrics:
    """增益指标."""
    max_smooth_gain_db: float
    f_max_ghz: float
    bw_3db_ghz: float
    gain_range_db: float  # 3 dB 窗口内原始增益的 max-min
    f_low_ghz: float = 0.0  # 3 dB 窗口下沿
    f_high_ghz: float = 0.0  # 3 dB 窗口上沿

    def to_dict(self) -> Dict[str, Any]:
        return {
            "max_smooth_gain_db": self.max_smooth_gain_db,
            "f_max_ghz": self.f_max_ghz,
            "bw_3db_ghz": self.bw_3db_ghz,
            "gain_range_db": self.gain_range_db,
        }


@dataclass(frozen=True)
class PumpSetting:
    """泵浦设置."""
    f_pump_ghz: float
    p_pump_dbm: float

    def to_dict(self) -> Dict[str, Any]:
        return {"f_pump_ghz": self.f_pump_ghz, "p_pump_dbm": self.p_pump_dbm}
