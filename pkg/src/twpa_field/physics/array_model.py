"""
TWPA 阵列模型 - Modulated Josephson Junction Array Model.

负责：
1. 周期调制的 L_J / C_J / C_g 阵列
2. 场/温度依赖的等离子体频率
3. 带隙边缘、带隙中心与 ∥2 方向的带隙闭合场
4. 屏蔽长度与阵列阻抗

阵列是周期的，所有逐结量只在一个调制周期 (N_p 个结) 上计算。
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import List, Optional, Union

import numpy as np
from loguru import logger
from scipy.optimize import brentq

from twpa_field.errors import InvalidParameterError
from twpa_field.physics.constants import FF, GHZ, PH
from twpa_field.physics.fraunhofer import (
    beta_factor,
    flux_field,
    fraunhofer_factor,
    fraunhofer_zero,
    expected_bphi2_from_bphi1,
    junction_modulation,
)
from twpa_field.physics.gap import gap_ratio, gap_vs_temperature
from twpa_field.schemas import CircuitParams, DeviceModel, FieldAxis, FieldPoint, GapModelKind

ArrayLike = Union[float, np.ndarray]

DEFAULT_GAP_MODEL = GapModelKind.AG_INTERP

# 括号求根时与 F 零点 (β 极点) 保持的距离
POLE_GUARD = 1e-6

# 低于此值的 |F| 视为 Fraunhofer 零点 (带隙闭合于 0 频率)
FRAUNHOFER_ZERO_TOL = 1e-12


@dataclass
class ModulatedArrays:
    """一个调制周期内的逐元件参数."""
    lj_ph: np.ndarray  # 结 n+½ 的电感
    cj_ff: np.ndarray  # 结 n+½ 的电容
    cg_ff: np.ndarray  # 岛 n 的对地电容


@dataclass
class BandgapEdges:
    """带隙上下边缘 (GHz)."""
    lower_ghz: float
    upper_ghz: float

    @property
    def center_ghz(self) -> float:
        """两边缘的平均，即拟合所用的带隙频率."""
        return 0.5 * (self.lower_ghz + self.upper_ghz)

    @property
    def width_ghz(self) -> float:
        return self.upper_ghz - self.lower_ghz


@dataclass
class ClosingField:
    """∥2 方向第 n 个带隙闭合场 (mT)，exact 为 None 表示该瓣内无根."""
    n: int
    approximate_mt: float
    exact_mt: Optional[float]


@dataclass
class FieldEvaluation:
    """单个场点的模型输出 (扫场一行)."""
    b_mt: float
    fg_minus_ghz: float
    fg_plus_ghz: float
    fp_ghz: float
    z_ohm: float

    @property
    def width_ghz(self) -> float:
        return self.fg_plus_ghz - self.fg_minus_ghz


# =============================================================================
# 阵列与基本参数
# =============================================================================

def modulated_arrays(device: DeviceModel) -> ModulatedArrays:
    """
    逐结/逐岛的调制参数.

    L⁻¹ 与 C_J 按 [1+η cos(G(n+½))] 调制；C_g,n 为相邻两结调制的平均。
    """
    geo = device.geometry
    mod = junction_modulation(geo.n_p)
    # cos(G(n-½)) 为前一个结的调制，周期边界
    island_mod = 0.5 * (mod + np.roll(mod, 1))
    circuit = device.circuit
    return ModulatedArrays(
        lj_ph=circuit.lj_ph / (1.0 + geo.eta * mod),
        cj_ff=circuit.cj_ff * (1.0 + geo.eta * mod),
        cg_ff=circuit.cg_ff * (1.0 + geo.eta * island_mod),
    )


def screening_length(circuit: CircuitParams) -> float:
    """Coulomb 屏蔽长度 ℓ_s = √(C̄_J/C̄_g) (单元数)."""
    return math.sqrt(circuit.cj_ff / circuit.cg_ff)


def zero_field_plasma_ghz(device: DeviceModel) -> float:
    """f_p(0) = 1/(2π√(L̄_J C̄_J))，设置了拟合值时直接返回拟合值."""
    if device.fp0_ghz is not None:
        return device.fp0_ghz
    lc = device.circuit.lj_ph * PH * device.circuit.cj_ff * FF
    return 1.0 / (2.0 * math.pi * math.sqrt(lc)) / GHZ


def effective_bphi(device: DeviceModel, axis: FieldAxis) -> float:
    """B_Φ,1 或 B̄_Φ,2：优先拟合覆盖值，否则由几何计算."""
    if axis is FieldAxis.PAR1 and device.b_phi1_mt is not None:
        return device.b_phi1_mt
    if axis is FieldAxis.PAR2 and device.b_phi2_mt is not None:
        return device.b_phi2_mt
    return flux_field(device.geometry, axis).mean_mt


def bphi_consistency(device: DeviceModel) -> float:
    """B̄_Φ,2 相对几何预期 (w/h̄)·B_Φ,1 的偏差."""
    geo = device.geometry
    expected = expected_bphi2_from_bphi1(effective_bphi(device, FieldAxis.PAR1), geo.w_um, geo.h_um)
    return effective_bphi(device, FieldAxis.PAR2) / expected - 1.0


def _perp_suppression(b_mt: ArrayLike, bc_perp_mt: float) -> ArrayLike:
    return np.clip(1.0 - (np.asarray(b_mt, dtype=float) / bc_perp_mt) ** 2, 0.0, None)


# =============================================================================
# 临界电流与等离子体频率
# =============================================================================

def critical_current_factor(
    device: DeviceModel,
    field: FieldPoint,
    gap_model: GapModelKind = DEFAULT_GAP_MODEL,
) -> np.ndarray:
    """
    一个周期内每个结的 I_c(B)/I_c(0).

    - ∥1: 所有结共用 |F(πB/B_Φ,1, χ)|·Δ/Δ₀
    - ∥2: 逐结 |F(πB/B_Φ,2^(n), χ)|·Δ/Δ₀
    - ⊥: 仅能隙抑制 1 − (B/B_c,⊥)² (场平行于结电流，无 Fraunhofer)
    """
    n_p = device.geometry.n_p
    b = field.magnitude_mt
    if b == 0.0:
        return np.ones(n_p)

    if field.axis is FieldAxis.PERP:
        return np.full(n_p, float(_perp_suppression(b, device.bc_perp_mt)))

    delta = float(gap_ratio(gap_model, b, device.bc_par_mt))
    chi = device.chi_for(field.axis)
    if field.axis is FieldAxis.PAR1:
        y = math.pi * b / effective_bphi(device, FieldAxis.PAR1)
        return np.full(n_p, abs(float(fraunhofer_factor(y, chi))) * delta)

    mod = junction_modulation(n_p)
    per_junction_bphi = effective_bphi(device, FieldAxis.PAR2) / (1.0 + device.geometry.eta * mod)
    y_n = math.pi * b / per_junction_bphi
    return np.abs(fraunhofer_factor(y_n, chi)) * delta


def plasma_frequency(
    device: DeviceModel,
    field: FieldPoint,
    gap_model: GapModelKind = DEFAULT_GAP_MODEL,
) -> float:
    """
    可测的等离子体频率 (GHz).

    调制在 ω_p,n = 1/√(L_n C_n) 中抵消，故 ∥2 方向取逐结最小值。
    """
    factors = critical_current_factor(device, field, gap_model)
    return zero_field_plasma_ghz(device) * math.sqrt(float(np.min(factors)))


def plasma_frequency_vs_temperature(device: DeviceModel, t_k: ArrayLike) -> ArrayLike:
    """零场下 f_p(T) = f_p(0)·√(Δ(T)/Δ(0))."""
    ratio = gap_vs_temperature(t_k, device.tc_k)
    return zero_field_plasma_ghz(device) * np.sqrt(ratio)


# =============================================================================
# 带隙
# =============================================================================

def _band_edges(fp_ghz: ArrayLike, k_half_sq: float, inv_ls_sq: float, eta: float, beta: ArrayLike):
    """
    k = G/2 处行列式为零的两个解.

    ω± = ω_p √[K²(1±βη/2) / (K²(1±η/2) + (1∓η/2)/ℓ_s²)]，K = G/2。
    β 只进入 L_J 的调制 (分子)，电容调制保持 η。
    """
    beta = np.asarray(beta, dtype=float)
    num_plus = k_half_sq * (1.0 + beta * eta / 2.0)
    num_minus = k_half_sq * (1.0 - beta * eta / 2.0)
    den_plus = k_half_sq * (1.0 + eta / 2.0) + inv_ls_sq * (1.0 - eta / 2.0)
    den_minus = k_half_sq * (1.0 - eta / 2.0) + inv_ls_sq * (1.0 + eta / 2.0)
    f_plus = fp_ghz * np.sqrt(np.clip(num_plus / den_plus, 0.0, None))
    f_minus = fp_ghz * np.sqrt(np.clip(num_minus / den_minus, 0.0, None))
    return f_minus, f_plus


def gap_prefactor(
    device: DeviceModel,
    field: FieldPoint,
    gap_model: GapModelKind = DEFAULT_GAP_MODEL,
) -> tuple[float, float]:
    """
    带隙公式中的场依赖 ω_p 前因子 (GHz) 与有效调制系数 β.

    ∥2 方向使用平均 B̄_Φ,2 计算前因子与 β。
    """
    fp0 = zero_field_plasma_ghz(device)
    b = field.magnitude_mt
    if field.axis is not FieldAxis.PAR2 or b == 0.0:
        factor = float(critical_current_factor(device, field, gap_model)[0])
        return fp0 * math.sqrt(factor), 1.0

    chi = device.chi_for(FieldAxis.PAR2)
    y = math.pi * b / effective_bphi(device, FieldAxis.PAR2)
    if device.geometry.eta * y > 1.0:
        logger.warning(f"eta*y = {device.geometry.eta * y:.3f} > 1 at B={b} mT: first-order beta expansion out of range")
    f_mod = abs(float(fraunhofer_factor(y, chi)))
    if f_mod < FRAUNHOFER_ZERO_TOL:
        return 0.0, 1.0
    delta = float(gap_ratio(gap_model, b, device.bc_par_mt))
    return fp0 * math.sqrt(f_mod * delta), beta_factor(y, chi)


def bandgap_edges(
    device: DeviceModel,
    field: FieldPoint,
    gap_model: GapModelKind = DEFAULT_GAP_MODEL,
) -> BandgapEdges:
    """带隙上下边缘 (GHz)."""
    prefactor, beta = gap_prefactor(device, field, gap_model)
    geo = device.geometry
    k_half = geo.g / 2.0
    inv_ls_sq = device.circuit.cg_ff / device.circuit.cj_ff
    f_minus, f_plus = _band_edges(prefactor, k_half * k_half, inv_ls_sq, geo.eta, beta)
    lo, hi = sorted((float(f_minus), float(f_plus)))
    return BandgapEdges(lower_ghz=lo, upper_ghz=hi)


def bandgap_width(
    device: DeviceModel,
    field: FieldPoint,
    gap_model: GapModelKind = DEFAULT_GAP_MODEL,
) -> float:
    return bandgap_edges(device, field, gap_model).width_ghz


def bandgap_center(
    device: DeviceModel,
    field: FieldPoint,
    harmonic: int = 1,
    gap_model: GapModelKind = DEFAULT_GAP_MODEL,
) -> float:
    """
    η = 0 时的带隙中心 ω_c = ω_p (G'/2)/√((G'/2)² + 1/ℓ_s²)，G' = harmonic·G.

    harmonic = 2 估计下一个带隙的位置。
    """
    if harmonic not in (1, 2):
        raise InvalidParameterError(f"harmonic must be 1 or 2, got {harmonic}")
    prefactor, _ = gap_prefactor(device, field, gap_model)
    half = harmonic * device.geometry.g / 2.0
    inv_ls_sq = device.circuit.cg_ff / device.circuit.cj_ff
    return prefactor * half / math.sqrt(half * half + inv_ls_sq)


def bandgap_center_vs_temperature(device: DeviceModel, t_k: ArrayLike, harmonic: int = 1) -> ArrayLike:
    """零场带隙中心的温度依赖."""
    zero = bandgap_center(device, FieldPoint(FieldAxis.PAR1, 0.0), harmonic)
    return zero * np.sqrt(gap_vs_temperature(t_k, device.tc_k))


def gap_center_curve(
    device: DeviceModel,
    axis: FieldAxis,
    b_mt: np.ndarray,
    gap_model: GapModelKind = DEFAULT_GAP_MODEL,
) -> np.ndarray:
    """
    一组场值下两边缘平均的带隙频率 (拟合观测量).

    ∥1 方向整体向量化，其余方向逐点计算。
    """
    b = np.abs(np.asarray(b_mt, dtype=float))
    if axis is not FieldAxis.PAR1:
        return np.array([bandgap_edges(device, FieldPoint(axis, float(v)), gap_model).center_ghz for v in b])

    geo = device.geometry
    y = math.pi * b / effective_bphi(device, FieldAxis.PAR1)
    factor = np.abs(fraunhofer_factor(y, device.chi.chi)) * gap_ratio(gap_model, b, device.bc_par_mt)
    prefactor = zero_field_plasma_ghz(device) * np.sqrt(factor)
    k_half = geo.g / 2.0
    f_minus, f_plus = _band_edges(prefactor, k_half * k_half, device.circuit.cg_ff / device.circuit.cj_ff, geo.eta, 1.0)
    return 0.5 * (f_minus + f_plus)


# =============================================================================
# ∥2 带隙闭合
# =============================================================================

def beta_critical(device: DeviceModel) -> float:
    """闭合条件 β_c = ((G/2)² − 1/ℓ_s²)/((G/2)² + 1/ℓ_s²)."""
    k_half_sq = (device.geometry.g / 2.0) ** 2
    inv_ls_sq = device.circuit.cg_ff / device.circuit.cj_ff
    return (k_half_sq - inv_ls_sq) / (k_half_sq + inv_ls_sq)


def closing_fields(device: DeviceModel, n_max: int = 4) -> List[ClosingField]:
    """
    ∥2 方向带隙闭合场，n = 0..n_max-1.

    approximate: B̄_Φ,2[(n+½) − β_c/(π²(n+½))]
    exact: 在 F 相邻零点之间 (第 n 瓣) 括号求解 β(y) = β_c
    """
    if n_max < 1:
        raise InvalidParameterError(f"n_max must be >= 1, got {n_max}")
    beta_c = beta_critical(device)
    bphi2 = effective_bphi(device, FieldAxis.PAR2)
    chi = device.chi_for(FieldAxis.PAR2)

    results: List[ClosingField] = []
    for n in range(n_max):
        half = n + 0.5
        approximate = bphi2 * (half - beta_c / (math.pi ** 2 * half))

        lo = fraunhofer_zero(n, chi) + POLE_GUARD
        hi = fraunhofer_zero(n + 1, chi) - POLE_GUARD
        g_lo = beta_factor(lo, chi) - beta_c
        g_hi = beta_factor(hi, chi) - beta_c
        exact: Optional[float] = None
        if g_lo * g_hi < 0:
            y = brentq(lambda v: beta_factor(v, chi) - beta_c, lo, hi, xtol=1e-13, rtol=1e-13)
            exact = y * bphi2 / math.pi
        else:
            logger.warning(f"no closing-field root in lobe n={n}")
        results.append(ClosingField(n=n, approximate_mt=approximate, exact_mt=exact))
    return results


# =============================================================================
# 阻抗
# =============================================================================

def impedance(
    device: DeviceModel,
    field: FieldPoint,
    gap_model: GapModelKind = DEFAULT_GAP_MODEL,
) -> float:
    """
    阵列阻抗 Z = √(L̄_J(B)/C̄_g) (Ω).

    L̄_J(B)⁻¹ 取一个周期内逐结 L⁻¹ 的平均；抑制因子为 0 时返回 inf。
    """
    factors = critical_current_factor(device, field, gap_model)
    mod = junction_modulation(device.geometry.n_p)
    mean_factor = float(np.mean((1.0 + device.geometry.eta * mod) * factors))
    if mean_factor <= 0.0:
        return math.inf
    lj = device.circuit.lj_ph * PH / mean_factor
    return math.sqrt(lj / (device.circuit.cg_ff * FF))


# =============================================================================
# ⊥ 方向与整点评估
# =============================================================================

def perp_bandgap_model(b_mt: ArrayLike, fg0_ghz: float, b_offset_mt: float, bc_perp_mt: float) -> ArrayLike:
    """f_g(B) = f_g(0)√(1 − ((B − B_offset)/B_c,⊥)²)，实定义域外为 0."""
    if not bc_perp_mt > 0:
        raise InvalidParameterError(f"perpendicular critical field must be > 0, got {bc_perp_mt}")
    shifted = np.asarray(b_mt, dtype=float) - b_offset_mt
    fg = fg0_ghz * np.sqrt(_perp_suppression(shifted, bc_perp_mt))
    return float(fg) if np.ndim(fg) == 0 else fg


def evaluate_field(
    device: DeviceModel,
    field: FieldPoint,
    gap_model: GapModelKind = DEFAULT_GAP_MODEL,
) -> FieldEvaluation:
    """扫场的一行: 带隙边缘、f_p 与阻抗."""
    edges = bandgap_edges(device, field, gap_model)
    return FieldEvaluation(
        b_mt=field.b_mt,
        fg_minus_ghz=edges.lower_ghz,
        fg_plus_ghz=edges.upper_ghz,
        fp_ghz=plasma_frequency(device, field, gap_model),
        z_ohm=impedance(device, field, gap_model),
    )
