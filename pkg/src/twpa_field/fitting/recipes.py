"""
拟合流程 - Fit Recipes.

包含:
- fit_bandgap_par1: ∥1 带隙拟合 {f_p(0), χ, B_Φ,1}，B_c 固定
- fit_perp_hysteresis: ⊥ 上/下扫联合拟合 {f_g(0), B_c,⊥, B_offset↑, B_offset↓}
- fit_temperature: f_g(T) 拟合 {f_g(0)} (可选 T_c)
- model_comparison_gl_vs_ag: 同一数据分别用 AG 插值与 GL 能隙模型拟合

所有流程的残差为均匀权重的平方和，参数边界通过目标函数罚值 (+∞) 施加。
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Dict, Optional, Sequence

import numpy as np
from loguru import logger

from twpa_field.errors import IllPosedFitError, InvalidParameterError
from twpa_field.fitting.optimizer import NelderMeadOptions, nelder_mead
from twpa_field.physics.array_model import (
    DEFAULT_GAP_MODEL,
    effective_bphi,
    gap_center_curve,
    perp_bandgap_model,
    zero_field_plasma_ghz,
)
from twpa_field.physics.gap import gap_vs_temperature
from twpa_field.schemas import DeviceModel, FgDataset, FieldAxis, FitResult, GapModelKind

# ∥1 拟合参数边界
FP0_BOUNDS_GHZ = (1.0, 100.0)  # 开区间
CHI_BOUNDS = (0.0, 5.0)  # 闭区间
BPHI_BOUNDS_MT = (1.0, 1000.0)  # 开区间

PAR1_PARAM_NAMES = ("fp0_ghz", "chi", "b_phi1_mt")
PERP_PARAM_NAMES = ("fg0_ghz", "bc_perp_mt", "b_offset_up_mt", "b_offset_down_mt")

# 上/下扫场区间的最小重叠比例
MIN_SWEEP_OVERLAP = 0.5


@dataclass
class ModelComparison:
    """GL 与 AG 能隙模型的拟合对比."""
    ag: FitResult
    gl: FitResult

    @property
    def ag_better(self) -> bool:
        return self.ag.residual_norm < self.gl.residual_norm

    @property
    def residual_ratio(self) -> float:
        """GL 残差 / AG 残差."""
        if self.ag.residual_norm == 0.0:
            return math.inf if self.gl.residual_norm > 0.0 else 1.0
        return self.gl.residual_norm / self.ag.residual_norm

    def to_dict(self) -> Dict[str, object]:
        return {
            "ag": self.ag.to_dict(),
            "gl": self.gl.to_dict(),
            "ag_better": self.ag_better,
        }


def _sum_squares(model: np.ndarray, data: np.ndarray) -> float:
    return float(np.sum((model - data) ** 2))


# =============================================================================
# ∥1 带隙拟合
# =============================================================================

def _in_par1_bounds(fp0: float, chi: float, bphi: float) -> bool:
    return (
        FP0_BOUNDS_GHZ[0] < fp0 < FP0_BOUNDS_GHZ[1]
        and CHI_BOUNDS[0] <= chi <= CHI_BOUNDS[1]
        and BPHI_BOUNDS_MT[0] < bphi < BPHI_BOUNDS_MT[1]
    )


def fit_bandgap_par1(
    data: FgDataset,
    device: DeviceModel,
    gap_model: GapModelKind = DEFAULT_GAP_MODEL,
    bc_mt: Optional[float] = None,
    x0: Optional[Sequence[float]] = None,
    options: Optional[NelderMeadOptions] = None,
) -> FitResult:
    """
    ∥1 方向带隙数据拟合.

    模型为 bandgap_edges 两边缘的平均；B_c 固定 (不参与拟合)。

    Args:
        data: ∥1 带隙数据，至少 3 行且至少两个不同的 |B|
        device: 提供几何与电路参数，以及默认初始值
        gap_model: 能隙抑制模型
        bc_mt: 固定的 B_c，默认取 device.bc_par_mt
        x0: 初始 (f_p(0), χ, B_Φ,1)，默认取 device 当前值

    Returns:
        FitResult，params 为 fp0_ghz / chi / b_phi1_mt
    """
    if len(data) < 3:
        raise IllPosedFitError(f"par1 fit needs at least 3 data rows, got {len(data)}")
    fields = np.abs(data.fields_mt)
    if np.unique(fields).size < 2:
        raise IllPosedFitError("par1 fit needs data at more than one field value")

    base = device if bc_mt is None else device.with_overrides(bc_par_mt=bc_mt)
    if x0 is None:
        x0 = (zero_field_plasma_ghz(base), base.chi.chi, effective_bphi(base, FieldAxis.PAR1))
    fg = data.fg_ghz

    def objective(x: np.ndarray) -> float:
        fp0, chi, bphi = (float(v) for v in x)
        if not _in_par1_bounds(fp0, chi, bphi):
            return math.inf
        trial = base.with_overrides(fp0_ghz=fp0, chi=chi, b_phi1_mt=bphi)
        return _sum_squares(gap_center_curve(trial, FieldAxis.PAR1, fields, gap_model), fg)

    logger.info(f"Fitting par1 bandgap: {len(data)} rows, gap_model={gap_model.value}, Bc={base.bc_par_mt} mT")
    result = nelder_mead(objective, x0, options, names=PAR1_PARAM_NAMES)
    logger.info(f"par1 fit: {result.params}, residual={result.residual_norm:.4g}")
    return result


def model_comparison_gl_vs_ag(
    data: FgDataset,
    device: DeviceModel,
    bc_mt: Optional[float] = None,
    x0: Optional[Sequence[float]] = None,
    options: Optional[NelderMeadOptions] = None,
) -> ModelComparison:
    """同一 ∥1 数据分别以 AG 插值与 GL 能隙模型拟合."""
    ag = fit_bandgap_par1(data, device, GapModelKind.AG_INTERP, bc_mt, x0, options)
    gl = fit_bandgap_par1(data, device, GapModelKind.GL, bc_mt, x0, options)
    comparison = ModelComparison(ag=ag, gl=gl)
    logger.info(f"GL/AG residual ratio: {comparison.residual_ratio:.3g}")
    return comparison


# =============================================================================
# ⊥ 磁滞拟合
# =============================================================================

def _check_sweep_overlap(up: FgDataset, down: FgDataset) -> None:
    lo = max(up.fields_mt.min(), down.fields_mt.min())
    hi = min(up.fields_mt.max(), down.fields_mt.max())
    span = min(np.ptp(up.fields_mt), np.ptp(down.fields_mt))
    if span <= 0 or (hi - lo) / span < MIN_SWEEP_OVERLAP:
        raise IllPosedFitError(
            f"up/down sweeps overlap on {max(hi - lo, 0.0):.3g} mT, "
            f"need at least {MIN_SWEEP_OVERLAP:.0%} of the shorter sweep"
        )


def fit_perp_hysteresis(
    up: FgDataset,
    down: FgDataset,
    x0: Optional[Sequence[float]] = None,
    options: Optional[NelderMeadOptions] = None,
) -> FitResult:
    """
    ⊥ 方向上/下扫场联合拟合.

    共享 f_g(0) 与 B_c,⊥，两个方向各自的 B_offset。params 额外给出
    offset_difference_mt = B_offset↑ − B_offset↓。
    """
    if len(up) < 3 or len(down) < 3:
        raise IllPosedFitError("each sweep needs at least 3 data rows")
    _check_sweep_overlap(up, down)

    if x0 is None:
        off_up = float(up.fields_mt[np.argmax(up.fg_ghz)])
        off_down = float(down.fields_mt[np.argmax(down.fg_ghz)])
        reach = max(
            np.max(np.abs(up.fields_mt - off_up)),
            np.max(np.abs(down.fields_mt - off_down)),
        )
        fg0 = float(max(up.fg_ghz.max(), down.fg_ghz.max()))
        x0 = (fg0, 1.05 * float(reach), off_up, off_down)

    def objective(x: np.ndarray) -> float:
        fg0, bc, off_u, off_d = (float(v) for v in x)
        if not (fg0 > 0 and bc > 0):
            return math.inf
        return _sum_squares(perp_bandgap_model(up.fields_mt, fg0, off_u, bc), up.fg_ghz) + _sum_squares(
            perp_bandgap_model(down.fields_mt, fg0, off_d, bc), down.fg_ghz
        )

    logger.info(f"Fitting perp hysteresis: {len(up)} up + {len(down)} down rows")
    result = nelder_mead(objective, x0, options, names=PERP_PARAM_NAMES)
    result.params["offset_difference_mt"] = result.params["b_offset_up_mt"] - result.params["b_offset_down_mt"]
    logger.info(f"perp fit: {result.params}")
    return result


# =============================================================================
# 温度拟合
# =============================================================================

def fit_temperature(
    temps_k: Sequence[float],
    fg_ghz: Sequence[float],
    tc_k: float = 1.27,
    fit_tc: bool = False,
    options: Optional[NelderMeadOptions] = None,
) -> FitResult:
    """
    f_g(T) = f_g(0)·√(Δ(T)/Δ(0)) 拟合.

    T ≥ T_c 的点被丢弃并告警；全部高于 T_c 时问题不适定。

    Args:
        temps_k: 温度 (K)
        fg_ghz: 带隙频率 (GHz)
        tc_k: T_c (fit_tc=True 时为初始值)
        fit_tc: 是否同时拟合 T_c
    """
    temps = np.asarray(temps_k, dtype=float)
    fg = np.asarray(fg_ghz, dtype=float)
    if temps.shape != fg.shape or temps.ndim != 1 or temps.size == 0:
        raise InvalidParameterError("temperatures and fg must be non-empty 1-D arrays of equal length")
    if not tc_k > 0:
        raise InvalidParameterError(f"Tc must be > 0, got {tc_k}")

    below = temps < tc_k
    if not below.any():
        raise IllPosedFitError(f"all {temps.size} data points are at or above Tc = {tc_k} K")
    if not below.all():
        logger.warning(f"Dropping {int((~below).sum())} point(s) at or above Tc = {tc_k} K")
        temps, fg = temps[below], fg[below]

    fg0_guess = float(fg[np.argmin(temps)] / gap_vs_temperature(temps.min(), tc_k))

    if fit_tc:
        def objective(x: np.ndarray) -> float:
            fg0, tc = float(x[0]), float(x[1])
            if not (fg0 > 0 and tc > 0):
                return math.inf
            return _sum_squares(fg0 * np.sqrt(gap_vs_temperature(temps, tc)), fg)

        return nelder_mead(objective, (fg0_guess, tc_k), options, names=("fg0_ghz", "tc_k"))

    ratio = np.sqrt(gap_vs_temperature(temps, tc_k))

    def objective_fixed(x: np.ndarray) -> float:
        fg0 = float(x[0])
        if not fg0 > 0:
            return math.inf
        return _sum_squares(fg0 * ratio, fg)

    result = nelder_mead(objective_fixed, (fg0_guess,), options, names=("fg0_ghz",))
    result.params["tc_k"] = tc_k
    return result
