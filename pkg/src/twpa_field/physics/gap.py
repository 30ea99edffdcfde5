"""
超导能隙抑制模型 - Gap Suppression Models.

包含:
1. 配对破坏参数 α = (B/B_c)²
2. AG 理论 T=0 能隙方程的数值解 / 插值公式 / GL 形式近似
3. BCS 能隙温度依赖近似
4. 薄膜相关关系: Zeeman-轨道参数 c、相干长度、膜厚估计、涡旋稳定场

所有比值函数对数组输入同样适用 (ag_gap_numeric 除外，为标量求根)。
"""

from __future__ import annotations

import math
from typing import Union

import numpy as np
from loguru import logger
from scipy.optimize import brentq

from twpa_field.errors import DomainError, InvalidParameterError
from twpa_field.physics.constants import E_CHARGE, HBAR, MT, MU_B, NM, PHI0, UEV, UM
from twpa_field.schemas import FilmParams, GapModelKind

ArrayLike = Union[float, np.ndarray]

# 插值公式指数 γ = (12-π)/(4-π) ≈ 10.32
AG_GAMMA = (12.0 - math.pi) / (4.0 - math.pi)

# GL 有效临界场比例 B̃c/Bc = 2/√π
GL_FIELD_RATIO = 2.0 / math.sqrt(math.pi)

# BCS 温度依赖系数
BCS_TANH_COEFF = 1.74

AG_RATIO_FLOOR = 1e-12
AG_RTOL = 1e-10


# =============================================================================
# 场致配对破坏
# =============================================================================

def pair_breaking_alpha(b_mt: ArrayLike, bc_mt: float) -> ArrayLike:
    """
    配对破坏参数 α = (B/B_c)².

    不做截断，α > 1 的处理由调用方决定。
    """
    if not bc_mt > 0:
        raise InvalidParameterError(f"critical field must be > 0, got {bc_mt}")
    alpha = (np.asarray(b_mt, dtype=float) / bc_mt) ** 2
    return float(alpha) if alpha.ndim == 0 else alpha


def _check_alpha(alpha: ArrayLike) -> None:
    a = np.asarray(alpha, dtype=float)
    if np.any(~np.isfinite(a)) or np.any(a < 0.0) or np.any(a > 1.0):
        raise DomainError(f"pair-breaking parameter must lie in [0, 1], got {alpha}")


def _ag_residual(ratio: float, alpha: float) -> float:
    """T=0 AG 能隙方程残差，ratio = Δ/Δ₀，Γ/Δ = α/(2·ratio)."""
    zeta = alpha / (2.0 * ratio)
    if zeta <= 1.0:
        pair_term = math.pi * zeta / 4.0
    else:
        root = math.sqrt(zeta * zeta - 1.0)
        pair_term = (
            math.log(zeta + root)
            - root / (2.0 * zeta)
            + 0.5 * zeta * math.asin(1.0 / zeta)
        )
    return math.log(ratio) + pair_term


def ag_gap_numeric(alpha: float) -> float:
    """
    AG 能隙方程 (T=0) 数值解.

    在 Δ/Δ₀ ∈ (1e-12, 1] 上做 Brent 括号求根，相对容差 1e-10；
    残差关于 Δ/Δ₀ 单调，根唯一。

    Args:
        alpha: 配对破坏参数 ∈ [0, 1]

    Returns:
        Δ/Δ₀
    """
    _check_alpha(alpha)
    alpha = float(alpha)
    if alpha == 0.0:
        return 1.0
    if alpha == 1.0:
        return 0.0
    lo = AG_RATIO_FLOOR
    if _ag_residual(lo, alpha) >= 0.0:
        # 极接近临界点，解已低于括号下界
        logger.debug(f"AG root below bracket floor at alpha={alpha}")
        return 0.0
    return float(brentq(_ag_residual, lo, 1.0, args=(alpha,), xtol=1e-15, rtol=AG_RTOL))


def ag_gap_interp(alpha: ArrayLike) -> ArrayLike:
    """AG 插值公式 √(1 − (π/4)α − (1−π/4)α^γ)."""
    _check_alpha(alpha)
    a = np.asarray(alpha, dtype=float)
    inner = 1.0 - (math.pi / 4.0) * a - (1.0 - math.pi / 4.0) * a ** AG_GAMMA
    ratio = np.sqrt(np.clip(inner, 0.0, None))
    return float(ratio) if ratio.ndim == 0 else ratio


def gl_gap(b_mt: ArrayLike, bc_mt: float) -> ArrayLike:
    """
    GL 形式近似 √(1 − (B/B̃c)²)，B̃c = 2Bc/√π.

    B ≥ B̃c 时返回 0 而不报错 (拟合会扫过近似临界场)。
    """
    if not bc_mt > 0:
        raise InvalidParameterError(f"critical field must be > 0, got {bc_mt}")
    b_eff = GL_FIELD_RATIO * bc_mt
    b = np.abs(np.asarray(b_mt, dtype=float))
    ratio = np.sqrt(np.clip(1.0 - (b / b_eff) ** 2, 0.0, None))
    return float(ratio) if ratio.ndim == 0 else ratio


def gap_ratio(model: GapModelKind, b_mt: ArrayLike, bc_mt: float) -> ArrayLike:
    """
    按所选模型计算 Δ(B)/Δ₀.

    AG 两种模型在 α > 1 (超过临界场) 时返回 0。
    """
    if model is GapModelKind.GL:
        return gl_gap(b_mt, bc_mt)

    b = np.abs(np.asarray(b_mt, dtype=float))
    alpha = pair_breaking_alpha(b, bc_mt)
    above = alpha >= 1.0
    clipped = np.where(above, 1.0, alpha)
    if model is GapModelKind.AG_INTERP:
        ratio = np.asarray(ag_gap_interp(clipped), dtype=float)
    else:
        ratio = np.array([ag_gap_numeric(float(a)) for a in np.atleast_1d(clipped)]).reshape(clipped.shape)
    ratio = np.where(above, 0.0, ratio)
    return float(ratio) if ratio.ndim == 0 else ratio


# =============================================================================
# 温度依赖
# =============================================================================

def gap_vs_temperature(t_k: ArrayLike, tc_k: float) -> ArrayLike:
    """Δ(T)/Δ(0) = tanh(1.74·√(Tc/T − 1))，T ≥ Tc 时为 0."""
    if not tc_k > 0:
        raise InvalidParameterError(f"Tc must be > 0, got {tc_k}")
    t = np.asarray(t_k, dtype=float)
    if np.any(~(t > 0)):
        raise InvalidParameterError(f"temperature must be > 0, got {t_k}")
    below = t < tc_k
    safe_t = np.where(below, t, tc_k)
    ratio = np.where(below, np.tanh(BCS_TANH_COEFF * np.sqrt(tc_k / safe_t - 1.0)), 0.0)
    return float(ratio) if ratio.ndim == 0 else ratio


# =============================================================================
# 薄膜关系
# =============================================================================

def orbital_interpolation(x: float) -> float:
    """f(ℓ/t) = min(1, 3/(4x))，满足 f(0)=1 与 x≫1 时 3/(4x)."""
    if x <= 0:
        return 1.0
    return min(1.0, 3.0 / (4.0 * x))


def zeeman_orbital_c(film: FilmParams) -> float:
    """
    Zeeman 与轨道效应的相对强度参数.

    c = D(et)²Δ₀ f(ℓ/t) / (6ħµ_B²)；c > 1 时轨道效应主导。
    """
    t_m = film.t_nm * NM
    delta0_j = film.delta0_uev * UEV
    f = orbital_interpolation(film.ell_nm / film.t_nm)
    return film.d_m2s * (E_CHARGE * t_m) ** 2 * delta0_j * f / (6.0 * HBAR * MU_B ** 2)


def coherence_length_from_bcperp(bc_perp_mt: float) -> float:
    """由垂直临界场 B_c,⊥ = Φ₀/(2πξ²) 求相干长度 ξ (nm)."""
    if not bc_perp_mt > 0:
        raise InvalidParameterError(f"perpendicular critical field must be > 0, got {bc_perp_mt}")
    return math.sqrt(PHI0 / (2.0 * math.pi * bc_perp_mt * MT)) / NM


def thickness_from_critical_ratio(bc_perp_mt: float, bc_par_mt: float, xi_nm: float) -> float:
    """由 B⊥/B∥ = t/(2√3 ξ) 估计膜厚 t (nm)."""
    if not (bc_perp_mt > 0 and bc_par_mt > 0 and xi_nm > 0):
        raise InvalidParameterError("critical fields and coherence length must be > 0")
    return 2.0 * math.sqrt(3.0) * xi_nm * (bc_perp_mt / bc_par_mt)


def vortex_stability_field(w_um: float, xi_nm: float) -> float:
    """
    宽度 w 的超导条中涡旋稳定的最小场 B_L (mT).

    B_L = (2Φ₀/πw²)·ln(2w/πξ)，要求 2w/(πξ) > 1。
    """
    if not (w_um > 0 and xi_nm > 0):
        raise InvalidParameterError("strip width and coherence length must be > 0")
    w_m = w_um * UM
    log_arg = 2.0 * w_m / (math.pi * xi_nm * NM)
    if log_arg <= 1.0:
        raise DomainError(f"2w/(pi xi) = {log_arg:.4g} <= 1: vortex never stable in this strip")
    return 2.0 * PHI0 / (math.pi * w_m ** 2) * math.log(log_arg) / MT
