"""
Fraunhofer 临界电流调制 - Fraunhofer Critical-Current Modulation.

包含:
- current_density: 边缘集中型电流密度分布 cosh(2xχ)/cosh(χ)
- fraunhofer_factor: F(y, χ)，χ→0 时退化为 sinc(y)
- beta_factor: ∥2 方向的场依赖有效调制系数 β = 1 + y·d ln|F|/dy
- flux_field: 由结几何求一个磁通量子对应的场 B_Φ

F 返回带符号值，取模由调用方完成。
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Union

import numpy as np
from scipy.optimize import brentq

from twpa_field.errors import DomainError, InvalidParameterError
from twpa_field.physics.constants import MT, NM, PHI0, UM
from twpa_field.schemas import FieldAxis, JunctionGeometry

ArrayLike = Union[float, np.ndarray]

# χ 低于此值时切换到均匀电流极限 (sinc / y·cot y)
UNIFORM_CHI_THRESHOLD = 1e-6

_POLE_TOL = 1e-14


def _scalar_or_array(value: np.ndarray) -> ArrayLike:
    return float(value) if value.ndim == 0 else value


def current_density(x: ArrayLike, chi: float) -> ArrayLike:
    """
    归一化电流密度 J/J_max.

    Args:
        x: 以结尺寸 L 归一化的位置，|x| ≤ 1/2
        chi: 边缘集中参数

    Returns:
        cosh(2xχ)/cosh(χ)，边缘恒为 1
    """
    if chi < 0:
        raise InvalidParameterError(f"chi must be >= 0, got {chi}")
    xs = np.asarray(x, dtype=float)
    if np.any(np.abs(xs) > 0.5):
        raise DomainError(f"normalized position must satisfy |x| <= 1/2, got {x}")
    if chi < UNIFORM_CHI_THRESHOLD:
        return _scalar_or_array(np.ones_like(xs))
    return _scalar_or_array(np.cosh(2.0 * xs * chi) / np.cosh(chi))


def fraunhofer_factor(y: ArrayLike, chi: float) -> ArrayLike:
    """
    Fraunhofer 因子 F(y, χ) = χ²/(χ²+y²)·[y·sin y/(χ·tanh χ) + cos y].

    y = πB/B_Φ；关于 y 为偶函数。
    """
    if chi < 0:
        raise InvalidParameterError(f"chi must be >= 0, got {chi}")
    ys = np.asarray(y, dtype=float)
    if chi < UNIFORM_CHI_THRESHOLD:
        # numpy 的 sinc 为 sin(πx)/(πx)
        return _scalar_or_array(np.sinc(ys / math.pi))
    chi_t = chi * math.tanh(chi)
    envelope = chi * chi / (chi * chi + ys * ys)
    return _scalar_or_array(envelope * (ys * np.sin(ys) / chi_t + np.cos(ys)))


def beta_factor(y: float, chi: float) -> float:
    """
    场依赖有效调制系数 β.

    均匀电流: β = y·cot y；一般 χ: β = 1 − 2y²/(χ²+y²) + y·P'(y)/P(y)，
    其中 P(y) = y·sin y/(χ·tanh χ) + cos y。两者都等于 1 + y·d ln|F|/dy，β(0) = 1。

    Raises:
        DomainError: y 位于 F 的零点 (cot 或分母的极点)
    """
    if chi < 0:
        raise InvalidParameterError(f"chi must be >= 0, got {chi}")
    y = float(y)
    if y == 0.0:
        return 1.0
    if chi < UNIFORM_CHI_THRESHOLD:
        s = math.sin(y)
        if abs(s) < _POLE_TOL:
            raise DomainError(f"beta_factor pole at y={y} (cot y diverges)")
        return y * math.cos(y) / s

    chi_t = chi * math.tanh(chi)
    s, c = math.sin(y), math.cos(y)
    p = y * s / chi_t + c
    if abs(p) < _POLE_TOL:
        raise DomainError(f"beta_factor pole at y={y} (Fraunhofer zero)")
    dp = (s + y * c) / chi_t - s
    return 1.0 - 2.0 * y * y / (chi * chi + y * y) + y * dp / p


def fraunhofer_zero(k: int, chi: float) -> float:
    """F(y, χ) 的第 k 个正零点 (k ≥ 1)；k = 0 返回 0."""
    if k <= 0:
        return 0.0
    if chi < UNIFORM_CHI_THRESHOLD:
        return k * math.pi
    chi_t = chi * math.tanh(chi)
    # y·sin y + χ·tanh χ·cos y 在 [(k-½)π, kπ] 两端异号
    return float(
        brentq(lambda v: v * math.sin(v) + chi_t * math.cos(v), (k - 0.5) * math.pi, k * math.pi, xtol=1e-14)
    )


# =============================================================================
# 磁通-磁场换算
# =============================================================================

@dataclass
class FluxField:
    """一个磁通量子对应的场.

    Attributes:
        mean_mt: B_Φ,1 (∥1) 或 B̄_Φ,2 (∥2)
        per_junction_mt: ∥2 方向一个调制周期内每个结的 B_Φ,2^(n)
    """
    mean_mt: float
    per_junction_mt: Optional[np.ndarray] = None


def junction_modulation(n_p: int) -> np.ndarray:
    """一个周期内 cos(G(n+½))，n = 0..N_p-1."""
    n = np.arange(n_p, dtype=float)
    return np.cos(2.0 * math.pi / n_p * (n + 0.5))


def flux_field(geometry: JunctionGeometry, axis: FieldAxis) -> FluxField:
    """
    由结几何求 B_Φ.

    - ∥1: B_Φ,1 = Φ₀/(l·w)
    - ∥2: B̄_Φ,2 = Φ₀/(l·h̄)，B_Φ,2^(n) = B̄_Φ,2/[1+η cos(G(n+½))]
    """
    l_m = geometry.l_nm * NM
    if axis is FieldAxis.PAR1:
        return FluxField(mean_mt=PHI0 / (l_m * geometry.w_um * UM) / MT)
    if axis is FieldAxis.PAR2:
        mean = PHI0 / (l_m * geometry.h_um * UM) / MT
        per_junction = mean / (1.0 + geometry.eta * junction_modulation(geometry.n_p))
        return FluxField(mean_mt=mean, per_junction_mt=per_junction)
    raise InvalidParameterError("no Fraunhofer flux field for the perpendicular axis")


def expected_bphi2_from_bphi1(b_phi1_mt: float, w_um: float, h_um: float) -> float:
    """几何关系 B̄_Φ,2 = (w/h̄)·B_Φ,1."""
    return b_phi1_mt * w_um / h_um
