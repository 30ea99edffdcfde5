"""
ABCD 级联 - Ladder S-Parameter Engine.

单元拓扑: 岛 n 处并联 C_g,n，再串联结 n+½ (L_J ∥ C_J) 到岛 n+1；
端口接在岛 0 与岛 N_J，最后一个岛同样带 C_g。

全阵列为 N_J 个单元，按周期 N_p 重复：先算一个周期的乘积，再做
快速幂，最后补余下的单元。每次乘法后归一化并累计对数尺度，
带隙内和 f_p 以上的指数增长不会溢出。
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Tuple

import numpy as np
from loguru import logger

from twpa_field.errors import InvalidParameterError
from twpa_field.physics.array_model import DEFAULT_GAP_MODEL, critical_current_factor, modulated_arrays
from twpa_field.physics.constants import FF, GHZ, PH
from twpa_field.schemas import DeviceModel, FieldPoint, GapModelKind, Spectrum, SpectrumKind

# 串联支路极点处分母的替代值 (1/H)
POLE_EPSILON = 1e-30

_LN10_DB = 20.0 / math.log(10.0)


@dataclass
class SParameters:
    """仿真得到的 S21 / S11 (dB 频谱与复数值)."""
    s21: Spectrum
    s11: Spectrum
    s21_complex: np.ndarray
    s11_complex: np.ndarray


def _normalize(m: np.ndarray, log_scale: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    norm = np.max(np.abs(m), axis=(1, 2))
    norm = np.where(norm > 0.0, norm, 1.0)
    return m / norm[:, None, None], log_scale + np.log(norm)


def _identity(n_freq: int) -> np.ndarray:
    return np.broadcast_to(np.eye(2, dtype=complex), (n_freq, 2, 2)).copy()


def _shunt(y: np.ndarray) -> np.ndarray:
    m = _identity(y.size)
    m[:, 1, 0] = y
    return m


def _cell(z: np.ndarray, y: np.ndarray) -> np.ndarray:
    """并联 Y 再串联 Z: [[1, Z], [Y, YZ + 1]]."""
    m = np.empty((z.size, 2, 2), dtype=complex)
    m[:, 0, 0] = 1.0
    m[:, 0, 1] = z
    m[:, 1, 0] = y
    m[:, 1, 1] = y * z + 1.0
    return m


def _series_impedance(omega: np.ndarray, inv_l: float, c: float) -> np.ndarray:
    """L ∥ C 串联支路 Z = jω/(L⁻¹ − ω²C)，导纳形式，L⁻¹ = 0 时为纯电容."""
    den = inv_l - omega * omega * c
    den = np.where(den == 0.0, POLE_EPSILON, den)
    return 1j * omega / den


def _matrix_power(
    base: np.ndarray, base_log: np.ndarray, exponent: int
) -> Tuple[np.ndarray, np.ndarray]:
    result = _identity(base.shape[0])
    result_log = np.zeros(base.shape[0])
    while exponent > 0:
        if exponent & 1:
            result, result_log = _normalize(result @ base, result_log + base_log)
        exponent >>= 1
        if exponent:
            base, base_log = _normalize(base @ base, 2.0 * base_log)
    return result, result_log


def abcd_cascade(
    device: DeviceModel,
    field: FieldPoint,
    freqs_ghz: np.ndarray,
    z0_ohm: float = 50.0,
    gap_model: GapModelKind = DEFAULT_GAP_MODEL,
) -> SParameters:
    """
    全阵列 S 参数.

    Args:
        device: 器件模型
        field: 磁场点 (结电感按 critical_current_factor 抑制)
        freqs_ghz: 严格递增的频率网格
        z0_ohm: 端口参考阻抗

    Returns:
        SParameters
    """
    if not z0_ohm > 0:
        raise InvalidParameterError(f"reference impedance must be > 0, got {z0_ohm}")
    freqs = np.asarray(freqs_ghz, dtype=float)
    if freqs.ndim != 1 or freqs.size == 0:
        raise InvalidParameterError("frequency grid must be a non-empty 1-D array")
    if freqs.size >= 2 and not np.all(np.diff(freqs) > 0):
        raise InvalidParameterError("frequency grid must be strictly increasing")

    arrays = modulated_arrays(device)
    factors = critical_current_factor(device, field, gap_model)
    inv_l = factors / (arrays.lj_ph * PH)
    cj = arrays.cj_ff * FF
    cg = arrays.cg_ff * FF
    omega = 2.0 * math.pi * freqs * GHZ

    n_p = device.geometry.n_p
    n_j = device.geometry.n_j
    periods, remainder = divmod(n_j, n_p)
    logger.debug(f"ABCD cascade: {n_j} cells = {periods} x {n_p} + {remainder}, {freqs.size} freqs")

    cells = [_cell(_series_impedance(omega, inv_l[n], cj[n]), 1j * omega * cg[n]) for n in range(n_p)]

    period = _identity(freqs.size)
    period_log = np.zeros(freqs.size)
    for cell in cells:
        period, period_log = _normalize(period @ cell, period_log)

    total, total_log = _matrix_power(period, period_log, periods)
    for cell in cells[:remainder]:
        total, total_log = _normalize(total @ cell, total_log)
    total, total_log = _normalize(total @ _shunt(1j * omega * cg[remainder]), total_log)

    a, b, c, d = total[:, 0, 0], total[:, 0, 1], total[:, 1, 0], total[:, 1, 1]
    den = a + b / z0_ohm + c * z0_ohm + d
    num = a + b / z0_ohm - c * z0_ohm - d

    s11_c = num / den
    s21_scaled = 2.0 / den
    s21_c = s21_scaled * np.exp(-total_log)
    with np.errstate(divide="ignore"):
        s21_db = 20.0 * np.log10(np.abs(s21_scaled)) - total_log * _LN10_DB
        s11_db = 20.0 * np.log10(np.abs(s11_c))

    meta = dict(field=field, device_id=device.name, kind=SpectrumKind.SIMULATED)
    return SParameters(
        s21=Spectrum(freqs, s21_db, quantity="s21", **meta),
        s11=Spectrum(freqs, s11_db, quantity="s11", **meta),
        s21_complex=s21_c,
        s11_complex=s11_c,
    )
