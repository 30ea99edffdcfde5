"""
频谱特征提取 - Spectrum Feature Extraction.

包含:
- extract_plasma: 透射持续跌落到通带中位数以下 20 dB 的截止频率 f_p
- extract_gap: 滚动中位数基线以下最显著的凹陷 (带隙 f_g)

未找到特征时返回 found=False 的结果对象，不抛异常。
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import List, Optional

import numpy as np
from loguru import logger
from scipy.ndimage import median_filter
from scipy.signal import find_peaks, peak_widths

from twpa_field.schemas import Spectrum

# 截止判据: 低于通带中位数的 dB
CUTOFF_DROP_DB = 20.0


@dataclass
class PlasmaFeature:
    """等离子体截止频率提取结果."""
    found: bool
    f_p_ghz: Optional[float] = None
    reference_db: Optional[float] = None  # 通带中位数
    message: str = ""

    @classmethod
    def ok(cls, f_p_ghz: float, reference_db: float) -> "PlasmaFeature":
        return cls(found=True, f_p_ghz=f_p_ghz, reference_db=reference_db)

    @classmethod
    def not_found(cls, message: str) -> "PlasmaFeature":
        return cls(found=False, message=message)


@dataclass
class Dip:
    """单个凹陷."""
    center_ghz: float  # 抛物线底部落在半深度两交点之间时取底部，否则取两交点中点
    lower_ghz: float
    upper_ghz: float
    bottom_ghz: float  # 抛物线拟合的凹陷底部
    prominence_db: float


@dataclass
class GapFeature:
    """带隙提取结果: 最显著的凹陷，dips 列出所有超过阈值的凹陷."""
    found: bool
    center_ghz: Optional[float] = None
    lower_ghz: Optional[float] = None
    upper_ghz: Optional[float] = None
    bottom_ghz: Optional[float] = None
    prominence_db: Optional[float] = None
    dips: List[Dip] = field(default_factory=list)
    message: str = ""

    @classmethod
    def ok(cls, dips: List[Dip]) -> "GapFeature":
        best = max(dips, key=lambda d: d.prominence_db)
        return cls(
            found=True,
            center_ghz=best.center_ghz,
            lower_ghz=best.lower_ghz,
            upper_ghz=best.upper_ghz,
            bottom_ghz=best.bottom_ghz,
            prominence_db=best.prominence_db,
            dips=sorted(dips, key=lambda d: d.center_ghz),
        )

    @classmethod
    def not_found(cls, message: str) -> "GapFeature":
        return cls(found=False, message=message)


def _finite_values(spectrum: Spectrum) -> Optional[np.ndarray]:
    """把低于噪声底的标记值替换为比最小有限值再低 100 dB."""
    values = spectrum.values_db
    finite = np.isfinite(values)
    if not finite.any():
        return None
    floor = float(values[finite].min()) - 100.0
    return np.where(finite, values, floor)


def extract_plasma(spectrum: Spectrum, drop_db: float = CUTOFF_DROP_DB) -> PlasmaFeature:
    """
    提取等离子体截止频率.

    通带参考 = 最大值 drop_db 以内最后一点之前所有值的中位数；
    f_p = 此后所有值都不高于 参考 − drop_db 的第一点 (线性插值到阈值)。
    """
    values = _finite_values(spectrum)
    if values is None or values.size < 3:
        return PlasmaFeature.not_found("spectrum has too few finite points")
    freqs = spectrum.freqs_ghz

    near_max = np.nonzero(values >= values.max() - drop_db)[0]
    reference = float(np.median(values[: near_max[-1] + 1]))
    threshold = reference - drop_db

    # 从右往左的累计最大值: 某点之后是否全部低于阈值
    tail_max = np.maximum.accumulate(values[::-1])[::-1]
    stays_below = tail_max <= threshold
    if not stays_below.any():
        return PlasmaFeature.not_found("no persistent cutoff within the spectrum")
    i = int(np.argmax(stays_below))
    if i == 0:
        return PlasmaFeature.not_found("spectrum starts below the cutoff threshold")

    v0, v1 = values[i - 1], values[i]
    f0, f1 = freqs[i - 1], freqs[i]
    f_p = f0 + (v0 - threshold) / (v0 - v1) * (f1 - f0) if v0 != v1 else f1
    return PlasmaFeature.ok(float(f_p), reference)


def _parabolic_bottom(freqs: np.ndarray, values: np.ndarray, i: int) -> float:
    """三点抛物线拟合凹陷底部."""
    if i <= 0 or i >= values.size - 1:
        return float(freqs[i])
    a, b, _ = np.polyfit(freqs[i - 1 : i + 2], values[i - 1 : i + 2], 2)
    if a <= 0:
        return float(freqs[i])
    return float(np.clip(-b / (2.0 * a), freqs[i - 1], freqs[i + 1]))


def _make_dip(freqs: np.ndarray, values: np.ndarray, i: int, prominence: float, lo: float, hi: float) -> Dip:
    """半深度交点中点作为粗略中心，用抛物线底部细化."""
    bottom = _parabolic_bottom(freqs, values, i)
    center = bottom if lo <= bottom <= hi else 0.5 * (lo + hi)
    return Dip(center_ghz=center, lower_ghz=lo, upper_ghz=hi, bottom_ghz=bottom, prominence_db=prominence)


def extract_gap(
    spectrum: Spectrum,
    min_prominence_db: float = 6.0,
    window_ghz: float = 2.0,
    edge_guard: float = 0.1,
    min_width_points: int = 1,
) -> GapFeature:
    """
    提取带隙凹陷.

    Args:
        spectrum: S21 频谱
        min_prominence_db: 凹陷显著性阈值
        window_ghz: 滚动中位数基线窗口
        edge_guard: 找到截止频率时只在 f < (1 − edge_guard)·f_p 内搜索，
            避开截止台阶
        min_width_points: 凹陷最小宽度 (网格点)
    """
    values = _finite_values(spectrum)
    if values is None or values.size < 3:
        return GapFeature.not_found("spectrum has too few finite points")
    freqs = spectrum.freqs_ghz

    plasma = extract_plasma(spectrum)
    if plasma.found:
        keep = freqs < (1.0 - edge_guard) * plasma.f_p_ghz
        if keep.sum() < 3:
            return GapFeature.not_found("no passband below the cutoff")
        freqs, values = freqs[keep], values[keep]

    step = float(np.median(np.diff(freqs)))
    size = max(3, int(round(window_ghz / step)) | 1)
    size = min(size, values.size if values.size % 2 else values.size - 1)
    baseline = median_filter(values, size=size, mode="nearest")
    depth = baseline - values

    peaks, props = find_peaks(depth, prominence=min_prominence_db, width=min_width_points)
    if peaks.size == 0:
        return GapFeature.not_found(f"no dip deeper than {min_prominence_db} dB")

    _, _, left_ips, right_ips = peak_widths(depth, peaks, rel_height=0.5)
    index = np.arange(freqs.size, dtype=float)
    lowers = np.interp(left_ips, index, freqs)
    uppers = np.interp(right_ips, index, freqs)

    dips = [
        _make_dip(freqs, values, int(p), float(prom), float(lo), float(hi))
        for p, prom, lo, hi in zip(peaks, props["prominences"], lowers, uppers)
    ]
    logger.debug(f"extract_gap: {len(dips)} dip(s) above {min_prominence_db} dB")
    return GapFeature.ok(dips)
