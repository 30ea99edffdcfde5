"""
增益指标流程 - Gain Figure-of-Merit Pipeline.

包含:
1. 背景估计: 多场最大值 / 带隙窗口线性插值
2. 增益曲线: pump-on 减背景 (dB)
3. 500 MHz 滑动平均 (boxcar，边缘截断)
4. 最大平滑增益、3 dB 带宽、窗口内增益起伏
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from typing import List, Sequence, Tuple

import numpy as np
from loguru import logger

from twpa_field.errors import DomainError, GridMismatchError, InvalidParameterError
from twpa_field.schemas import BELOW_NOISE_FLOOR, GainMetrics, Spectrum

DEFAULT_WINDOW_GHZ = 0.5
BANDWIDTH_DROP_DB = 3.0


def _require_same_grid(spectra: Sequence[Spectrum]) -> None:
    first = spectra[0]
    for i, other in enumerate(spectra[1:], start=1):
        if not first.same_grid(other):
            raise GridMismatchError(f"spectrum {i} is on a different frequency grid than spectrum 0")


def background_from_max(spectra: Sequence[Spectrum]) -> Spectrum:
    """多个场下的频谱逐点取最大值作为背景."""
    if len(spectra) < 2:
        raise InvalidParameterError(f"background_from_max needs at least 2 spectra, got {len(spectra)}")
    _require_same_grid(spectra)
    stacked = np.vstack([s.values_db for s in spectra])
    return spectra[0].with_values(stacked.max(axis=0), field=None)


def background_interp(spectrum: Spectrum, gap_window: Tuple[float, float]) -> Spectrum:
    """带隙窗口内的值替换为连接窗口两端的直线."""
    lo, hi = float(gap_window[0]), float(gap_window[1])
    freqs = spectrum.freqs_ghz
    if not (freqs[0] <= lo < hi <= freqs[-1]):
        raise DomainError(f"gap window ({lo}, {hi}) GHz not inside spectrum span ({freqs[0]}, {freqs[-1]})")
    v_lo, v_hi = np.interp([lo, hi], freqs, spectrum.values_db)
    inside = (freqs >= lo) & (freqs <= hi)
    values = spectrum.values_db.copy()
    values[inside] = v_lo + (freqs[inside] - lo) * (v_hi - v_lo) / (hi - lo)
    return spectrum.with_values(values)


def gain_profile(pump_on: Spectrum, background: Spectrum) -> Spectrum:
    """逐点 dB 相减；任一侧低于噪声底的点记为噪声底标记."""
    _require_same_grid([pump_on, background])
    both = np.isfinite(pump_on.values_db) & np.isfinite(background.values_db)
    with np.errstate(invalid="ignore"):
        gain = np.where(both, pump_on.values_db - background.values_db, BELOW_NOISE_FLOOR)
    return pump_on.with_values(gain, quantity="gain")


def boxcar_smooth(freqs_ghz: np.ndarray, values: np.ndarray, window_ghz: float) -> np.ndarray:
    """
    频率窗口滑动平均.

    每点取 |f − f_i| ≤ window/2 内所有点的均值，边缘处窗口截断；
    非均匀网格同样适用。
    """
    freqs = np.asarray(freqs_ghz, dtype=float)
    values = np.asarray(values, dtype=float)
    half = window_ghz / 2.0
    left = np.searchsorted(freqs, freqs - half, side="left")
    right = np.searchsorted(freqs, freqs + half, side="right")
    csum = np.concatenate(([0.0], np.cumsum(values)))
    return (csum[right] - csum[left]) / (right - left)


def _crossing(f_in: float, f_out: float, v_in: float, v_out: float, level: float) -> float:
    if v_in == v_out:
        return f_in
    return f_in + (v_in - level) / (v_in - v_out) * (f_out - f_in)


def smooth_and_metrics(gain: Spectrum, window_ghz: float = DEFAULT_WINDOW_GHZ) -> GainMetrics:
    """
    平滑增益并计算指标.

    3 dB 带宽为包含 f_max、平滑增益 ≥ max − 3 dB 的连续区间 (端点线性插值)；
    gain_range 为该区间内原始增益的 max − min。
    """
    if not window_ghz > 0:
        raise InvalidParameterError(f"smoothing window must be > 0, got {window_ghz}")
    freqs = gain.freqs_ghz
    if freqs.size < 2 or gain.span_ghz <= window_ghz:
        raise DomainError(f"spectrum span {gain.span_ghz if freqs.size else 0:.3g} GHz must exceed the {window_ghz} GHz window")
    if not np.all(np.isfinite(gain.values_db)):
        raise InvalidParameterError("gain profile contains below-noise-floor points")

    raw = gain.values_db
    smooth = boxcar_smooth(freqs, raw, window_ghz)
    i_max = int(np.argmax(smooth))
    peak = float(smooth[i_max])
    level = peak - BANDWIDTH_DROP_DB

    lo = i_max
    while lo > 0 and smooth[lo - 1] >= level:
        lo -= 1
    hi = i_max
    while hi < freqs.size - 1 and smooth[hi + 1] >= level:
        hi += 1

    f_low = float(freqs[lo]) if lo == 0 else _crossing(freqs[lo], freqs[lo - 1], smooth[lo], smooth[lo - 1], level)
    f_high = (
        float(freqs[hi])
        if hi == freqs.size - 1
        else _crossing(freqs[hi], freqs[hi + 1], smooth[hi], smooth[hi + 1], level)
    )
    window = raw[lo : hi + 1]

    return GainMetrics(
        max_smooth_gain_db=peak,
        f_max_ghz=float(freqs[i_max]),
        bw_3db_ghz=float(f_high - f_low),
        gain_range_db=float(window.max() - window.min()),
        f_low_ghz=float(f_low),
        f_high_ghz=float(f_high),
    )


def batch_metrics(
    gains: Sequence[Spectrum],
    window_ghz: float = DEFAULT_WINDOW_GHZ,
    threads: int = 1,
) -> List[GainMetrics]:
    """多个场切片的指标，结果顺序与输入一致."""
    if threads <= 1:
        return [smooth_and_metrics(g, window_ghz) for g in gains]
    logger.debug(f"batch_metrics: {len(gains)} slices on {threads} threads")
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(lambda g: smooth_and_metrics(g, window_ghz), gains))
