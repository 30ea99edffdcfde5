"""
增益指标与泵浦优化测试 - Gain Pipeline Tests.
"""

import math
import os
import sys

sys.path.insert(0, os.path.join(os.path.dirname(__file__), "..", "src"))

import numpy as np
import pytest
from scipy.optimize import brentq

from twpa_field.errors import DomainError, GridMismatchError, InvalidParameterError, PumpEvaluationError
from twpa_field.gain.pipeline import (
    background_from_max,
    background_interp,
    batch_metrics,
    boxcar_smooth,
    gain_profile,
    smooth_and_metrics,
)
from twpa_field.gain.pump import GainSurface, optimize_pump, optimum_power_trend
from twpa_field.io.device_config import load_device
from twpa_field.protocols.registry import GainEvaluator
from twpa_field.schemas import BELOW_NOISE_FLOOR, FieldAxis, FieldPoint, GainMetrics, PumpSetting, Spectrum
from twpa_field.simulation.abcd import abcd_cascade

FREQS = np.round(np.arange(4.0, 12.0 + 1e-9, 0.005), 6)


def _gaussian(freqs, amplitude, center, sigma):
    return amplitude * np.exp(-0.5 * ((freqs - center) / sigma) ** 2)


def _smoothed_gaussian(f, amplitude, center, sigma, window):
    """Gaussian 的 boxcar 平均 (解析)."""
    half = window / 2.0
    scale = amplitude * sigma * math.sqrt(2.0 * math.pi) / window / 2.0
    s2 = sigma * math.sqrt(2.0)
    return scale * (math.erf((f - center + half) / s2) - math.erf((f - center - half) / s2))


class QuadraticGain:
    """峰值在 (8.2 GHz, −2 dBm) 的解析增益曲面."""

    def __init__(self):
        self.calls = 0

    def evaluate(self, setting: PumpSetting) -> GainMetrics:
        self.calls += 1
        peak = 20.0 - 40.0 * (setting.f_pump_ghz - 8.2) ** 2 - 0.5 * (setting.p_pump_dbm + 2.0) ** 2
        return GainMetrics(max_smooth_gain_db=peak, f_max_ghz=setting.f_pump_ghz, bw_3db_ghz=1.0, gain_range_db=1.0)


class FlatGain:
    def evaluate(self, setting: PumpSetting) -> GainMetrics:
        return GainMetrics(max_smooth_gain_db=15.0, f_max_ghz=8.0, bw_3db_ghz=1.0, gain_range_db=0.5)


class BrokenGain:
    def evaluate(self, setting: PumpSetting) -> GainMetrics:
        raise RuntimeError("instrument timeout")


# =============================================================================
# 背景与增益曲线
# =============================================================================

def test_background_from_max():
    a = Spectrum(FREQS, np.where(FREQS < 8.0, -1.0, -5.0))
    b = Spectrum(FREQS, np.where(FREQS < 8.0, -4.0, -2.0))
    background = background_from_max([a, b])
    assert np.all(background.values_db == np.where(FREQS < 8.0, -1.0, -2.0))

    with pytest.raises(InvalidParameterError):
        background_from_max([a])
    with pytest.raises(GridMismatchError):
        background_from_max([a, Spectrum(FREQS[:-1], b.values_db[:-1])])


def test_background_from_max_removes_first_lobe_gaps():
    """三个第一瓣场下的仿真 S21 取最大值后，带隙凹陷不超过 1 dB."""
    device = load_device("twpa_a")
    spectra = [abcd_cascade(device, FieldPoint(FieldAxis.PAR1, b), FREQS).s21 for b in (0.0, 40.0, 70.0)]
    assert spectra[0].values_db.min() < -20.0, "zero-field gap dip"

    background = background_from_max(spectra).values_db
    reference = float(np.median(background))
    assert abs(reference) < 1.0
    assert reference - background.min() <= 1.0, (reference, background.min(), FREQS[np.argmin(background)])
    print(f"  ✓ 背景最深残余凹陷 {reference - background.min():.2f} dB")


def test_background_interp():
    values = np.where((FREQS > 8.4) & (FREQS < 8.9), -40.0, 0.5 * (FREQS - 4.0))
    background = background_interp(Spectrum(FREQS, values), (8.3, 9.0))
    inside = (FREQS >= 8.3) & (FREQS <= 9.0)
    assert np.allclose(background.values_db[inside], 0.5 * (FREQS[inside] - 4.0), atol=1e-9)
    assert np.array_equal(background.values_db[~inside], values[~inside])

    with pytest.raises(DomainError):
        background_interp(Spectrum(FREQS, values), (3.0, 5.0))


def test_gain_profile():
    on = Spectrum(FREQS, np.full(FREQS.size, -10.0))
    off_values = np.full(FREQS.size, -30.0)
    off_values[5] = BELOW_NOISE_FLOOR
    gain = gain_profile(on, Spectrum(FREQS, off_values))
    assert gain.quantity == "gain"
    assert gain.values_db[0] == 20.0
    assert gain.values_db[5] == BELOW_NOISE_FLOOR
    with pytest.raises(GridMismatchError):
        gain_profile(on, Spectrum(FREQS + 0.001, off_values))


# =============================================================================
# 平滑与指标
# =============================================================================

def test_boxcar_smooth():
    values = np.sin(FREQS) * 3.0
    smooth = boxcar_smooth(FREQS, values, 0.5)
    assert smooth.shape == values.shape
    assert np.all(smooth <= values.max() + 1e-12) and np.all(smooth >= values.min() - 1e-12)
    assert np.allclose(boxcar_smooth(FREQS, np.full(FREQS.size, 7.0), 0.5), 7.0)
    # 边缘处窗口截断: 第一个点只平均右半窗口
    expected_first = values[FREQS <= FREQS[0] + 0.25].mean()
    assert abs(smooth[0] - expected_first) < 1e-12


def test_flat_gain():
    metrics = smooth_and_metrics(Spectrum(FREQS, np.full(FREQS.size, 20.0), quantity="gain"))
    assert abs(metrics.max_smooth_gain_db - 20.0) < 1e-9
    assert abs(metrics.bw_3db_ghz - 8.0) < 1e-9
    assert metrics.gain_range_db == 0.0


def test_gaussian_gain_oracle():
    amplitude, center, sigma, window = 20.0, 8.0, 0.4, 0.5
    gain = Spectrum(FREQS, _gaussian(FREQS, amplitude, center, sigma), quantity="gain")
    metrics = smooth_and_metrics(gain, window)

    peak = _smoothed_gaussian(center, amplitude, center, sigma, window)
    half_bw = brentq(lambda d: _smoothed_gaussian(center + d, amplitude, center, sigma, window) - (peak - 3.0), 0.0, 2.0)
    assert abs(metrics.max_smooth_gain_db - peak) / peak < 0.01, (metrics, peak)
    assert abs(metrics.bw_3db_ghz - 2.0 * half_bw) / (2.0 * half_bw) < 0.1, (metrics, 2.0 * half_bw)
    assert abs(metrics.f_max_ghz - center) < 0.01
    assert metrics.f_low_ghz < center < metrics.f_high_ghz
    print(f"  ✓ Gaussian: G={metrics.max_smooth_gain_db:.2f} dB, BW={metrics.bw_3db_ghz:.3f} GHz")


def test_metrics_stable_under_grid_refinement():
    amplitude, center, sigma = 20.0, 8.0, 0.4
    coarse_step = 0.01
    results = []
    for factor in (1, 2, 4):
        step = coarse_step / factor
        freqs = np.round(np.arange(4.0, 12.0 + 1e-9, step), 6)
        gain = Spectrum(freqs, _gaussian(freqs, amplitude, center, sigma), quantity="gain")
        results.append(smooth_and_metrics(gain, 0.5))
    base = results[0]
    for refined in results[1:]:
        assert abs(refined.max_smooth_gain_db - base.max_smooth_gain_db) < 0.1, (base, refined)
        assert abs(refined.bw_3db_ghz - base.bw_3db_ghz) <= coarse_step, (base, refined)
        assert abs(refined.f_max_ghz - base.f_max_ghz) <= coarse_step, (base, refined)


def test_two_bumps_keep_contiguous_band():
    values = _gaussian(FREQS, 20.0, 6.0, 0.3) + _gaussian(FREQS, 18.5, 10.0, 0.3)
    metrics = smooth_and_metrics(Spectrum(FREQS, values, quantity="gain"))
    single = smooth_and_metrics(Spectrum(FREQS, _gaussian(FREQS, 20.0, 6.0, 0.3), quantity="gain"))
    assert abs(metrics.f_max_ghz - 6.0) < 0.01
    assert metrics.f_high_ghz < 8.0
    assert abs(metrics.bw_3db_ghz - single.bw_3db_ghz) < 1e-6


def test_metrics_errors():
    short = Spectrum(np.array([8.0, 8.1, 8.2]), np.zeros(3), quantity="gain")
    with pytest.raises(DomainError):
        smooth_and_metrics(short, 0.5)
    with pytest.raises(InvalidParameterError):
        smooth_and_metrics(Spectrum(FREQS, np.zeros(FREQS.size)), 0.0)
    values = np.zeros(FREQS.size)
    values[10] = BELOW_NOISE_FLOOR
    with pytest.raises(InvalidParameterError):
        smooth_and_metrics(Spectrum(FREQS, values))


def test_batch_metrics_threads_match_serial():
    gains = [Spectrum(FREQS, _gaussian(FREQS, a, 8.0, 0.4), quantity="gain") for a in (10.0, 15.0, 20.0, 25.0)]
    serial = batch_metrics(gains)
    threaded = batch_metrics(gains, threads=4)
    assert [m.to_dict() for m in serial] == [m.to_dict() for m in threaded]


# =============================================================================
# 泵浦优化
# =============================================================================

def test_optimize_pump_quadratic():
    evaluator = QuadraticGain()
    assert isinstance(evaluator, GainEvaluator)
    outcome = optimize_pump(evaluator, PumpSetting(8.0, -3.0))
    assert abs(outcome.best.f_pump_ghz - 8.2) < 0.01, outcome.best
    assert abs(outcome.best.p_pump_dbm + 2.0) < 0.1, outcome.best
    assert outcome.improved
    assert outcome.metrics.max_smooth_gain_db > outcome.start_metrics.max_smooth_gain_db
    assert set(outcome.to_dict()) == {"best", "metrics", "start", "start_metrics", "improved", "iterations", "converged"}
    print(f"  ✓ 泵浦最优 {outcome.best.f_pump_ghz:.4f} GHz / {outcome.best.p_pump_dbm:.3f} dBm")


def test_optimize_pump_respects_bandgap_window():
    outcome = optimize_pump(QuadraticGain(), PumpSetting(7.95, -3.0), fg_estimate_ghz=8.0, halfwidth_ghz=0.1)
    assert 7.9 <= outcome.best.f_pump_ghz <= 8.1 + 1e-9


def test_optimize_pump_flat_surface():
    outcome = optimize_pump(FlatGain(), PumpSetting(8.0, -3.0))
    assert not outcome.improved
    assert outcome.metrics.max_smooth_gain_db == 15.0


def test_optimize_pump_evaluation_failure():
    with pytest.raises(PumpEvaluationError) as info:
        optimize_pump(BrokenGain(), PumpSetting(8.0, -3.0))
    assert info.value.setting == PumpSetting(8.0, -3.0)


def test_optimum_power_trend():
    slope, intercept = optimum_power_trend([7.0, 8.0, 9.0], [-5.0, -3.0, -1.0])
    assert abs(slope - 2.0) < 1e-12
    assert abs(intercept + 19.0) < 1e-9
    with pytest.raises(InvalidParameterError):
        optimum_power_trend([8.0, 8.0], [-3.0, -2.0])


def test_gain_surface():
    f_grid, p_grid = [8.0, 8.1, 8.2], [-4.0, -3.0, -2.0]
    rows = []
    for fp in f_grid:
        for pp in p_grid:
            amplitude = 20.0 - 100.0 * (fp - 8.1) ** 2 - (pp + 3.0) ** 2
            for f, g in zip(FREQS, _gaussian(FREQS, amplitude, 6.0, 0.5)):
                rows.append((fp, pp, f, g))
    columns = [np.array(c) for c in zip(*rows)]
    surface = GainSurface.from_arrays(*columns)

    assert len(surface.settings) == 9
    assert surface.settings[surface.nearest(PumpSetting(8.09, -3.2))] == PumpSetting(8.1, -3.0)
    best = surface.evaluate(PumpSetting(8.1, -3.0))
    assert surface.evaluate(PumpSetting(8.11, -2.9)) is best, "metrics are cached per grid node"

    outcome = optimize_pump(surface, PumpSetting(8.0, -4.0))
    assert outcome.metrics.max_smooth_gain_db >= outcome.start_metrics.max_smooth_gain_db
    assert outcome.metrics.max_smooth_gain_db <= best.max_smooth_gain_db + 1e-12

    with pytest.raises(InvalidParameterError):
        GainSurface(settings=[], gains=[])
