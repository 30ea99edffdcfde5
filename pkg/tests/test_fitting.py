"""
拟合测试 - Optimizer and Fit Recipe Tests.

合成数据由模型本身生成，验证参数回收。
"""

import math
import os
import sys

sys.path.insert(0, os.path.join(os.path.dirname(__file__), "..", "src"))

import numpy as np
import pytest

from twpa_field.errors import IllPosedFitError, InvalidParameterError
from twpa_field.fitting.optimizer import NelderMeadOptions, initial_simplex, nelder_mead
from twpa_field.fitting.recipes import (
    fit_bandgap_par1,
    fit_perp_hysteresis,
    fit_temperature,
    model_comparison_gl_vs_ag,
)
from twpa_field.io.device_config import load_device
from twpa_field.physics.array_model import gap_center_curve, perp_bandgap_model
from twpa_field.physics.gap import gap_vs_temperature
from twpa_field.schemas import FgDataset, FieldAxis, GapModelKind

TWPA_A = load_device("twpa_a")
TRUE_PAR1 = {"fp0_ghz": 23.0, "chi": 0.668, "b_phi1_mt": 107.8}


def _par1_data(n: int = 401, noise: float = 0.0, seed: int = 1, gap_model=GapModelKind.AG_INTERP, **true) -> FgDataset:
    params = {**TRUE_PAR1, **true}
    device = TWPA_A.with_overrides(**params)
    fields = np.linspace(0.0, 220.0, n)
    fg = gap_center_curve(device, FieldAxis.PAR1, fields, gap_model)
    if noise:
        fg = fg * (1.0 + noise * np.random.default_rng(seed).standard_normal(n))
    # Fraunhofer 零点处 f_g = 0，数据集要求 f_g > 0
    keep = fg > 1e-3
    return FgDataset(fields[keep], fg[keep], axis=FieldAxis.PAR1)


# =============================================================================
# Nelder-Mead
# =============================================================================

def test_quadratic_bowl():
    result = nelder_mead(lambda x: (x[0] - 1.0) ** 2 + 2.0 * (x[1] + 3.0) ** 2, [2.0, 1.0], names=["a", "b"])
    assert result.converged
    assert abs(result.params["a"] - 1.0) < 1e-4
    assert abs(result.params["b"] + 3.0) < 1e-4
    assert result.residual_norm < 1e-8
    print(f"  ✓ 二次碗: {result.iterations} 次迭代")


def test_rosenbrock():
    def rosenbrock(x):
        return (1.0 - x[0]) ** 2 + 100.0 * (x[1] - x[0] ** 2) ** 2

    result = nelder_mead(rosenbrock, [-1.2, 1.0])
    assert result.converged
    assert abs(result.params["x0"] - 1.0) < 1e-3
    assert abs(result.params["x1"] - 1.0) < 1e-3


def test_non_smooth_objective():
    result = nelder_mead(lambda x: abs(x[0] - 2.0) + abs(x[1] + 1.0), [0.5, 0.5])
    assert abs(result.params["x0"] - 2.0) < 1e-3
    assert abs(result.params["x1"] + 1.0) < 1e-3


def test_history_is_monotone():
    result = nelder_mead(lambda x: (x[0] - 4.0) ** 2 + (x[1] - 1.0) ** 2 + 0.5, [0.0, 0.0])
    assert result.history, "callback should record every iteration"
    assert all(b <= a for a, b in zip(result.history, result.history[1:]))
    assert min(result.history) >= result.residual_norm - 1e-12
    assert abs(result.residual_norm - 0.5) < 1e-8


def test_non_finite_objective():
    with pytest.raises(InvalidParameterError):
        nelder_mead(lambda x: math.nan, [1.0])

    def walled(x):
        return (x[0] - 3.0) ** 2 if x[0] < 5.0 else math.nan

    result = nelder_mead(walled, [4.0])
    assert abs(result.params["x0"] - 3.0) < 1e-4
    assert result.converged


def test_restarts_only_improve():
    """从最优点重启: 结果不劣于单次运行，迭代总数受 max_iter 约束."""
    def valley(x):
        return (x[0] - 1.0) ** 2 + 1e4 * (x[1] - x[0] ** 3) ** 2 + 0.1 * (x[2] - 2.0) ** 2

    single = nelder_mead(valley, [-1.0, 2.0, 0.5], NelderMeadOptions(max_restarts=0))
    restarted = nelder_mead(valley, [-1.0, 2.0, 0.5], NelderMeadOptions(max_restarts=5))
    assert restarted.residual_norm <= single.residual_norm
    assert restarted.iterations >= single.iterations
    assert len(restarted.history) >= len(single.history)
    assert all(b <= a for a, b in zip(restarted.history, restarted.history[1:]))

    capped = nelder_mead(valley, [-1.0, 2.0, 0.5], NelderMeadOptions(max_iter=50, max_restarts=10))
    assert capped.iterations <= 50


def test_options_and_names():
    simplex = initial_simplex(np.array([2.0, 0.0]), NelderMeadOptions(initial_step=0.1, zero_step=0.5))
    assert simplex.shape == (3, 2)
    assert np.allclose(simplex[1], [2.2, 0.0]) and np.allclose(simplex[2], [2.0, 0.5])

    capped = nelder_mead(lambda x: (x[0] - 1.0) ** 2 + (x[1] - 2.0) ** 2, [10.0, 10.0], NelderMeadOptions(max_iter=3))
    assert not capped.converged
    assert capped.iterations <= 3
    with pytest.raises(InvalidParameterError):
        nelder_mead(lambda x: 0.0, [1.0, 2.0], names=["only"])


# =============================================================================
# ∥1 带隙拟合
# =============================================================================

def test_par1_noise_free_recovery():
    data = _par1_data()
    result = fit_bandgap_par1(data, TWPA_A, x0=(22.0, 0.6, 100.0))
    for name, true in TRUE_PAR1.items():
        assert abs(result.params[name] / true - 1.0) < 1e-3, (name, result.params)
    print(f"  ✓ ∥1 无噪声回收: {result.params}")


def test_par1_noisy_recovery():
    """1% 噪声下三个参数都在 1% 内."""
    data = _par1_data(n=1601, noise=0.01, seed=7)
    result = fit_bandgap_par1(data, TWPA_A, x0=(22.0, 0.6, 100.0))
    for name, true in TRUE_PAR1.items():
        assert abs(result.params[name] / true - 1.0) < 0.01, (name, result.params)


def test_par1_random_devices():
    rng = np.random.default_rng(11)
    for _ in range(50):
        true = {
            "fp0_ghz": float(rng.uniform(15.0, 30.0)),
            "chi": float(rng.uniform(0.3, 1.2)),
            "b_phi1_mt": float(rng.uniform(80.0, 140.0)),
        }
        data = _par1_data(n=121, **true)
        x0 = [v * (1.0 + 0.03 * s) for v, s in zip(true.values(), rng.choice([-1.0, 1.0], size=3))]
        result = fit_bandgap_par1(data, TWPA_A, x0=x0)
        assert result.converged, (true, result.message)
        for name, value in true.items():
            assert abs(result.params[name] / value - 1.0) < 1e-3, (name, true, result.params)


def test_par1_random_noisy_devices():
    """≤ 1% 噪声、默认初始值: 参数误差不超过噪声水平的 5 倍."""
    rng = np.random.default_rng(29)
    for trial in range(50):
        true = {
            "fp0_ghz": float(rng.uniform(18.0, 28.0)),
            "chi": float(rng.uniform(0.45, 0.9)),
            "b_phi1_mt": float(rng.uniform(96.0, 120.0)),
        }
        noise = float(rng.uniform(0.002, 0.01))
        data = _par1_data(noise=noise, seed=trial, **true)
        result = fit_bandgap_par1(data, TWPA_A)
        for name, value in true.items():
            assert abs(result.params[name] / value - 1.0) < 5.0 * noise, (name, noise, true, result.params)


def test_par1_ill_posed():
    with pytest.raises(IllPosedFitError):
        fit_bandgap_par1(FgDataset([0.0, 10.0], [8.7, 8.6]), TWPA_A)


def test_gl_vs_ag():
    data = _par1_data(n=221)
    comparison = model_comparison_gl_vs_ag(data, TWPA_A, x0=(22.0, 0.6, 100.0))
    assert comparison.ag_better
    assert comparison.residual_ratio > 1.0
    assert set(comparison.to_dict()) == {"ag", "gl", "ag_better"}


def test_gl_vs_ag_first_lobe_only():
    """第一瓣内 α ≤ 0.15，两种能隙模型几乎重合，残差相当."""
    data = _par1_data(n=181, noise=0.01, seed=3)
    first_lobe = data.fields_mt <= 90.0
    data = FgDataset(data.fields_mt[first_lobe], data.fg_ghz[first_lobe], axis=FieldAxis.PAR1)
    comparison = model_comparison_gl_vs_ag(data, TWPA_A, x0=(22.0, 0.6, 100.0))
    assert comparison.ag.converged and comparison.gl.converged
    assert 0.5 < comparison.residual_ratio < 2.0, comparison.to_dict()


# =============================================================================
# ⊥ 磁滞
# =============================================================================

def _perp_sweeps(offset: float = 1.2):
    fields = np.arange(-9.0, 9.0 + 1e-9, 0.25)
    up = FgDataset(fields, perp_bandgap_model(fields, 8.7, offset, 10.3), axis=FieldAxis.PERP, sweep="up")
    down_fields = fields[::-1]
    down = FgDataset(
        down_fields, perp_bandgap_model(down_fields, 8.7, -offset, 10.3), axis=FieldAxis.PERP, sweep="down"
    )
    return up, down


def test_perp_hysteresis_offsets():
    up, down = _perp_sweeps()
    result = fit_perp_hysteresis(up, down)
    assert abs(result.params["offset_difference_mt"] - 2.4) / 2.4 < 0.02, result.params
    assert abs(result.params["fg0_ghz"] - 8.7) < 1e-3
    assert abs(result.params["bc_perp_mt"] - 10.3) < 1e-2
    print(f"  ✓ ⊥ 磁滞: ΔB = {result.params['offset_difference_mt']:.3f} mT")


def test_perp_requires_overlap():
    up = FgDataset(np.linspace(0.0, 5.0, 6), np.full(6, 8.0), axis=FieldAxis.PERP, sweep="up")
    down = FgDataset(np.linspace(15.0, 10.0, 6), np.full(6, 8.0), axis=FieldAxis.PERP, sweep="down")
    with pytest.raises(IllPosedFitError):
        fit_perp_hysteresis(up, down)
    with pytest.raises(IllPosedFitError):
        fit_perp_hysteresis(FgDataset([0.0, 1.0], [8.0, 8.0]), down)


# =============================================================================
# 温度
# =============================================================================

def test_temperature_fit():
    temps = np.linspace(0.05, 1.1, 30)
    fg = 8.7 * np.sqrt(gap_vs_temperature(temps, 1.27))
    result = fit_temperature(temps, fg)
    assert abs(result.params["fg0_ghz"] / 8.7 - 1.0) < 1e-3
    assert result.params["tc_k"] == 1.27

    free = fit_temperature(temps, fg, tc_k=1.2, fit_tc=True)
    assert abs(free.params["tc_k"] / 1.27 - 1.0) < 0.01, free.params
    assert abs(free.params["fg0_ghz"] / 8.7 - 1.0) < 1e-3


def test_temperature_drops_points_above_tc():
    temps = np.array([0.1, 0.4, 0.8, 1.0, 1.4])
    fg = np.append(8.7 * np.sqrt(gap_vs_temperature(temps[:-1], 1.27)), 0.5)
    result = fit_temperature(temps, fg)
    assert abs(result.params["fg0_ghz"] / 8.7 - 1.0) < 1e-3

    with pytest.raises(IllPosedFitError):
        fit_temperature([1.3, 1.5], [1.0, 1.0])
    with pytest.raises(InvalidParameterError):
        fit_temperature([0.1, 0.2], [8.0])
