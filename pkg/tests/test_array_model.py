"""
阵列模型测试 - Array Model Tests.

使用随包发布的 TWPA A / TWPA B 预设。
"""

import math
import os
import sys
from dataclasses import replace

sys.path.insert(0, os.path.join(os.path.dirname(__file__), "..", "src"))

import numpy as np
import pytest

from twpa_field.errors import InvalidParameterError
from twpa_field.io.device_config import load_device
from twpa_field.physics.array_model import (
    bandgap_center,
    bandgap_center_vs_temperature,
    bandgap_edges,
    beta_critical,
    bphi_consistency,
    closing_fields,
    critical_current_factor,
    evaluate_field,
    gap_center_curve,
    impedance,
    modulated_arrays,
    perp_bandgap_model,
    plasma_frequency,
    plasma_frequency_vs_temperature,
    screening_length,
    zero_field_plasma_ghz,
)
from twpa_field.physics.fraunhofer import fraunhofer_zero
from twpa_field.schemas import FieldAxis, FieldPoint

TWPA_A = load_device("twpa_a")
TWPA_B = load_device("twpa_b")
UNIFORM_PAR2 = TWPA_A.with_overrides(chi_par2=0.0)
ZERO = FieldPoint(FieldAxis.PAR1, 0.0)


def test_zero_field_plasma():
    assert abs(zero_field_plasma_ghz(TWPA_A) - 23.093) < 5e-3
    assert abs(zero_field_plasma_ghz(TWPA_B) - 19.715) < 5e-3
    fitted = TWPA_A.with_overrides(fp0_ghz=23.0)
    assert zero_field_plasma_ghz(fitted) == 23.0
    print(f"  ✓ f_p(0): A={zero_field_plasma_ghz(TWPA_A):.3f}, B={zero_field_plasma_ghz(TWPA_B):.3f} GHz")


def test_modulated_arrays_period_means():
    arrays = modulated_arrays(TWPA_A)
    assert arrays.lj_ph.shape == (28,)
    assert abs(np.mean(1.0 / arrays.lj_ph) - 1.0 / 95.0) < 1e-12
    assert abs(np.mean(arrays.cj_ff) - 500.0) < 1e-9
    assert abs(np.mean(arrays.cg_ff) - 38.0) < 1e-9
    assert arrays.cj_ff.max() <= 500.0 * 1.05


def test_screening_length():
    assert abs(screening_length(TWPA_A.circuit) - 3.6274) < 1e-4


def test_bandgap_center_presets():
    center_a = bandgap_center(TWPA_A, ZERO)
    center_b = bandgap_center(TWPA_B, ZERO)
    assert abs(center_a - 8.7) < 0.05, center_a
    assert abs(center_b - 7.2) < 0.05, center_b
    assert abs(bandgap_center(TWPA_A.with_overrides(fp0_ghz=23.0), ZERO) - 8.670) < 5e-3

    second = bandgap_center(TWPA_A, ZERO, harmonic=2)
    g = 2.0 * math.pi / 28
    expected = zero_field_plasma_ghz(TWPA_A) * g / math.sqrt(g * g + 38.0 / 500.0)
    assert abs(second - expected) < 1e-12
    assert center_a < second < zero_field_plasma_ghz(TWPA_A)
    with pytest.raises(InvalidParameterError):
        bandgap_center(TWPA_A, ZERO, harmonic=3)
    print(f"  ✓ 带隙中心: A={center_a:.3f}, B={center_b:.3f} GHz, 二次谐波 {second:.2f} GHz")


def test_bandgap_edges_with_fitted_plasma():
    device = TWPA_A.with_overrides(fp0_ghz=23.0)
    edges = bandgap_edges(device, ZERO)
    assert abs(edges.lower_ghz - 8.49) < 0.01, edges
    assert abs(edges.upper_ghz - 8.86) < 0.01, edges
    assert edges.lower_ghz < bandgap_center(device, ZERO) < edges.upper_ghz
    assert edges.width_ghz > 0


def test_impedance():
    assert abs(impedance(TWPA_A, ZERO) - 50.0) < 0.5
    assert abs(impedance(TWPA_B, ZERO) - 67.7) < 0.5
    assert impedance(TWPA_A, FieldPoint(FieldAxis.PAR1, 240.0)) == math.inf
    assert impedance(TWPA_A, FieldPoint(FieldAxis.PAR1, 50.0)) > 50.0


def test_plasma_frequency_par1_decreases():
    fields = np.linspace(0.0, 100.0, 41)
    fp = [plasma_frequency(TWPA_A, FieldPoint(FieldAxis.PAR1, b)) for b in fields]
    assert abs(fp[0] - zero_field_plasma_ghz(TWPA_A)) < 1e-12
    assert np.all(np.diff(fp) < 0)
    assert plasma_frequency(TWPA_A, FieldPoint(FieldAxis.PAR1, 236.0)) == 0.0
    # 场的符号不影响
    assert plasma_frequency(TWPA_A, FieldPoint(FieldAxis.PAR1, -30.0)) == plasma_frequency(
        TWPA_A, FieldPoint(FieldAxis.PAR1, 30.0)
    )


def test_perpendicular_suppression():
    b = 10.3 * math.sqrt(0.75)
    field = FieldPoint(FieldAxis.PERP, b)
    factors = critical_current_factor(TWPA_A, field)
    assert np.allclose(factors, 0.25)
    assert abs(plasma_frequency(TWPA_A, field) - 0.5 * zero_field_plasma_ghz(TWPA_A)) < 1e-9
    assert plasma_frequency(TWPA_A, FieldPoint(FieldAxis.PERP, 11.0)) == 0.0

    assert perp_bandgap_model(1.2, 8.7, 1.2, 10.3) == 8.7
    assert perp_bandgap_model(20.0, 8.7, 0.0, 10.3) == 0.0
    with pytest.raises(InvalidParameterError):
        perp_bandgap_model(0.0, 8.7, 0.0, 0.0)


def test_beta_critical():
    assert abs(beta_critical(TWPA_A) - (-0.716)) < 0.002


def test_closing_fields():
    # χ∥2 = 0 (均匀电流) 时的参考值
    closing = closing_fields(UNIFORM_PAR2)
    assert [c.n for c in closing] == [0, 1, 2, 3]
    first = closing[0]
    assert first.exact_mt is not None
    assert abs(first.exact_mt - 2.79) < 0.01, first
    assert abs(first.approximate_mt - 2.94) < 0.01, first

    diffs = [abs(c.approximate_mt - c.exact_mt) for c in closing]
    assert all(a > b for a, b in zip(diffs, diffs[1:])), diffs

    # 在闭合场处两边缘重合
    for c in closing:
        width = bandgap_edges(UNIFORM_PAR2, FieldPoint(FieldAxis.PAR2, c.exact_mt)).width_ghz
        assert abs(width) < 1e-9, (c, width)
    assert bandgap_edges(UNIFORM_PAR2, FieldPoint(FieldAxis.PAR2, 1.0)).width_ghz > 0.1

    with pytest.raises(InvalidParameterError):
        closing_fields(TWPA_A, n_max=0)
    print(f"  ✓ 闭合场 n=0: exact {first.exact_mt:.3f} mT, approx {first.approximate_mt:.3f} mT")


def test_closing_fields_use_device_chi():
    """预设不覆盖 χ∥2: 闭合场按 χ = 0.668 求解，且带隙在该场处闭合."""
    assert TWPA_A.chi_par2 is None
    closing = closing_fields(TWPA_A)
    first = closing[0]
    assert first.exact_mt is not None
    first_zero_mt = fraunhofer_zero(1, 0.668) * 4.55 / math.pi
    assert 0.0 < first.exact_mt < first_zero_mt, (first, first_zero_mt)
    assert abs(first.exact_mt - closing_fields(UNIFORM_PAR2)[0].exact_mt) > 1e-3
    for c in closing:
        if c.exact_mt is None:
            continue
        width = bandgap_edges(TWPA_A, FieldPoint(FieldAxis.PAR2, c.exact_mt)).width_ghz
        assert abs(width) < 1e-9, (c, width)


def test_par2_fraunhofer_zero_closes_at_zero_frequency():
    zero_field = 4.55  # y = π，χ∥2 = 0 时 sinc 零点
    edges = bandgap_edges(UNIFORM_PAR2, FieldPoint(FieldAxis.PAR2, zero_field))
    assert edges.lower_ghz == 0.0 and edges.upper_ghz == 0.0

    zero_field = fraunhofer_zero(1, 0.668) * 4.55 / math.pi
    edges = bandgap_edges(TWPA_A, FieldPoint(FieldAxis.PAR2, zero_field))
    assert edges.lower_ghz == 0.0 and edges.upper_ghz == 0.0


def test_par1_gap_tracks_plasma_frequency():
    fields = np.linspace(0.0, 230.0, 47)
    fg0 = bandgap_center(TWPA_A, ZERO)
    fp0 = plasma_frequency(TWPA_A, ZERO)
    for b in fields:
        field = FieldPoint(FieldAxis.PAR1, b)
        fg_ratio = bandgap_edges(TWPA_A, field).center_ghz / bandgap_edges(TWPA_A, ZERO).center_ghz
        assert abs(fg_ratio - plasma_frequency(TWPA_A, field) / fp0) < 1e-12, b
        assert abs(bandgap_center(TWPA_A, field) / fg0 - fg_ratio) < 1e-12, b


def test_par1_impedance_scaling():
    """Z·√(I_c(B)/I_c(0)) 与场无关."""
    z0 = impedance(TWPA_A, ZERO)
    for b in np.linspace(5.0, 200.0, 40):
        field = FieldPoint(FieldAxis.PAR1, b)
        factor = float(critical_current_factor(TWPA_A, field)[0])
        if factor < 1e-6:
            continue
        assert abs(impedance(TWPA_A, field) * math.sqrt(factor) / z0 - 1.0) < 1e-9, b


def test_unmodulated_edges_coincide():
    flat = TWPA_A.with_overrides(geometry=replace(TWPA_A.geometry, eta=0.0))
    for field in (ZERO, FieldPoint(FieldAxis.PAR1, 60.0), FieldPoint(FieldAxis.PAR2, 1.5), FieldPoint(FieldAxis.PERP, 5.0)):
        edges = bandgap_edges(flat, field)
        assert edges.lower_ghz == edges.upper_ghz, (field, edges)
        assert abs(edges.center_ghz - bandgap_center(flat, field)) < 1e-12 * edges.center_ghz, (field, edges)

def test_gap_center_curve_matches_pointwise():
    fields = np.linspace(-150.0, 150.0, 31)
    curve = gap_center_curve(TWPA_A, FieldAxis.PAR1, fields)
    pointwise = [bandgap_edges(TWPA_A, FieldPoint(FieldAxis.PAR1, b)).center_ghz for b in fields]
    assert np.allclose(curve, pointwise, rtol=0, atol=1e-12)


def test_bphi_consistency():
    deviation = bphi_consistency(TWPA_A)
    assert abs(deviation - (-0.035)) < 0.002, deviation
    assert abs(deviation) < 0.05


def test_temperature_dependence():
    ratio = bandgap_center_vs_temperature(TWPA_A, 0.3) / bandgap_center(TWPA_A, ZERO)
    assert abs(ratio - 0.99808) < 5e-4
    assert abs(bandgap_center_vs_temperature(TWPA_A, 0.6) / bandgap_center(TWPA_A, ZERO) - 0.975) < 2e-3
    assert plasma_frequency_vs_temperature(TWPA_A, 1.5) == 0.0
    temps = np.array([0.05, 0.3, 0.6, 0.9])
    assert np.all(np.diff(plasma_frequency_vs_temperature(TWPA_A, temps)) < 0)


def test_evaluate_field_row():
    row = evaluate_field(TWPA_A, FieldPoint(FieldAxis.PAR1, 50.0))
    assert row.b_mt == 50.0
    assert 0 < row.fg_minus_ghz < row.fg_plus_ghz < row.fp_ghz
    assert row.width_ghz > 0
    assert row.z_ohm > 50.0
