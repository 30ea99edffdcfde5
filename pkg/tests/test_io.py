"""
配置与 CSV 读写测试 - Device Config / CSV I/O Tests.
"""

import json
import math
import os
import sys

sys.path.insert(0, os.path.join(os.path.dirname(__file__), "..", "src"))

import numpy as np
import pytest

from twpa_field.errors import InvalidParameterError, UsageError
from twpa_field.io.csv_io import (
    format_value,
    read_fg_datasets,
    read_gain_surface_rows,
    read_spectra,
    read_temperature_data,
    write_fg_dataset,
    write_rows,
    write_spectra,
)
from twpa_field.io.device_config import dump_device, list_presets, load_device, parse_device
from twpa_field.schemas import FgDataset, FieldAxis, FieldPoint, Spectrum, SpectrumKind


def test_presets():
    assert list_presets() == ["twpa_a", "twpa_b"]
    a = load_device("twpa_a")
    b = load_device("twpa_b")
    assert a.name == "twpa_a" and a.geometry.n_j == 1596 and a.geometry.n_p == 28
    assert b.geometry.n_j == 1800 and b.geometry.n_p == 33
    assert a.circuit.cj_ff == 500.0 and a.circuit.cg_ff == 38.0
    assert a.chi.chi == 0.668 and a.chi_for(FieldAxis.PAR2) == 0.668 and a.chi_par2 is None
    assert a.b_phi1_mt == 107.8 and a.b_phi2_mt == 4.55
    print(f"  ✓ presets: {list_presets()}")


def test_device_config_validation(tmp_path):
    payload = json.loads(dump_device(load_device("twpa_a")))
    payload["unknown_key"] = 1.0
    with pytest.raises(InvalidParameterError):
        parse_device(payload)

    payload.pop("unknown_key")
    payload["eta"] = 1.5
    with pytest.raises(InvalidParameterError):
        parse_device(payload)

    with pytest.raises(InvalidParameterError):
        parse_device("{not json")
    with pytest.raises(UsageError):
        load_device(tmp_path / "missing.json")


def test_device_dump_and_load(tmp_path):
    device = load_device("twpa_b").with_overrides(name="custom", fp0_ghz=19.5)
    path = tmp_path / "custom.json"
    path.write_text(dump_device(device), encoding="utf-8")
    assert load_device(path) == device
    assert "fp0_ghz" in json.loads(path.read_text(encoding="utf-8"))


def test_format_value():
    assert format_value(0.1 + 0.2) == "0.3"
    assert format_value(np.float64(23.0927)) == "23.0927"
    assert format_value(math.inf) == "inf"
    assert format_value("not-found") == "not-found"
    assert format_value(3) == "3"


def test_write_rows_layout(tmp_path):
    path = write_rows(tmp_path / "sub" / "t.csv", ["a", "b"], [[1.0, "x"], [2.5, "y"]], comments=["kind=simulated"])
    assert path.read_bytes() == b"# kind=simulated\na,b\n1,x\n2.5,y\n"


def test_spectra_write_read(tmp_path):
    freqs = np.array([2.0, 2.5, 3.0])
    spectra = [
        Spectrum(freqs, np.array([-1.0, -2.0, -3.0]), field=FieldPoint(FieldAxis.PAR2, b), kind=SpectrumKind.SIMULATED)
        for b in (0.0, 1.5)
    ]
    spectra[1].values_db[2] = -math.inf
    path = write_spectra(tmp_path / "s21.csv", spectra)
    lines = path.read_text(encoding="utf-8").splitlines()
    assert lines[0] == "# kind=simulated"
    assert lines[1] == "field_mT,freq_GHz,s21_dB"
    assert len(lines) == 2 + 6

    back = read_spectra(path, FieldAxis.PAR2)
    assert [s.field.b_mt for s in back] == [0.0, 1.5]
    assert all(s.kind is SpectrumKind.SIMULATED and s.quantity == "s21" for s in back)
    assert back[1].values_db[2] == -math.inf
    assert np.array_equal(back[0].freqs_ghz, freqs)


def test_read_spectra_errors(tmp_path):
    empty = tmp_path / "empty.csv"
    empty.write_text("", encoding="utf-8")
    with pytest.raises(InvalidParameterError):
        read_spectra(empty)

    no_value = tmp_path / "no_value.csv"
    no_value.write_text("field_mT,freq_GHz\n0,2\n", encoding="utf-8")
    with pytest.raises(InvalidParameterError):
        read_spectra(no_value)

    bad = tmp_path / "bad.csv"
    bad.write_text("field_mT,freq_GHz,s21_dB\n0,2,abc\n", encoding="utf-8")
    with pytest.raises(InvalidParameterError):
        read_spectra(bad)

    with pytest.raises(InvalidParameterError):
        read_spectra(tmp_path / "nope.csv")


def test_fg_datasets(tmp_path):
    single = FgDataset(np.array([0.0, 10.0, 20.0]), np.array([8.7, 8.6, 8.3]))
    back = read_fg_datasets(write_fg_dataset(tmp_path / "par1.csv", single))
    assert list(back) == [None]
    assert np.array_equal(back[None].fg_ghz, single.fg_ghz)

    sweeps = tmp_path / "perp.csv"
    sweeps.write_text(
        "field_mT,fg_GHz,sweep\n-1,8.5,up\n0,8.6,up\n1,8.7,up\n1,8.6,down\n0,8.7,down\n-1,8.6,Down\n",
        encoding="utf-8",
    )
    datasets = read_fg_datasets(sweeps, FieldAxis.PERP)
    assert set(datasets) == {"up", "down"}
    assert datasets["down"].axis is FieldAxis.PERP
    assert len(datasets["down"]) == 3


def test_temperature_and_surface_files(tmp_path):
    temps = tmp_path / "temps.csv"
    temps.write_text("temperature_K,fg_GHz\n0.05,8.7\n0.3,8.68\n", encoding="utf-8")
    t, fg = read_temperature_data(temps)
    assert t.tolist() == [0.05, 0.3] and fg.tolist() == [8.7, 8.68]

    surface = tmp_path / "surface.csv"
    surface.write_text(
        "f_pump_GHz,p_pump_dBm,freq_GHz,gain_dB\n8.0,-3,4.0,10\n8.0,-3,5.0,12\n", encoding="utf-8"
    )
    columns = read_gain_surface_rows(surface)
    assert len(columns) == 4 and columns[3].tolist() == [10.0, 12.0]

    header_only = tmp_path / "header_only.csv"
    header_only.write_text("temperature_K,fg_GHz\n", encoding="utf-8")
    with pytest.raises(InvalidParameterError):
        read_temperature_data(header_only)
