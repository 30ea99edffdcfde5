"""
CSV 读写 - Spectrum / Dataset CSV I/O.

格式约定: 逗号分隔、`.` 小数点、LF 换行、必须有表头；`#` 开头的行为注释，
模拟输出带 `# kind=simulated` 注释行。浮点数以 `.10g` 输出。

文件格式:
- 频谱: field_mT,freq_GHz,<quantity>_dB (s21_dB / s11_dB / gain_dB)
- 带隙数据: field_mT,fg_GHz[,sweep]
- 温度数据: temperature_K,fg_GHz
- 增益曲面: f_pump_GHz,p_pump_dBm,freq_GHz,gain_dB
"""

from __future__ import annotations

import csv
from pathlib import Path
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

import numpy as np
from loguru import logger

from twpa_field.errors import InvalidParameterError
from twpa_field.schemas import FgDataset, FieldAxis, FieldPoint, Spectrum, SpectrumKind

KIND_COMMENT = "# kind="


def format_value(value: object) -> str:
    if isinstance(value, (float, np.floating)):
        return format(float(value), ".10g")
    return str(value)


def write_rows(
    path: Path,
    header: Sequence[str],
    rows: Iterable[Sequence[object]],
    comments: Sequence[str] = (),
) -> Path:
    """写 CSV (注释行在表头之前)."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", newline="", encoding="utf-8") as f:
        for comment in comments:
            f.write(f"# {comment}\n")
        writer = csv.writer(f, lineterminator="\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow([format_value(v) for v in row])
    return path


def _read_table(path: Path) -> Tuple[List[str], List[Dict[str, str]], List[str]]:
    """返回 (表头, 行, 注释)."""
    path = Path(path)
    if not path.is_file():
        raise InvalidParameterError(f"file not found: {path}")
    comments: List[str] = []
    lines: List[str] = []
    with path.open("r", encoding="utf-8") as f:
        for line in f:
            if line.startswith("#"):
                comments.append(line.strip())
            elif line.strip():
                lines.append(line)
    if not lines:
        raise InvalidParameterError(f"{path} has no header row")
    reader = csv.DictReader(lines)
    rows = list(reader)
    return list(reader.fieldnames or []), rows, comments


def _require_columns(path: Path, header: Sequence[str], required: Sequence[str]) -> None:
    missing = [c for c in required if c not in header]
    if missing:
        raise InvalidParameterError(f"{path}: missing column(s) {missing}, got {list(header)}")


def _float(path: Path, row: Dict[str, str], column: str) -> float:
    try:
        return float(row[column])
    except (TypeError, ValueError) as exc:
        raise InvalidParameterError(f"{path}: bad value {row.get(column)!r} in column {column}") from exc


# =============================================================================
# 频谱
# =============================================================================

def write_spectra(path: Path, spectra: Sequence[Spectrum]) -> Path:
    """多个场下同一物理量的频谱写入一个文件，按输入顺序."""
    if not spectra:
        raise InvalidParameterError("no spectra to write")
    quantity = spectra[0].quantity
    comments = ["kind=simulated"] if spectra[0].kind is SpectrumKind.SIMULATED else []
    rows = (
        (s.field.b_mt if s.field is not None else 0.0, f, v)
        for s in spectra
        for f, v in zip(s.freqs_ghz, s.values_db)
    )
    return write_rows(path, ["field_mT", "freq_GHz", f"{quantity}_dB"], rows, comments)


def read_spectra(path: Path, axis: FieldAxis = FieldAxis.PAR1) -> List[Spectrum]:
    """
    读取频谱文件，按 field_mT 分组 (保持出现顺序).

    值列为第一个以 `_dB` 结尾的列，其前缀作为物理量名。
    """
    header, rows, comments = _read_table(path)
    _require_columns(path, header, ["field_mT", "freq_GHz"])
    value_columns = [c for c in header if c.endswith("_dB")]
    if not value_columns:
        raise InvalidParameterError(f"{path}: no *_dB value column in {header}")
    column = value_columns[0]
    quantity = column[: -len("_dB")]
    kind = SpectrumKind.MEASURED
    for comment in comments:
        if comment.startswith(KIND_COMMENT):
            kind = SpectrumKind(comment[len(KIND_COMMENT):].strip())

    groups: Dict[float, List[Tuple[float, float]]] = {}
    for row in rows:
        b = _float(path, row, "field_mT")
        groups.setdefault(b, []).append((_float(path, row, "freq_GHz"), _float(path, row, column)))

    spectra = []
    for b, points in groups.items():
        freqs, values = zip(*points)
        spectra.append(
            Spectrum(
                np.array(freqs),
                np.array(values),
                field=FieldPoint(axis, b),
                device_id=Path(path).stem,
                kind=kind,
                quantity=quantity,
            )
        )
    logger.debug(f"Read {len(spectra)} {quantity} spectra from {path}")
    return spectra


# =============================================================================
# 数据集
# =============================================================================

def read_fg_datasets(path: Path, axis: FieldAxis = FieldAxis.PAR1) -> Dict[Optional[str], FgDataset]:
    """读取带隙数据；有 sweep 列时按 up/down 拆分，否则键为 None."""
    header, rows, _ = _read_table(path)
    _require_columns(path, header, ["field_mT", "fg_GHz"])
    if not rows:
        raise InvalidParameterError(f"{path} has no data rows")
    has_sweep = "sweep" in header

    grouped: Dict[Optional[str], List[Tuple[float, float]]] = {}
    for row in rows:
        sweep = row["sweep"].strip().lower() if has_sweep else None
        grouped.setdefault(sweep, []).append((_float(path, row, "field_mT"), _float(path, row, "fg_GHz")))

    return {
        sweep: FgDataset(
            np.array([p[0] for p in points]),
            np.array([p[1] for p in points]),
            axis=axis,
            sweep=sweep,
        )
        for sweep, points in grouped.items()
    }


def write_fg_dataset(path: Path, dataset: FgDataset) -> Path:
    header = ["field_mT", "fg_GHz"] + (["sweep"] if dataset.sweep else [])
    tail = [dataset.sweep] if dataset.sweep else []
    rows = ([b, fg, *tail] for b, fg in zip(dataset.fields_mt, dataset.fg_ghz))
    return write_rows(path, header, rows)


def read_temperature_data(path: Path) -> Tuple[np.ndarray, np.ndarray]:
    """读取 temperature_K,fg_GHz."""
    header, rows, _ = _read_table(path)
    _require_columns(path, header, ["temperature_K", "fg_GHz"])
    if not rows:
        raise InvalidParameterError(f"{path} has no data rows")
    temps = np.array([_float(path, r, "temperature_K") for r in rows])
    fg = np.array([_float(path, r, "fg_GHz") for r in rows])
    return temps, fg


def read_gain_surface_rows(path: Path) -> Tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
    """读取增益曲面长表，返回 (f_pump, P_pump, freq, gain) 四列."""
    columns = ["f_pump_GHz", "p_pump_dBm", "freq_GHz", "gain_dB"]
    header, rows, _ = _read_table(path)
    _require_columns(path, header, columns)
    if not rows:
        raise InvalidParameterError(f"{path} has no data rows")
    return tuple(np.array([_float(path, r, c) for r in rows]) for c in columns)  # type: ignore[return-value]
