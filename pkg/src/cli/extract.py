"""
extract - 从多场频谱提取 f_g 与 f_p.

输出 extracted.csv: field_mT,fg_GHz,fg_lower_GHz,fg_upper_GHz,fp_GHz
未找到的特征写为 `not-found`。
"""

from __future__ import annotations

import argparse
from pathlib import Path

from loguru import logger

from twpa_field.errors import InvalidParameterError, UsageError
from twpa_field.io.csv_io import read_spectra, write_rows
from twpa_field.schemas import FieldAxis, Spectrum
from twpa_field.simulation.features import extract_gap, extract_plasma

from cli.deps import CommandContext, parallel_map, write_manifest

NOT_FOUND = "not-found"
HEADER = ["field_mT", "fg_GHz", "fg_lower_GHz", "fg_upper_GHz", "fp_GHz"]


def register(subparsers) -> None:
    p = subparsers.add_parser("extract", help="extract f_g and f_p from S21 spectra")
    p.add_argument("--spectra", required=True, help="spectrum CSV (field_mT,freq_GHz,s21_dB)")
    p.add_argument("--axis", default=FieldAxis.PAR1.value, choices=[a.value for a in FieldAxis])
    p.add_argument("--min-prominence-db", type=float, default=6.0)
    p.set_defaults(handler=run)


def _row(spectrum: Spectrum, min_prominence_db: float) -> list:
    gap = extract_gap(spectrum, min_prominence_db=min_prominence_db)
    plasma = extract_plasma(spectrum)
    b = spectrum.field.b_mt if spectrum.field is not None else 0.0
    if not gap.found:
        logger.warning(f"B={b} mT: gap {NOT_FOUND} ({gap.message})")
    if not plasma.found:
        logger.warning(f"B={b} mT: plasma cutoff {NOT_FOUND} ({plasma.message})")
    gap_cols = [gap.center_ghz, gap.lower_ghz, gap.upper_ghz] if gap.found else [NOT_FOUND] * 3
    return [b, *gap_cols, plasma.f_p_ghz if plasma.found else NOT_FOUND]


def run(args: argparse.Namespace, ctx: CommandContext) -> int:
    path = Path(args.spectra)
    try:
        spectra = read_spectra(path, FieldAxis.from_name(args.axis))
    except InvalidParameterError as exc:
        raise UsageError(str(exc)) from exc
    if not spectra:
        raise UsageError(f"{path} contains no spectra")

    rows = parallel_map(lambda s: _row(s, args.min_prominence_db), spectra, ctx.threads)
    out = write_rows(ctx.out_dir / "extracted.csv", HEADER, rows)
    write_manifest(
        ctx,
        "extract",
        inputs=[path],
        outputs=[out],
        options={"axis": args.axis, "min_prominence_db": args.min_prominence_db},
    )
    return 0
