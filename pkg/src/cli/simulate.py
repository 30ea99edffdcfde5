"""
simulate - ABCD 级联频谱.

输出 s21.csv / s11.csv (field_mT,freq_GHz,s21_dB / s11_dB，带 `# kind=simulated`)。
"""

from __future__ import annotations

import argparse
import math

import numpy as np

from twpa_field.errors import UsageError
from twpa_field.io.csv_io import write_spectra
from twpa_field.simulation.abcd import abcd_cascade
from twpa_field.schemas import FieldAxis, FieldPoint

from cli.deps import CommandContext, parallel_map, write_manifest


def register(subparsers) -> None:
    p = subparsers.add_parser("simulate", help="S21/S11 spectra of the full array")
    p.add_argument("--axis", default=FieldAxis.PAR1.value, choices=[a.value for a in FieldAxis])
    p.add_argument("--b-mt", type=float, nargs="+", default=[0.0], help="one or more field values")
    p.add_argument("--f-from-ghz", type=float, default=2.0)
    p.add_argument("--f-to-ghz", type=float, default=26.0)
    p.add_argument("--f-step-ghz", type=float, default=0.01)
    p.add_argument("--z0-ohm", type=float, default=50.0)
    p.set_defaults(handler=run)


def frequency_grid(f_from: float, f_to: float, f_step: float) -> np.ndarray:
    if not (f_step > 0 and f_to > f_from >= 0) or not math.isfinite(f_to):
        raise UsageError(f"invalid frequency range {f_from}..{f_to} GHz with step {f_step} GHz")
    n = int(round((f_to - f_from) / f_step)) + 1
    return f_from + f_step * np.arange(n)


def run(args: argparse.Namespace, ctx: CommandContext) -> int:
    if not args.z0_ohm > 0:
        raise UsageError(f"--z0-ohm must be > 0, got {args.z0_ohm}")
    axis = FieldAxis.from_name(args.axis)
    freqs = frequency_grid(args.f_from_ghz, args.f_to_ghz, args.f_step_ghz)

    results = parallel_map(
        lambda b: abcd_cascade(ctx.device, FieldPoint(axis, float(b)), freqs, args.z0_ohm, ctx.gap_model),
        list(args.b_mt),
        ctx.threads,
    )
    s21_path = write_spectra(ctx.out_dir / "s21.csv", [r.s21 for r in results])
    s11_path = write_spectra(ctx.out_dir / "s11.csv", [r.s11 for r in results])
    write_manifest(
        ctx,
        "simulate",
        inputs=[],
        outputs=[s21_path, s11_path],
        options={
            "axis": axis.value,
            "b_mt": list(args.b_mt),
            "f_from_ghz": args.f_from_ghz,
            "f_to_ghz": args.f_to_ghz,
            "f_step_ghz": args.f_step_ghz,
            "z0_ohm": args.z0_ohm,
        },
    )
    return 0
