"""
sweep - 扫场计算带隙边缘、等离子体频率与阻抗.

输出 sweep_<axis>.csv:
    field_mT,fg_minus_GHz,fg_plus_GHz,fg_width_GHz,fp_GHz,z_ohm
"""

from __future__ import annotations

import argparse
import math

import numpy as np

from twpa_field.errors import UsageError
from twpa_field.io.csv_io import write_rows
from twpa_field.physics.array_model import evaluate_field
from twpa_field.schemas import FieldAxis, FieldPoint

from cli.deps import CommandContext, parallel_map, write_manifest

HEADER = ["field_mT", "fg_minus_GHz", "fg_plus_GHz", "fg_width_GHz", "fp_GHz", "z_ohm"]


def register(subparsers) -> None:
    p = subparsers.add_parser("sweep", help="field sweep of the array model")
    p.add_argument("--axis", required=True, choices=[a.value for a in FieldAxis])
    p.add_argument("--b-from-mt", type=float, required=True)
    p.add_argument("--b-to-mt", type=float, required=True)
    p.add_argument("--steps", type=int, required=True, help="number of field points (1 = only --b-from-mt)")
    p.set_defaults(handler=run)


def field_grid(b_from: float, b_to: float, steps: int) -> np.ndarray:
    if steps < 1:
        raise UsageError(f"--steps must be >= 1, got {steps}")
    if not (math.isfinite(b_from) and math.isfinite(b_to)):
        raise UsageError("field range must be finite")
    if steps == 1:
        return np.array([b_from])
    return np.linspace(b_from, b_to, steps)


def run(args: argparse.Namespace, ctx: CommandContext) -> int:
    axis = FieldAxis.from_name(args.axis)
    fields = field_grid(args.b_from_mt, args.b_to_mt, args.steps)

    rows = parallel_map(
        lambda b: evaluate_field(ctx.device, FieldPoint(axis, float(b)), ctx.gap_model),
        list(fields),
        ctx.threads,
    )
    out = write_rows(
        ctx.out_dir / f"sweep_{axis.value}.csv",
        HEADER,
        ([r.b_mt, r.fg_minus_ghz, r.fg_plus_ghz, r.width_ghz, r.fp_ghz, r.z_ohm] for r in rows),
    )
    write_manifest(
        ctx,
        "sweep",
        inputs=[],
        outputs=[out],
        options={"axis": axis.value, "b_from_mt": args.b_from_mt, "b_to_mt": args.b_to_mt, "steps": args.steps},
    )
    return 0
