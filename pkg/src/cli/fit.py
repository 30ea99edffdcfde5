"""
fit - 按名称运行拟合流程，输出 fit_<recipe>.json.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from twpa_field.di import get_fit_registry

from cli.deps import CommandContext, write_json, write_manifest
from cli.schemas import ComparisonOutput, FitOutput

RECIPES = ["par1", "perp", "temperature", "gl-vs-ag"]


def register(subparsers) -> None:
    p = subparsers.add_parser("fit", help="run a fit recipe")
    p.add_argument("--recipe", required=True, choices=RECIPES)
    p.add_argument(
        "--data",
        nargs="+",
        required=True,
        help="data CSV; perp also accepts separate up and down files",
    )
    p.add_argument("--bc-mt", type=float, default=None, help="fixed in-plane critical field (par1, gl-vs-ag)")
    p.add_argument("--tc-k", type=float, default=None, help="critical temperature (temperature)")
    p.add_argument("--fit-tc", action="store_true", help="also fit Tc (temperature)")
    p.set_defaults(handler=run)


def run(args: argparse.Namespace, ctx: CommandContext) -> int:
    recipe = get_fit_registry().get_required(args.recipe)
    data = [Path(p) for p in args.data]
    result = recipe.run(
        data=data,
        device=ctx.device,
        gap_model=ctx.gap_model,
        bc_mt=args.bc_mt,
        tc_k=args.tc_k,
        fit_tc=args.fit_tc,
    )
    if not result.success:
        print(f"fit {args.recipe} failed: {result.error_message}", file=sys.stderr)
        return 1

    model = ComparisonOutput if args.recipe == "gl-vs-ag" else FitOutput
    payload = model.model_validate(result.data).model_dump()
    out = write_json(ctx.out_dir / f"fit_{args.recipe}.json", payload)
    write_manifest(
        ctx,
        "fit",
        inputs=data,
        outputs=[out],
        options={"recipe": args.recipe, "bc_mt": args.bc_mt, "tc_k": args.tc_k, "fit_tc": args.fit_tc},
    )
    return 0
