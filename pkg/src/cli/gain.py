"""
gain - 增益指标流程与泵浦优化.

三种输入方式 (互斥):
1. --pump-on FILE --background FILE [--background-mode max|interp --gap-window-ghz LO HI]
2. --gain FILE (已是增益的频谱，列 gain_dB)
3. --surface FILE --start-f-ghz F --start-p-dbm P [--fg-ghz FG]  (泵浦优化)

输出 metrics.json 或 pump.json。多场切片中个别失败时其余仍写出，退出码 1。
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path
from typing import List, Optional, Tuple

from loguru import logger

from twpa_field.errors import InvalidParameterError, TwpaModelError, UsageError
from twpa_field.gain.pipeline import (
    DEFAULT_WINDOW_GHZ,
    background_from_max,
    background_interp,
    gain_profile,
    smooth_and_metrics,
)
from twpa_field.gain.pump import GainSurface, optimize_pump
from twpa_field.io.csv_io import read_spectra
from twpa_field.schemas import GainMetrics, PumpSetting, Spectrum

from cli.deps import CommandContext, parallel_map, write_json, write_manifest
from cli.schemas import MetricsOutput, PumpOutput


def register(subparsers) -> None:
    p = subparsers.add_parser("gain", help="gain figures of merit and pump optimization")
    p.add_argument("--pump-on", help="pump-on S21 spectra CSV")
    p.add_argument("--background", help="pump-off / multi-field spectra CSV for the background")
    p.add_argument("--background-mode", choices=["max", "interp"], default="max")
    p.add_argument("--gap-window-ghz", type=float, nargs=2, metavar=("LO", "HI"))
    p.add_argument("--gain", dest="gain_file", help="gain spectra CSV (field_mT,freq_GHz,gain_dB)")
    p.add_argument("--surface", help="gain surface CSV (f_pump_GHz,p_pump_dBm,freq_GHz,gain_dB)")
    p.add_argument("--start-f-ghz", type=float)
    p.add_argument("--start-p-dbm", type=float)
    p.add_argument("--fg-ghz", type=float, default=None, help="bandgap estimate bounding the pump search")
    p.add_argument("--window-ghz", type=float, default=DEFAULT_WINDOW_GHZ)
    p.set_defaults(handler=run)


def _read(path: str) -> List[Spectrum]:
    try:
        spectra = read_spectra(Path(path))
    except InvalidParameterError as exc:
        raise UsageError(str(exc)) from exc
    if not spectra:
        raise UsageError(f"{path} contains no spectra")
    return spectra


def _background(args: argparse.Namespace) -> Spectrum:
    spectra = _read(args.background)
    if args.background_mode == "max":
        return background_from_max(spectra)
    if args.gap_window_ghz is None:
        raise UsageError("--background-mode interp needs --gap-window-ghz LO HI")
    return background_interp(spectra[0], tuple(args.gap_window_ghz))


def _metrics_entry(gain: Spectrum, window_ghz: float) -> Tuple[Optional[dict], Optional[str]]:
    b = gain.field.b_mt if gain.field is not None else None
    try:
        metrics = smooth_and_metrics(gain, window_ghz)
    except TwpaModelError as exc:
        return None, f"B={b} mT: {exc}"
    return MetricsOutput(**metrics.to_dict(), field_mT=b).model_dump(exclude_none=True), None


def _run_metrics(args: argparse.Namespace, ctx: CommandContext, gains: List[Spectrum], inputs: List[Path]) -> int:
    results = parallel_map(lambda g: _metrics_entry(g, args.window_ghz), gains, ctx.threads)
    entries = [entry for entry, _ in results if entry is not None]
    failures = [error for _, error in results if error is not None]
    for error in failures:
        print(f"failed: {error}", file=sys.stderr)

    if entries:
        payload = entries[0] if len(gains) == 1 else entries
        out = write_json(ctx.out_dir / "metrics.json", payload)
        write_manifest(
            ctx,
            "gain",
            inputs=inputs,
            outputs=[out],
            options={"window_ghz": args.window_ghz, "background_mode": args.background_mode},
        )
    return 1 if failures else 0


def _metrics_dict(metrics: GainMetrics) -> dict:
    return MetricsOutput(**metrics.to_dict()).model_dump(exclude_none=True)


def _run_optimize(args: argparse.Namespace, ctx: CommandContext) -> int:
    if args.start_f_ghz is None or args.start_p_dbm is None:
        raise UsageError("--surface needs --start-f-ghz and --start-p-dbm")
    try:
        surface = GainSurface.from_csv(Path(args.surface), window_ghz=args.window_ghz)
    except InvalidParameterError as exc:
        raise UsageError(str(exc)) from exc

    outcome = optimize_pump(surface, PumpSetting(args.start_f_ghz, args.start_p_dbm), args.fg_ghz)
    payload = PumpOutput(
        best=outcome.best.to_dict(),
        metrics=_metrics_dict(outcome.metrics),
        start=outcome.start.to_dict(),
        start_metrics=_metrics_dict(outcome.start_metrics),
        improved=outcome.improved,
        iterations=outcome.iterations,
        converged=outcome.converged,
    ).model_dump(exclude_none=True)
    out = write_json(ctx.out_dir / "pump.json", payload)
    write_manifest(
        ctx,
        "gain",
        inputs=[Path(args.surface)],
        outputs=[out],
        options={
            "start_f_ghz": args.start_f_ghz,
            "start_p_dbm": args.start_p_dbm,
            "fg_ghz": args.fg_ghz,
            "window_ghz": args.window_ghz,
        },
    )
    return 0


def run(args: argparse.Namespace, ctx: CommandContext) -> int:
    modes = [args.pump_on is not None, args.gain_file is not None, args.surface is not None]
    if sum(modes) != 1:
        raise UsageError("choose exactly one of --pump-on, --gain, --surface")

    if args.surface is not None:
        return _run_optimize(args, ctx)

    if args.gain_file is not None:
        return _run_metrics(args, ctx, _read(args.gain_file), [Path(args.gain_file)])

    if args.background is None:
        raise UsageError("--pump-on needs --background")
    background = _background(args)
    gains = [gain_profile(on, background) for on in _read(args.pump_on)]
    logger.info(f"Computed {len(gains)} gain profile(s)")
    return _run_metrics(args, ctx, gains, [Path(args.pump_on), Path(args.background)])
