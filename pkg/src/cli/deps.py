"""
CLI Dependencies - 命令共享的上下文与工具.

提供:
- CommandContext / build_context: 器件、输出目录、能隙模型、线程数
- parallel_map: 保序的线程池映射
- write_json / write_manifest: JSON 输出与运行清单
"""

from __future__ import annotations

import argparse
import json
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from datetime import datetime, timezone
from pathlib import Path
from typing import Any, Callable, Dict, Iterable, List, Sequence, TypeVar

from loguru import logger

from twpa_field import __version__
from twpa_field.config import Settings
from twpa_field.errors import InvalidParameterError, UsageError
from twpa_field.io.device_config import load_device
from twpa_field.schemas import DeviceModel, GapModelKind

from cli.schemas import RunManifest

T = TypeVar("T")
R = TypeVar("R")


@dataclass
class CommandContext:
    """一次命令运行的共享依赖."""
    device: DeviceModel
    device_ref: str
    out_dir: Path
    gap_model: GapModelKind
    threads: int
    settings: Settings


def build_context(args: argparse.Namespace, settings: Settings) -> CommandContext:
    """
    由全局参数构建上下文.

    Raises:
        UsageError: 线程数非法、器件无法解析
    """
    if args.threads < 1:
        raise UsageError(f"--threads must be >= 1, got {args.threads}")
    try:
        gap_model = GapModelKind.from_name(args.gap_model)
        device = load_device(args.device)
    except InvalidParameterError as exc:
        raise UsageError(str(exc)) from exc
    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    return CommandContext(
        device=device,
        device_ref=str(args.device),
        out_dir=out_dir,
        gap_model=gap_model,
        threads=args.threads,
        settings=settings,
    )


def parallel_map(func: Callable[[T], R], items: Sequence[T], threads: int) -> List[R]:
    """线程池映射，结果顺序与输入一致."""
    if threads <= 1 or len(items) <= 1:
        return [func(item) for item in items]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(func, items))


def write_json(path: Path, payload: Any) -> Path:
    """确定性 JSON 输出 (键排序、LF 结尾)."""
    path.write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n", encoding="utf-8")
    return path


def write_manifest(
    ctx: CommandContext,
    command: str,
    inputs: Iterable[Path],
    outputs: Iterable[Path],
    options: Dict[str, Any],
) -> Path:
    """在输出目录写入 <command>_manifest.json."""
    manifest = RunManifest(
        command=command,
        inputs=[str(p) for p in inputs],
        device=ctx.device_ref,
        gap_model=ctx.gap_model.value,
        options=options,
        outputs=[str(p) for p in outputs],
        tool_version=__version__,
        created_at=datetime.now(timezone.utc).isoformat(),
    )
    path = ctx.out_dir / f"{command}_manifest.json"
    write_json(path, manifest.model_dump())
    logger.info(f"Wrote {path}")
    return path
