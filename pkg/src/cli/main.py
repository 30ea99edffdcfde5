"""
TWPA Field CLI - 命令行入口.

Subcommands:
- sweep: 扫场计算带隙边缘 / f_p / 阻抗
- simulate: ABCD 级联 S21 / S11 频谱
- extract: 从频谱提取 f_g 与 f_p
- fit: 拟合流程 (par1 / perp / temperature / gl-vs-ag)
- gain: 增益指标与泵浦优化

退出码: 0 全部输出已生成；1 模型错误或部分失败；2 用法错误。
"""

from __future__ import annotations

import argparse
import logging
import sys
from typing import List, Optional

from dotenv import load_dotenv
from loguru import logger

from twpa_field import __version__
from twpa_field.config import Settings
from twpa_field.di import get_settings
from twpa_field.errors import TwpaModelError, UsageError

from cli import extract, fit, gain, simulate, sweep
from cli.deps import build_context

GAP_MODEL_CHOICES = ["ag-interp", "ag-numeric", "gl"]


# ========== Loguru 日志配置 ==========

class InterceptHandler(logging.Handler):
    """拦截标准 logging 日志，转发到 loguru."""

    def emit(self, record: logging.LogRecord) -> None:
        try:
            level = logger.level(record.levelname).name
        except ValueError:
            level = record.levelno

        # 找到调用者
        frame, depth = logging.currentframe(), 2
        while frame and frame.f_code.co_filename == logging.__file__:
            frame = frame.f_back
            depth += 1

        logger.opt(depth=depth, exception=record.exc_info).log(level, record.getMessage())


def setup_logging(settings: Settings) -> None:
    """控制台 sink + 可选的按天轮换文件 sink，标准 logging 路由到 loguru."""
    logger.remove()
    logger.add(
        sys.stderr,
        level=settings.log_level.upper(),
        format="<green>{time:HH:mm:ss.SSS}</green> | <level>{level: <8}</level> | <cyan>{name}</cyan>:<cyan>{function}</cyan>:<cyan>{line}</cyan> - <level>{message}</level>",
        colorize=True,
    )
    if settings.log_dir is not None:
        settings.log_dir.mkdir(parents=True, exist_ok=True)
        logger.add(
            str(settings.log_dir / "twpa_field_{time:YYYY-MM-DD}.log"),
            level="DEBUG",
            format="{time:YYYY-MM-DD HH:mm:ss.SSS} | {level: <8} | {name}:{function}:{line} - {message}",
            rotation="00:00",
            retention="7 days",
            encoding="utf-8",
        )
    logging.basicConfig(handlers=[InterceptHandler()], level=logging.WARNING, force=True)

# ========== End Loguru 配置 ==========


def build_parser(settings: Settings) -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="twpa-field",
        description="Field- and temperature-dependent model of a photonic-crystal Josephson TWPA.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument(
        "--device",
        default=settings.default_device,
        help="device preset (twpa_a, twpa_b) or path to a device JSON file",
    )
    parser.add_argument("--out", default=".", help="output directory")
    parser.add_argument(
        "--gap-model",
        choices=GAP_MODEL_CHOICES,
        default=settings.gap_model,
        help="gap suppression model",
    )
    parser.add_argument("--threads", type=int, default=settings.threads, help="worker threads")

    subparsers = parser.add_subparsers(dest="command", required=True)
    for module in (sweep, simulate, extract, fit, gain):
        module.register(subparsers)
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    """命令行入口，返回退出码."""
    load_dotenv()
    settings = get_settings()
    parser = build_parser(settings)
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)

    setup_logging(settings)
    try:
        ctx = build_context(args, settings)
        logger.info(f"twpa-field {args.command}: device={ctx.device.name}, out={ctx.out_dir}")
        return args.handler(args, ctx)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 2
    except TwpaModelError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
