"""
Settings - 运行配置.

优先级: CLI 参数 > 环境变量 / .env (前缀 TWPA_) > 默认值。

环境变量:
    TWPA_LOG_LEVEL: 控制台日志级别 (默认 INFO)
    TWPA_LOG_DIR: 文件日志目录 (默认不写文件)
    TWPA_THREADS: 扫描/仿真线程数 (默认 1)
    TWPA_GAP_MODEL: 能隙抑制模型 ag-interp / ag-numeric / gl
    TWPA_DEFAULT_DEVICE: 默认器件预设或路径
    TWPA_DATASET_DIR: 归档测量数据目录 (集成测试用)
"""

from __future__ import annotations

from pathlib import Path
from typing import Optional

from pydantic import Field
from pydantic_settings import BaseSettings, SettingsConfigDict


class Settings(BaseSettings):
    """TWPA 模型工具配置."""

    model_config = SettingsConfigDict(
        env_prefix="TWPA_",
        env_file=".env",
        env_file_encoding="utf-8",
        extra="ignore",
    )

    log_level: str = Field("INFO", description="控制台日志级别")
    log_dir: Optional[Path] = Field(None, description="文件日志目录")
    threads: int = Field(1, ge=1, description="线程池大小")
    gap_model: str = Field("ag-interp", description="默认能隙模型")
    default_device: str = Field("twpa_a", description="默认器件预设或 JSON 路径")
    dataset_dir: Optional[Path] = Field(None, description="归档数据集目录")
