"""
CLI Schemas - JSON 输出的 Pydantic 模型.
"""

from typing import Any, Dict, List, Optional

from pydantic import BaseModel, Field


# =============================================================================
# Run Manifest
# =============================================================================

class RunManifest(BaseModel):
    """与每个输出一同写入的运行清单."""
    command: str = Field(..., description="子命令名")
    inputs: List[str] = Field(default_factory=list, description="输入文件路径")
    device: str = Field(..., description="器件预设名或配置路径")
    gap_model: str = Field(..., description="能隙模型")
    options: Dict[str, Any] = Field(default_factory=dict, description="子命令选项")
    outputs: List[str] = Field(default_factory=list, description="输出文件路径")
    tool_version: str = Field(..., description="工具版本")
    created_at: str = Field(..., description="UTC 时间戳 (ISO 8601)")


# =============================================================================
# Fit
# =============================================================================

class FitOutput(BaseModel):
    """拟合结果 JSON."""
    params: Dict[str, float] = Field(..., description="拟合参数")
    residual_norm: float = Field(..., ge=0, description="残差平方和")
    iterations: int = Field(..., ge=0, description="迭代次数")
    converged: bool = Field(..., description="是否收敛")


class ComparisonOutput(BaseModel):
    """GL vs AG 对比 JSON."""
    ag: FitOutput
    gl: FitOutput
    ag_better: bool = Field(..., description="AG 残差是否更低")


# =============================================================================
# Gain
# =============================================================================

class MetricsOutput(BaseModel):
    """增益指标 JSON."""
    max_smooth_gain_db: float
    f_max_ghz: float
    bw_3db_ghz: float = Field(..., ge=0)
    gain_range_db: float = Field(..., ge=0)
    field_mT: Optional[float] = Field(None, description="多场切片时的磁场")


class PumpOutput(BaseModel):
    """泵浦优化 JSON."""
    best: Dict[str, float]
    metrics: MetricsOutput
    start: Dict[str, float]
    start_metrics: MetricsOutput
    improved: bool
    iterations: int
    converged: bool
