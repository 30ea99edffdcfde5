"""
TWPA Model Errors - 统一异常层级.

所有模块抛出的异常都继承自 TwpaModelError，CLI 据此映射退出码。
"""

from __future__ import annotations

from typing import TYPE_CHECKING, Optional

if TYPE_CHECKING:
    from twpa_field.schemas import PumpSetting


class TwpaModelError(Exception):
    """所有模型错误的基类."""


class InvalidParameterError(TwpaModelError, ValueError):
    """参数非法 (非正的临界场、电容等)."""


class DomainError(TwpaModelError, ValueError):
    """参数超出数学定义域 (α ∉ [0,1]、对数参数 ≤ 1、β 极点等)."""


class GridMismatchError(TwpaModelError, ValueError):
    """频谱频率网格不一致 (不做隐式重采样)."""


class IllPosedFitError(TwpaModelError, ValueError):
    """拟合数据退化，问题不适定."""


class PumpEvaluationError(TwpaModelError, RuntimeError):
    """增益曲面评估失败，携带失败的泵浦设置."""

    def __init__(self, message: str, setting: Optional["PumpSetting"] = None):
        super().__init__(message)
        self.setting = setting


class UsageError(TwpaModelError):
    """命令行用法错误."""
