"""
可插拔协议 - Fit Recipe / Gain Evaluator Protocols.

- GainEvaluator: 泵浦设置 -> 增益指标 (数据驱动曲面或测试用合成曲面)
- FitRecipe: 命令行可按名称调用的拟合流程
- FitRecipeRegistry: 拟合流程注册表
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Protocol, runtime_checkable

from twpa_field.errors import UsageError
from twpa_field.schemas import GainMetrics, PumpSetting


@dataclass
class RecipeResult:
    """拟合流程执行结果.

    Attributes:
        success: 是否成功
        data: 可直接写成 JSON 的结果
        error_message: 失败原因
        metadata: 额外信息 (数据行数、使用的模型等)
    """
    success: bool = True
    data: Optional[Dict[str, Any]] = None
    error_message: Optional[str] = None
    metadata: Dict[str, Any] = field(default_factory=dict)

    @classmethod
    def ok(cls, data: Dict[str, Any], **metadata) -> "RecipeResult":
        return cls(success=True, data=data, metadata=metadata)

    @classmethod
    def fail(cls, error_message: str, **metadata) -> "RecipeResult":
        return cls(success=False, error_message=error_message, metadata=metadata)


@runtime_checkable
class GainEvaluator(Protocol):
    """增益曲面评估器."""

    def evaluate(self, setting: PumpSetting) -> GainMetrics:
        ...


@runtime_checkable
class FitRecipe(Protocol):
    """拟合流程协议."""

    @property
    def name(self) -> str:
        ...

    def run(self, **kwargs: Any) -> RecipeResult:
        ...


@dataclass
class FitRecipeRegistry:
    """拟合流程注册表."""
    _recipes: Dict[str, FitRecipe] = field(default_factory=dict)

    def register(self, recipe: FitRecipe) -> None:
        self._recipes[recipe.name] = recipe

    def get(self, name: str) -> Optional[FitRecipe]:
        return self._recipes.get(name)

    def get_required(self, name: str) -> FitRecipe:
        """按名称获取流程，不存在时抛出 UsageError."""
        recipe = self._recipes.get(name)
        if recipe is None:
            raise UsageError(f"Fit recipe '{name}' not registered. Available: {self.list_recipes()}")
        return recipe

    def list_recipes(self) -> List[str]:
        return list(self._recipes.keys())
