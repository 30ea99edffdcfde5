"""
TWPA DI Factories - 依赖注入工厂函数.

提供:
- get_settings: 获取 Settings 单例
- get_preset_device: 按名称获取 (缓存的) 预设器件
- get_fit_registry: 获取预注册所有拟合流程的注册表
"""

from __future__ import annotations

from functools import lru_cache

from twpa_field.config import Settings
from twpa_field.protocols.registry import FitRecipeRegistry
from twpa_field.providers.fit_providers import (
    GlVsAgRecipe,
    Par1BandgapRecipe,
    PerpHysteresisRecipe,
    TemperatureRecipe,
)
from twpa_field.schemas import DeviceModel


@lru_cache()
def get_settings() -> Settings:
    """
    获取 Settings 单例.

    Note:
        结果会被缓存；测试中修改环境变量后需调用 get_settings.cache_clear()。
    """
    return Settings()


@lru_cache()
def get_preset_device(name: str) -> DeviceModel:
    """按预设名加载器件 (DeviceModel 不可变，可安全共享)."""
    from twpa_field.io.device_config import load_device

    return load_device(name)


def get_fit_registry() -> FitRecipeRegistry:
    """
    获取预注册所有拟合流程的注册表.

    使用示例:
        registry = get_fit_registry()
        result = registry.get_required("par1").run(data=[path], device=device)
    """
    registry = FitRecipeRegistry()

    registry.register(Par1BandgapRecipe())
    registry.register(PerpHysteresisRecipe())
    registry.register(TemperatureRecipe())
    registry.register(GlVsAgRecipe())

    return registry
