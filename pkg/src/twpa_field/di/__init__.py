"""DI module exports."""
from .factories import get_fit_registry, get_preset_device, get_settings

__all__ = ["get_fit_registry", "get_preset_device", "get_settings"]
