"""Gain module exports."""
from .pipeline import (
    background_from_max,
    background_interp,
    batch_metrics,
    boxcar_smooth,
    gain_profile,
    smooth_and_metrics,
)
from .pump import GainSurface, PumpOptimization, optimize_pump

__all__ = [
    "background_from_max",
    "background_interp",
    "batch_metrics",
    "boxcar_smooth",
    "gain_profile",
    "smooth_and_metrics",
    "GainSurface",
    "PumpOptimization",
    "optimize_pump",
]
