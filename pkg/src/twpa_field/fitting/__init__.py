"""Fitting module exports."""
from .optimizer import NelderMeadOptions, nelder_mead
from .recipes import (
    ModelComparison,
    fit_bandgap_par1,
    fit_perp_hysteresis,
    fit_temperature,
    model_comparison_gl_vs_ag,
)

__all__ = [
    "NelderMeadOptions",
    "nelder_mead",
    "ModelComparison",
    "fit_bandgap_par1",
    "fit_perp_hysteresis",
    "fit_temperature",
    "model_comparison_gl_vs_ag",
]
