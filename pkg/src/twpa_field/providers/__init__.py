"""Providers module exports."""
from .fit_providers import GlVsAgRecipe, Par1BandgapRecipe, PerpHysteresisRecipe, TemperatureRecipe

__all__ = ["GlVsAgRecipe", "Par1BandgapRecipe", "PerpHysteresisRecipe", "TemperatureRecipe"]
