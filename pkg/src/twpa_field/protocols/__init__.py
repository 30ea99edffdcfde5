"""Protocols module exports."""
from .registry import FitRecipe, FitRecipeRegistry, GainEvaluator, RecipeResult

__all__ = ["FitRecipe", "FitRecipeRegistry", "GainEvaluator", "RecipeResult"]
