"""Simulation module exports."""
from .dispersion import dispersion_bands
from .abcd import SParameters, abcd_cascade
from .features import GapFeature, PlasmaFeature, extract_gap, extract_plasma

__all__ = [
    "dispersion_bands",
    "SParameters",
    "abcd_cascade",
    "GapFeature",
    "PlasmaFeature",
    "extract_gap",
    "extract_plasma",
]
