"""Physics module exports."""
from .gap import (
    ag_gap_interp,
    ag_gap_numeric,
    gap_ratio,
    gap_vs_temperature,
    gl_gap,
    pair_breaking_alpha,
)
from .fraunhofer import beta_factor, current_density, flux_field, fraunhofer_factor
from .array_model import (
    BandgapEdges,
    ClosingField,
    bandgap_center,
    bandgap_edges,
    bandgap_width,
    beta_critical,
    closing_fields,
    critical_current_factor,
    impedance,
    modulated_arrays,
    perp_bandgap_model,
    plasma_frequency,
    screening_length,
)

__all__ = [
    # Gap
    "ag_gap_interp",
    "ag_gap_numeric",
    "gap_ratio",
    "gap_vs_temperature",
    "gl_gap",
    "pair_breaking_alpha",
    # Fraunhofer
    "beta_factor",
    "current_density",
    "flux_field",
    "fraunhofer_factor",
    # Array model
    "BandgapEdges",
    "ClosingField",
    "bandgap_center",
    "bandgap_edges",
    "bandgap_width",
    "beta_critical",
    "closing_fields",
    "critical_current_factor",
    "impedance",
    "modulated_arrays",
    "perp_bandgap_model",
    "plasma_frequency",
    "screening_length",
]
