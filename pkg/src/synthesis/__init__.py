from src.synthesis.cavity import CavityRealization, cavity_gamma_search, cavity_realization, cavity_suboptimal
from src.synthesis.completion import complete_equalizer
from src.synthesis.design import EqualizerDesign, trivial_design
from src.synthesis.lmi import LineSearchResult, lmi_line_search, lmi_min_eigenvalue
from src.synthesis.parameterization import SuboptimalParameterization, check_contraction, parameterize_h11
from src.synthesis.static import (
    StaticRealization,
    static_optimal,
    static_realization,
    static_theta_choice,
    static_threshold,
    static_unequalized_gap,
)

__all__ = [
    "CavityRealization",
    "EqualizerDesign",
    "LineSearchResult",
    "StaticRealization",
    "SuboptimalParameterization",
    "cavity_gamma_search",
    "cavity_realization",
    "cavity_suboptimal",
    "check_contraction",
    "complete_equalizer",
    "lmi_line_search",
    "lmi_min_eigenvalue",
    "parameterize_h11",
    "static_optimal",
    "static_realization",
    "static_theta_choice",
    "static_threshold",
    "static_unequalized_gap",
    "trivial_design",
]
