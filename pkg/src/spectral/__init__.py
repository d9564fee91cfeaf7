from src.spectral.factorization import spectral_factor
from src.spectral.jspectral import (
    AuxiliaryFactorization,
    CavityDesignConstants,
    cavity_beta,
    cavity_constants,
    j_spectral_factor,
    static_cost_floor,
)

__all__ = [
    "AuxiliaryFactorization",
    "CavityDesignConstants",
    "cavity_beta",
    "cavity_constants",
    "j_spectral_factor",
    "spectral_factor",
    "static_cost_floor",
]
