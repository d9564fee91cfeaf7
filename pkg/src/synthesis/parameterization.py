"""
Theta-parameterized family of suboptimal H11 built from a J-spectral factorization.
"""

import logging
from dataclasses import dataclass

import numpy as np

from src.core.config import get_tolerances
from src.core.errors import ThetaNotContractive, ThetaUnstable
from src.core.grid import FrequencyGrid, feasibility_grid
from src.core.rational import RationalFunction, Scalar, as_rational, hinf_norm
from src.spectral.jspectral import AuxiliaryFactorization

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class SuboptimalParameterization:
    """h11 = s2^{-1} s1 M^{-1} for the row factors s1 = U2^{-1}, s2 = -U2^{-1} U1 (1 - U1^{-1} U2 Theta) / U3."""

    theta: RationalFunction
    s1: RationalFunction
    s2: RationalFunction
    h11: RationalFunction


def parameterize_h11(aux: AuxiliaryFactorization, theta: Scalar) -> SuboptimalParameterization:
    """
    Suboptimal H11 = -U3 / ((U1 - U2 Theta) M).

    Args:
        aux: J-spectral factorization at the target gamma^2
        theta: Stable contraction (constant or rational)

    Returns:
        SuboptimalParameterization

    Raises:
        ThetaUnstable: If Theta, or the resulting H11, is not stable
        ThetaNotContractive: If ||Theta||_inf >= 1
    """
    theta = as_rational(theta)
    if not theta.is_stable():
        raise ThetaUnstable("Theta must be stable", poles=str(theta.poles()))
    norm = hinf_norm(theta)
    if norm >= 1.0:
        raise ThetaNotContractive("Theta must be a strict contraction", norm=norm)

    u2_inv = aux.upsilon2.inverse()
    s1 = u2_inv
    s2 = -(u2_inv * aux.upsilon1 * (1.0 - aux.upsilon1.inverse() * aux.upsilon2 * theta)) * (1.0 / aux.upsilon3)
    h11 = -aux.upsilon3 * ((aux.upsilon1 - aux.upsilon2 * theta) * aux.m_factor).inverse()
    if not h11.is_stable():
        raise ThetaUnstable("Theta yields an unstable H11", margin=h11.analytic_margin())
    logger.debug("Parameterized H11 with ||Theta||=%.6g, margin %.6g", norm, h11.analytic_margin())
    return SuboptimalParameterization(theta=theta, s1=s1, s2=s2, h11=h11)


def check_contraction(h11, grid: FrequencyGrid | None = None) -> bool:
    """True iff |h11(i omega)| <= 1 + contraction_check_tol on the grid."""
    omegas = (grid or feasibility_grid()).omegas
    block = h11 if hasattr(h11, "freqresp") else as_rational(h11)
    values = block.freqresp(omegas)
    return bool(np.max(np.abs(values)) <= 1.0 + get_tolerances().contraction_check_tol)
