"""
Grid certificates that a PSD bound forces the H11 entry into the unit disc.
"""

import logging
from dataclasses import asdict, dataclass
from typing import Any, Optional

from src.channel.models import ChannelModel, StaticKind
from src.core.config import get_tolerances
from src.core.grid import FrequencyGrid, feasibility_grid
from src.synthesis.lmi import lmi_line_search, lmi_min_eigenvalue
from src.synthesis.static import static_lmi_certificate, static_psi

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class ThresholdCertificate:
    """
    Attributes:
        theta: S-procedure multiplier
        min_eig_over_grid: Smallest eigenvalue of the test matrix over the grid
        closed_form: Static channels only: psi > (1 + sigma_u^2)|k|
    """

    theta: float
    min_eig_over_grid: float
    closed_form: Optional[bool] = None

    def to_dict(self) -> dict[str, Any]:
        return asdict(self)


def certify_threshold(
    channel: ChannelModel, gamma_sq: float, grid: Optional[FrequencyGrid] = None
) -> Optional[ThresholdCertificate]:
    """
    Search a multiplier theta in (0, 1e4] for the threshold test at gamma_sq.

    Static channels take the closed-form multiplier and also report whether
    the closed-form criterion psi > (1 + sigma_u^2)|k| agrees.

    Returns:
        ThresholdCertificate, or None when no multiplier certifies the test
    """
    tol = get_tolerances()
    grid = grid or feasibility_grid(channel.resonance_frequencies())
    if isinstance(channel.kind, StaticKind):
        criterion = static_psi(channel) > (1.0 + channel.sigma_u_sq) * abs(channel.kind.k)
        theta = static_lmi_certificate(channel, gamma_sq)
        if theta is None:
            logger.info("No static multiplier at gamma^2=%.10g (closed-form criterion: %s)", gamma_sq, criterion)
            return None
        return ThresholdCertificate(
            theta=theta,
            min_eig_over_grid=lmi_min_eigenvalue(channel, gamma_sq, theta, grid.omegas),
            closed_form=bool(criterion),
        )

    result = lmi_line_search(channel, gamma_sq, grid)
    if result.min_eigenvalue > tol.certificate_tol:
        logger.info("Threshold certified at gamma^2=%.10g with theta=%.6g", gamma_sq, result.theta)
        return ThresholdCertificate(theta=result.theta, min_eig_over_grid=result.min_eigenvalue)
    logger.info("No multiplier at gamma^2=%.10g (best min eigenvalue %.3e)", gamma_sq, result.min_eigenvalue)
    return None
