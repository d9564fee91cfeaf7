"""
Frequency-wise S-procedure test behind the threshold result.

At every frequency the multiplier theta must make

    theta [[Psi, -(1+sigma_u^2) g11], [-(1+sigma_u^2) conj(g11), sigma_u^2 + 2 - gamma^2]] - diag(1, -1)

positive definite; then P_e < gamma^2 can only hold for |H11| <= 1.
"""

import logging
from typing import NamedTuple, Optional

import numpy as np
from scipy.optimize import minimize_scalar

from src.channel.models import ChannelModel
from src.channel.psd import psi
from src.core.grid import FrequencyGrid, feasibility_grid

logger = logging.getLogger(__name__)

THETA_SEARCH = np.logspace(-4.0, 4.0, 161)


class LineSearchResult(NamedTuple):
    theta: float
    min_eigenvalue: float


def lmi_min_eigenvalue(channel: ChannelModel, gamma_sq: float, theta: float, omegas: np.ndarray) -> float:
    """Smallest eigenvalue of the 2x2 test matrix over all frequencies."""
    s = 1j * np.asarray(omegas, dtype=float)
    su = channel.sigma_u_sq
    weight = np.real(np.asarray(psi(channel)(s), dtype=complex))
    g11 = np.asarray(channel.g11(s), dtype=complex)
    top = theta * weight - 1.0
    bottom = theta * (su + 2.0 - gamma_sq) + 1.0
    off = theta * (1.0 + su) * np.abs(g11)
    eigen = 0.5 * (top + bottom) - np.hypot(0.5 * (top - bottom), off)
    return float(np.min(eigen))


def lmi_line_search(channel: ChannelModel, gamma_sq: float, grid: Optional[FrequencyGrid] = None) -> LineSearchResult:
    """
    Best multiplier on theta in (0, 1e4]: log-spaced scan refined by bounded maximization in log theta.
    """
    omegas = (grid or feasibility_grid(channel.resonance_frequencies())).omegas
    scores = np.array([lmi_min_eigenvalue(channel, gamma_sq, theta, omegas) for theta in THETA_SEARCH])
    best = int(np.argmax(scores))
    lo = np.log(THETA_SEARCH[max(best - 1, 0)])
    hi = np.log(THETA_SEARCH[min(best + 1, THETA_SEARCH.size - 1)])
    refined = minimize_scalar(
        lambda log_theta: -lmi_min_eigenvalue(channel, gamma_sq, float(np.exp(log_theta)), omegas),
        bounds=(lo, hi),
        method="bounded",
        options={"xatol": 1e-10},
    )
    if -refined.fun > scores[best]:
        result = LineSearchResult(float(np.exp(refined.x)), float(-refined.fun))
    else:
        result = LineSearchResult(float(THETA_SEARCH[best]), float(scores[best]))
    logger.debug("LMI line search at gamma^2=%.10g: theta=%.6g, min eigenvalue %.3e", gamma_sq, *result)
    return result
