"""
Closed-form designs for a static two-port channel.

With psi = sigma_u^2 |k|^2 + sigma_w^2 |m|^2 the optimal equalizer is the
phase-only H11 = conj(k)/|k| while psi <= (1 + sigma_u^2)|k|, and the single
beam splitter H11 = (1 + sigma_u^2) conj(k) / psi beyond that threshold.
"""

import logging
import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from src.channel.models import ChannelModel, StaticKind
from src.channel.psd import psi
from src.core.config import get_settings, get_tolerances
from src.core.errors import BranchMismatch, DegenerateChannel, ParameterOutOfRange
from src.core.rational import RationalFunction
from src.spectral.jspectral import static_cost_floor
from src.synthesis.design import EqualizerDesign

logger = logging.getLogger(__name__)


def _static_kind(channel: ChannelModel) -> StaticKind:
    if not channel.is_static:
        raise ParameterOutOfRange("A static channel is required")
    return channel.kind


def static_psi(channel: ChannelModel) -> float:
    _static_kind(channel)
    return float(psi(channel).constant_value.real)


def static_branch(channel: ChannelModel) -> str:
    """'phase' below the threshold (contraction active), 'splitter' above it."""
    k = abs(_static_kind(channel).k)
    return "phase" if static_psi(channel) <= (1.0 + channel.sigma_u_sq) * k else "splitter"


def static_optimal(channel: ChannelModel) -> EqualizerDesign:
    """
    Optimal equalizer for a static channel.

    Returns:
        EqualizerDesign: optimal_value holds the attained optimum and
        gamma_sq_bound adds the configured guard

    Raises:
        DegenerateChannel: If psi = 0 and k = 0

    Example:
        >>> channel = static_channel_from_transmittance(0.7, 0.0, FieldIntensities(0.1, 4.0))
        >>> round(static_optimal(channel).optimal_value, 4)
        1.4331
    """
    kind = _static_kind(channel)
    su = channel.sigma_u_sq
    weight = static_psi(channel)
    k = kind.k
    if weight == 0.0 and k == 0:
        raise DegenerateChannel("psi and k both vanish; every H11 has the same cost")
    value = static_cost_floor(channel)
    guard = get_tolerances().bound_guard
    if static_branch(channel) == "phase":
        h11 = np.conj(k) / abs(k)
        design = EqualizerDesign(
            h11=RationalFunction.constant(h11),
            h12=RationalFunction.constant(0.0),
            h21=RationalFunction.constant(0.0),
            h22=RationalFunction.constant(1.0),
            theta=RationalFunction.constant(k / abs(k)),
        )
    else:
        h11 = (1.0 + su) * np.conj(k) / weight
        leak = math.sqrt(max(weight**2 - (1.0 + su) ** 2 * abs(k) ** 2, 0.0)) / weight
        design = EqualizerDesign(
            h11=RationalFunction.constant(h11),
            h12=RationalFunction.constant(leak),
            h21=RationalFunction.constant(leak),
            h22=RationalFunction.constant(-(1.0 + su) * k / weight),
        )
    logger.info("Static optimum %.10g (%s branch)", value, static_branch(channel))
    return design.with_bound(value + guard, optimal_value=value).with_metadata(
        "static_optimal", branch=static_branch(channel), psi=weight
    )


def static_theta_choice(channel: ChannelModel, epsilon: Optional[float] = None) -> complex:
    """Constant Theta whose suboptimal H11 tends to the optimum as gamma^2 approaches it."""
    kind = _static_kind(channel)
    if static_branch(channel) == "splitter":
        return 0j
    eps = get_settings().epsilon_limit if epsilon is None else epsilon
    return eps * kind.k / abs(kind.k)


def static_threshold(channel: ChannelModel) -> float:
    """
    sigma_w^2 above which psi > (1 + sigma_u^2)|k|, i.e.
    ((1 + sigma_u^2)|k| - sigma_u^2 |k|^2) / |m|^2 (inf when m = 0).
    """
    kind = _static_kind(channel)
    k, m = abs(kind.k), abs(kind.m)
    if m == 0.0:
        return math.inf
    su = channel.sigma_u_sq
    return ((1.0 + su) * k - su * k**2) / m**2


def static_unequalized_gap(channel: ChannelModel) -> float:
    """P_{y-u} - optimum: |psi - (1+sigma_u^2)k|^2/psi above the threshold, 2(1+sigma_u^2)(|k| - Re k) below."""
    kind = _static_kind(channel)
    su = channel.sigma_u_sq
    weight = static_psi(channel)
    if static_branch(channel) == "splitter":
        return abs(weight - (1.0 + su) * kind.k) ** 2 / weight
    return 2.0 * (1.0 + su) * (abs(kind.k) - kind.k.real)


def static_lmi_min_eigenvalue(channel: ChannelModel, gamma_sq: float, theta: float) -> float:
    """Smallest eigenvalue of theta [[psi, -(1+s)k], [-(1+s)conj(k), c]] - diag(1, -1)."""
    kind = _static_kind(channel)
    su = channel.sigma_u_sq
    weight = static_psi(channel)
    top = theta * weight - 1.0
    bottom = theta * (su + 2.0 - gamma_sq) + 1.0
    off = theta * (1.0 + su) * abs(kind.k)
    return float(0.5 * (top + bottom) - math.hypot(0.5 * (top - bottom), off))


def static_lmi_certificate(channel: ChannelModel, gamma_sq: float) -> Optional[float]:
    """
    Multiplier theta > 0 certifying that P_e < gamma^2 forces |H11| <= 1.

    For a static channel the determinant of the 2x2 test matrix is
    a theta^2 + b theta - 1 with a = psi c - (1+sigma_u^2)^2 |k|^2,
    b = psi - c and c = sigma_u^2 + 2 - gamma^2, subject to theta psi > 1.

    Returns:
        theta, or None when no multiplier exists
    """
    kind = _static_kind(channel)
    tol = get_tolerances()
    su = channel.sigma_u_sq
    weight = static_psi(channel)
    c = su + 2.0 - gamma_sq
    coupling = (1.0 + su) ** 2 * abs(kind.k) ** 2
    a = weight * c - coupling
    b = weight - c
    scale = 1.0 + abs(weight * c) + coupling
    candidates: list[float] = []
    if abs(a) <= tol.certificate_tol * scale:
        if b > tol.certificate_tol * scale:
            candidates.append(2.0 / b)
    elif a > 0.0:
        root = (-b + math.sqrt(b * b + 4.0 * a)) / (2.0 * a)
        candidates.append(2.0 * root)
    elif b > 0.0:
        candidates.append(-b / (2.0 * a))
    if weight > 0.0:
        candidates = [max(theta, 2.0 / weight) for theta in candidates] + candidates
    for theta in candidates:
        if theta > 0.0 and static_lmi_min_eigenvalue(channel, gamma_sq, theta) > tol.certificate_tol:
            return float(theta)
    return None


@dataclass(frozen=True)
class StaticRealization:
    equalizer_transmittance: float


def static_realization(channel: ChannelModel) -> StaticRealization:
    """
    Beam-splitter transmittance (1+sigma_u^2)^2 |k|^2 / psi^2 of the optimal equalizer.

    Raises:
        BranchMismatch: Below the threshold, where the optimum is a pure phase
    """
    if static_branch(channel) != "splitter":
        raise BranchMismatch("The optimal equalizer below the threshold is a phase shift, not a beam splitter")
    weight = static_psi(channel)
    transmittance = (1.0 + channel.sigma_u_sq) ** 2 * abs(channel.kind.k) ** 2 / weight**2
    return StaticRealization(equalizer_transmittance=float(transmittance))
