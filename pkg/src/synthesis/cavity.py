"""
Guaranteed-cost equalizers for the cavity channel.

For a constant Theta in the admissible interval the suboptimal H11 is the
first-order section a (s + kappa + i Omega) / (s + c kappa + i Omega) with

    a = -U3 / (mu (beta - Theta alpha)),  c = (beta delta_hat - Theta nu) / (beta - Theta alpha).

It is realized by a cavity with decay rate c kappa between two beam splitters.
"""

import logging
import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from src.channel.models import ChannelModel, cavity_transfer
from src.core.config import get_settings, get_tolerances
from src.core.errors import FamilyMismatch, Infeasible, ParameterOutOfRange, ThetaIntervalEmpty, ThetaOutOfInterval
from src.core.rational import RationalFunction
from src.spectral.jspectral import require_cavity_noise, cavity_beta, cavity_constants, j_spectral_factor
from src.synthesis.completion import complete_equalizer
from src.synthesis.design import EqualizerDesign, trivial_design
from src.synthesis.parameterization import parameterize_h11

logger = logging.getLogger(__name__)


def cavity_suboptimal(channel: ChannelModel, gamma_sq: float, theta_const: float) -> EqualizerDesign:
    """
    Completed cavity equalizer with sup P_e < gamma^2.

    Args:
        channel: Cavity channel with sigma_w^2 > sigma_u^2 > 0
        gamma_sq: Target bound
        theta_const: Real Theta inside (-1, min((beta - U3/mu)/alpha, 0))

    Returns:
        EqualizerDesign: parameters carry a, c, kappa, omega_c, theta and the
        closed-form constants

    Raises:
        BetaNotAdmissible: If beta <= 1 at this gamma^2
        GammaTooLarge: If gamma^2 >= sigma_u^2 + 2
        ThetaIntervalEmpty: If beta + alpha <= U3/mu
        ThetaOutOfInterval: If theta_const is outside the admissible interval
        FamilyMismatch: If the closed form and the parameterized H11 disagree beyond family_tol
    """
    consts = cavity_constants(channel, gamma_sq)
    if not consts.beta + consts.alpha > consts.ratio:
        raise ThetaIntervalEmpty(
            "No constant Theta is admissible at this gamma^2",
            beta=consts.beta,
            alpha=consts.alpha,
            ratio=consts.ratio,
        )
    lower, upper = consts.theta_interval()
    if not lower < theta_const < upper:
        raise ThetaOutOfInterval("Theta is outside the admissible interval", theta=theta_const, lower=lower, upper=upper)

    kappa, omega_c = channel.kind.kappa, channel.kind.omega_c
    gain_den = consts.beta - theta_const * consts.alpha
    a = -consts.ratio / gain_den
    c = (consts.beta * consts.delta_hat - theta_const * consts.nu) / gain_den
    h11 = RationalFunction.first_order(a, kappa + 1j * omega_c, c * kappa + 1j * omega_c)

    aux = j_spectral_factor(channel, gamma_sq)
    family = parameterize_h11(aux, theta_const)
    checkpoints = np.array([0.0, -omega_c, 1.0, 10.0 * kappa])
    mismatch = float(np.max(np.abs(family.h11.freqresp(checkpoints) - h11.freqresp(checkpoints))))
    tolerance = get_tolerances().family_tol
    if not mismatch < tolerance:
        raise FamilyMismatch(
            "Closed-form cavity H11 differs from the parameterized family", mismatch=mismatch, tolerance=tolerance
        )

    design = complete_equalizer(h11, gamma_sq_bound=gamma_sq, theta=theta_const, aux=aux, method="cavity_suboptimal")
    margin_check = min(abs(gain_den), abs(consts.beta * consts.delta_hat - theta_const * consts.nu))
    logger.info("Cavity design at gamma^2=%.10g: a=%.8g, c*kappa=%.8g", gamma_sq, a, c * kappa)
    return design.with_metadata(
        a=a,
        c=c,
        kappa=kappa,
        omega_c=omega_c,
        theta=theta_const,
        beta=consts.beta,
        alpha=consts.alpha,
        nu=consts.nu,
        mu=consts.mu,
        upsilon3=consts.upsilon3,
        interval_upper=upper,
        denominator_margin=margin_check - consts.ratio,
        family_mismatch=mismatch,
    )


def _theta_admissible(channel: ChannelModel, gamma_sq: float, theta: float) -> bool:
    scalars = cavity_beta(channel, gamma_sq)
    if scalars is None:
        return False
    beta, _, mu = scalars
    if beta <= 1.0:
        return False
    alpha = math.sqrt(beta**2 - 1.0)
    ratio = math.sqrt(channel.sigma_u_sq + 2.0 - gamma_sq) / mu
    return beta - theta * alpha > ratio


def cavity_gamma_search(
    channel: ChannelModel,
    theta_offset: Optional[float] = None,
    theta: Optional[float] = None,
    allow_trivial: bool = True,
) -> tuple[float, EqualizerDesign]:
    """
    Smallest admissible gamma^2 for a fixed constant Theta, and its design.

    Theta defaults to -1 + theta_offset. Admissibility of a fixed Theta is
    monotone in gamma^2, so the boundary is found by bisection and the safety
    margin is added on top.

    Args:
        channel: Cavity channel with sigma_w^2 > sigma_u^2 > 0
        theta_offset: Distance of Theta from -1 (default from settings)
        theta: Explicit Theta in (-1, 0); overrides theta_offset
        allow_trivial: Return the swap filter when nothing below sigma_u^2 + 2 qualifies

    Returns:
        tuple: (gamma_sq, design)

    Raises:
        Infeasible: If no gamma^2 below sigma_u^2 + 2 qualifies and allow_trivial is False
    """
    require_cavity_noise(channel)
    settings = get_settings()
    guard = get_tolerances().bound_guard
    offset = settings.theta_offset if theta_offset is None else theta_offset
    theta_const = -1.0 + offset if theta is None else float(theta)
    if not -1.0 < theta_const < 0.0:
        raise ParameterOutOfRange("Cavity Theta must lie in (-1, 0)", theta=theta_const)
    limit = channel.sigma_u_sq + 2.0

    def fallback(reason: str) -> tuple[float, EqualizerDesign]:
        if not allow_trivial:
            raise Infeasible(reason, theta=theta_const, limit=limit)
        logger.warning("%s; returning the trivial filter", reason)
        design = trivial_design(channel.sigma_u_sq, guard).with_metadata(theta=theta_const)
        return design.gamma_sq_bound, design

    hi = limit * (1.0 - 1e-12)
    if not _theta_admissible(channel, hi, theta_const):
        return fallback("No gamma^2 below sigma_u^2 + 2 admits the requested Theta")
    lo = 0.0
    while hi - lo > settings.gamma_bisection_tol:
        mid = 0.5 * (lo + hi)
        if _theta_admissible(channel, mid, theta_const):
            hi = mid
        else:
            lo = mid
        logger.debug("gamma^2 bisection [%.12g, %.12g]", lo, hi)

    gamma_sq = hi + settings.gamma_safety_margin
    if gamma_sq >= limit:
        return fallback("Optimized gamma^2 reaches sigma_u^2 + 2")
    design = cavity_suboptimal(channel, gamma_sq, theta_const)
    return gamma_sq, design.with_metadata(theta_offset=theta_const + 1.0, gamma_boundary=hi)


@dataclass(frozen=True)
class CavityRealization:
    """
    Cavity with decay rate c kappa placed between two beam splitters.

    Attributes:
        a, c: First-order section parameters
        eta1, xi1, eta2, xi2: Beam-splitter amplitudes
        hc_pole: Internal cavity decay rate c kappa
        omega_c: Detuning of the internal cavity
    """

    a: float
    c: float
    eta1: float
    xi1: float
    eta2: float
    xi2: float
    hc_pole: float
    omega_c: float

    def internal_cavity(self) -> RationalFunction:
        return cavity_transfer(self.hc_pole, self.omega_c)

    def realized_h11(self) -> RationalFunction:
        """xi2 eta1 + eta2 xi1 H_c: the H11 the hardware actually implements."""
        return self.xi2 * self.eta1 + self.eta2 * self.xi1 * self.internal_cavity()

    def as_dict(self) -> dict[str, float]:
        return {
            "a": self.a,
            "c": self.c,
            "eta1": self.eta1,
            "xi1": self.xi1,
            "eta2": self.eta2,
            "xi2": self.xi2,
            "hc_pole": self.hc_pole,
            "omega_c": self.omega_c,
        }


def cavity_realization(design: EqualizerDesign) -> CavityRealization:
    """
    Beam-splitter amplitudes realizing a first-order cavity design.

    Raises:
        ParameterOutOfRange: If the design lacks a, c or violates |a| < 1 < c
    """
    params = design.parameters
    if not {"a", "c", "kappa", "omega_c"} <= params.keys():
        raise ParameterOutOfRange("Design carries no cavity parameters", method=design.method)
    a, c = float(params["a"]), float(params["c"])
    if not (abs(a) < 1.0 < c):
        raise ParameterOutOfRange("Cavity realization requires |a| < 1 < c", a=a, c=c)
    root = math.sqrt((c**2 - a**2) * (1.0 - a**2))
    sign = -1.0 if a < 0.0 else 1.0

    def amplitude(value: float) -> float:
        return math.sqrt(max(value, 0.0) / (2.0 * c))

    return CavityRealization(
        a=a,
        c=c,
        eta1=sign * amplitude(c + a**2 - root),
        xi1=amplitude(c - a**2 + root),
        eta2=sign * amplitude(c - a**2 - root),
        xi2=amplitude(c + a**2 + root),
        hc_pole=c * float(params["kappa"]),
        omega_c=float(params["omega_c"]),
    )
