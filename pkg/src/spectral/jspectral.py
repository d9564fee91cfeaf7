"""
J-spectral factorization of Phi = [[1, Q], [Q^H, sigma_u^2 + 2 - gamma^2]].

For scalar channels the factor has the lower-triangular form
Upsilon = [[U1, U2], [U3, 0]] with U3 a positive constant, U1 = Q / U3 and U2
the spectral factor of U1 U1^H - 1. The cavity closed-form constants used by
the guaranteed-cost design live here as well.
"""

import logging
import math
from dataclasses import dataclass

import numpy as np

from src.channel.models import ChannelModel
from src.channel.psd import psi
from src.core.config import get_tolerances
from src.core.errors import (
    BetaNotAdmissible,
    GammaTooLarge,
    GammaTooSmall,
    NotFactorable,
    ParameterOutOfRange,
    SingularMatrix,
)
from src.core.grid import FrequencyGrid, feasibility_grid
from src.core.rational import Polynomial, RationalFunction, TransferMatrix
from src.spectral.factorization import spectral_factor

logger = logging.getLogger(__name__)


def static_cost_floor(channel: ChannelModel) -> float:
    """
    Smallest attainable sup P_e for a static channel.

    Returns psi - 2(1 + sigma_u^2)|k| + 2 + sigma_u^2 when
    psi <= (1 + sigma_u^2)|k|, else 2 + sigma_u^2 - (1 + sigma_u^2)^2 |k|^2 / psi.
    """
    su = channel.sigma_u_sq
    k = abs(channel.kind.k)
    weight = float(psi(channel).constant_value.real)
    if weight <= (1.0 + su) * k:
        return weight - 2.0 * (1.0 + su) * k + 2.0 + su
    return 2.0 + su - (1.0 + su) ** 2 * k**2 / weight


@dataclass(frozen=True)
class AuxiliaryFactorization:
    """
    Spectral factor of Psi and J-spectral blocks of Phi at a given gamma^2.

    Attributes:
        gamma_sq: Cost level
        psi: Psi(s)
        m_factor: M with M M^H = Psi
        q: Q = -M^{-1} g11 (1 + sigma_u^2)
        upsilon1, upsilon2: Dynamic blocks
        upsilon3: Positive constant sqrt(sigma_u^2 + 2 - gamma^2)
        upsilon4: Identically zero
    """

    gamma_sq: float
    sigma_u_sq: float
    psi: RationalFunction
    m_factor: RationalFunction
    q: RationalFunction
    upsilon1: RationalFunction
    upsilon2: RationalFunction
    upsilon3: float
    upsilon4: RationalFunction

    def upsilon(self) -> TransferMatrix:
        return TransferMatrix.from_rows([[self.upsilon1, self.upsilon2], [self.upsilon3, self.upsilon4]])

    def phi(self) -> TransferMatrix:
        return TransferMatrix.from_rows(
            [[1.0, self.q], [self.q.para_conjugate(), self.sigma_u_sq + 2.0 - self.gamma_sq]]
        )

    def determinant(self) -> RationalFunction:
        return -self.upsilon3 * self.upsilon2

    def residuals(self, grid: FrequencyGrid | None = None) -> dict[str, float]:
        """Pointwise residuals of M M^H = Psi and Upsilon J Upsilon^H = Phi."""
        omegas = (grid or feasibility_grid()).omegas
        m = self.m_factor.freqresp(omegas)
        u1 = self.upsilon1.freqresp(omegas)
        u2 = self.upsilon2.freqresp(omegas)
        q = self.q.freqresp(omegas)
        weight = self.psi.freqresp(omegas)
        return {
            "spectral": float(np.max(np.abs(np.abs(m) ** 2 - weight) / (1.0 + np.abs(weight)))),
            "upper_left": float(np.max(np.abs(np.abs(u1) ** 2 - np.abs(u2) ** 2 - 1.0))),
            "off_diagonal": float(np.max(np.abs(u1 * self.upsilon3 - q))),
        }

    def margins(self) -> dict[str, float]:
        """Analytic margins of the factors whose inverses enter the parameterization."""
        return {
            "m_factor": min(self.m_factor.analytic_margin(), self.m_factor.inverse().analytic_margin()),
            "upsilon1": min(self.upsilon1.analytic_margin(), self.upsilon1.inverse().analytic_margin()),
            "upsilon2": min(self.upsilon2.analytic_margin(), self.upsilon2.inverse().analytic_margin()),
        }


def j_spectral_factor(channel: ChannelModel, gamma_sq: float) -> AuxiliaryFactorization:
    """
    Build the auxiliary factorization for a scalar channel.

    Args:
        channel: Static or cavity channel
        gamma_sq: Cost level, 0 < gamma_sq < sigma_u^2 + 2

    Returns:
        AuxiliaryFactorization: With Upsilon4 = 0

    Raises:
        GammaTooLarge: If gamma_sq >= sigma_u^2 + 2 (H11 = 0 is already feasible)
        GammaTooSmall: If the factorization with Upsilon4 = 0 does not exist
        NotFactorable: If Psi vanishes identically or a factor fails its checks

    Example:
        >>> channel = static_channel_from_transmittance(0.7, 0.0, FieldIntensities(0.1, 4.0))
        >>> aux = j_spectral_factor(channel, 1.5)
        >>> round(aux.upsilon3 ** 2, 12)
        0.6
    """
    tol = get_tolerances()
    su = channel.sigma_u_sq
    headroom = su + 2.0 - gamma_sq
    if headroom <= 0.0:
        raise GammaTooLarge("gamma^2 must be below sigma_u^2 + 2", gamma_sq=gamma_sq, limit=su + 2.0)
    if gamma_sq <= 0.0:
        raise GammaTooSmall("gamma^2 must be positive", gamma_sq=gamma_sq)
    if channel.is_static:
        floor = static_cost_floor(channel)
        if gamma_sq <= floor:
            raise GammaTooSmall("gamma^2 does not exceed the static optimum", gamma_sq=gamma_sq, floor=floor)
    elif channel.sigma_w_sq > channel.sigma_u_sq > 0.0:
        try:
            cavity_constants(channel, gamma_sq)
        except BetaNotAdmissible as exc:
            raise GammaTooSmall(exc.message, **{**exc.details, "gamma_sq": gamma_sq}) from exc

    weight = psi(channel)
    m_factor = spectral_factor(weight)
    if m_factor.is_zero:
        raise NotFactorable("Psi vanishes identically")
    q = -(m_factor.inverse() * channel.g11) * (1.0 + su)
    upsilon3 = math.sqrt(headroom)
    upsilon1 = q * (1.0 / upsilon3)
    try:
        upsilon2 = spectral_factor(upsilon1 * upsilon1.para_conjugate() - 1.0)
    except NotFactorable as exc:
        raise GammaTooSmall("U1 U1^H - 1 is not nonnegative on the axis", gamma_sq=gamma_sq) from exc
    if upsilon2.is_zero:
        raise GammaTooSmall("U1 U1^H - 1 vanishes identically", gamma_sq=gamma_sq)

    aux = AuxiliaryFactorization(
        gamma_sq=float(gamma_sq),
        sigma_u_sq=su,
        psi=weight,
        m_factor=m_factor,
        q=q,
        upsilon1=upsilon1,
        upsilon2=upsilon2,
        upsilon3=upsilon3,
        upsilon4=RationalFunction.constant(0.0),
    )
    try:
        margins = aux.margins()
    except SingularMatrix as exc:
        raise NotFactorable("A factor is identically zero") from exc
    if min(margins.values()) <= 0.0:
        raise NotFactorable("A factor or its inverse is not stable", **margins)
    residuals = aux.residuals()
    if max(residuals.values()) > tol.factor_tol:
        raise NotFactorable("J-spectral factorization fails the residual check", **residuals)
    logger.debug("J-spectral factor at gamma^2=%.10g, margins %s", gamma_sq, margins)
    return aux


@dataclass(frozen=True)
class CavityDesignConstants:
    """Closed-form constants of the cavity guaranteed-cost design at one gamma^2."""

    gamma_sq: float
    rho: float
    rho_hat: float
    delta: float
    delta_hat: float
    beta: float
    alpha: float
    nu: float
    mu: float
    upsilon3: float
    n1: RationalFunction
    n2: RationalFunction

    @property
    def ratio(self) -> float:
        """Upsilon3 / mu"""
        return self.upsilon3 / self.mu

    def theta_interval(self) -> tuple[float, float]:
        """Open interval of admissible constant Theta (may be empty)."""
        return -1.0, min((self.beta - self.ratio) / self.alpha, 0.0)


def require_cavity_noise(channel: ChannelModel) -> None:
    if not channel.is_cavity:
        raise ParameterOutOfRange("Cavity design constants need a cavity channel")
    if not channel.sigma_w_sq > channel.sigma_u_sq > 0.0:
        raise ParameterOutOfRange(
            "Cavity design requires sigma_w^2 > sigma_u^2 > 0",
            sigma_u_sq=channel.sigma_u_sq,
            sigma_w_sq=channel.sigma_w_sq,
        )


def cavity_beta(channel: ChannelModel, gamma_sq: float) -> tuple[float, float, float] | None:
    """
    (beta, rho, mu) at gamma_sq without validation, or None outside (0, sigma_u^2 + 2).
    """
    su, sw, k = channel.sigma_u_sq, channel.sigma_w_sq, channel.kind.k
    headroom = su + 2.0 - gamma_sq
    if gamma_sq <= 0.0 or headroom <= 0.0:
        return None
    spread = 2.0 * (sw - su)
    rho = 1.0 + su / (spread * k**2 * (1.0 - k**2))
    delta = math.sqrt(1.0 - k**2) / k
    beta = (1.0 + su) * (delta - 1.0 / delta) / (math.sqrt(headroom) * math.sqrt(spread * (1.0 + rho)))
    mu = math.sqrt(spread * k**2 * (1.0 - k**2) * (1.0 + rho))
    return beta, rho, mu


def cavity_constants(channel: ChannelModel, gamma_sq: float) -> CavityDesignConstants:
    """
    Constants rho, rho_hat, delta, delta_hat, beta, alpha, nu, mu and N1, N2.

    Raises:
        ParameterOutOfRange: Unless the channel is a cavity with sigma_w^2 > sigma_u^2 > 0
        GammaTooLarge: If gamma_sq >= sigma_u^2 + 2
        BetaNotAdmissible: If beta <= 1; beta grows with gamma_sq, so a larger
            gamma_sq is needed

    Example:
        >>> channel = new_cavity_channel(0.4, 5.0, 10.0, FieldIntensities(0.1, 0.2))
        >>> consts = cavity_constants(channel, 0.8)
        >>> round(consts.rho, 5), round(consts.delta_hat, 5)
        (4.72024, 1.47059)
    """
    require_cavity_noise(channel)
    su = channel.sigma_u_sq
    if gamma_sq >= su + 2.0:
        raise GammaTooLarge("gamma^2 must be below sigma_u^2 + 2", gamma_sq=gamma_sq, limit=su + 2.0)
    scalars = cavity_beta(channel, gamma_sq)
    if scalars is None:
        raise GammaTooSmall("gamma^2 must be positive", gamma_sq=gamma_sq)
    beta, rho, mu = scalars
    if beta <= 1.0:
        raise BetaNotAdmissible(
            "beta must exceed 1; increase gamma^2", beta=beta, gamma_sq=gamma_sq
        )
    k, kappa, omega_c = channel.kind.k, channel.kind.kappa, channel.kind.omega_c
    rho_hat = (rho - 1.0) / (rho + 1.0)
    delta = math.sqrt(1.0 - k**2) / k
    delta_hat = 1.0 / (1.0 - 2.0 * k**2)
    alpha = math.sqrt(beta**2 - 1.0)
    nu = math.sqrt(beta**2 * delta_hat**2 - rho_hat)
    shift = 1j * omega_c
    return CavityDesignConstants(
        gamma_sq=float(gamma_sq),
        rho=rho,
        rho_hat=rho_hat,
        delta=delta,
        delta_hat=delta_hat,
        beta=beta,
        alpha=alpha,
        nu=nu,
        mu=mu,
        upsilon3=math.sqrt(su + 2.0 - gamma_sq),
        n1=RationalFunction(Polynomial.linear(beta * shift + beta * delta_hat * kappa, beta)),
        n2=RationalFunction(Polynomial.linear(alpha * shift + nu * kappa, alpha)),
    )
