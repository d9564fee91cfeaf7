"""
Passive channel models: a static two-port and a cavity between beam splitters.

A channel is stored through the four annihilation blocks of its transfer
function G(s) together with the thermal intensities of the input field and of
the channel environment.
"""

import logging
from dataclasses import dataclass, replace
from typing import Union

import numpy as np

from src.core.config import get_tolerances
from src.core.errors import NotUnitary, ParameterOutOfRange
from src.core.grid import FrequencyGrid, log_grid
from src.core.rational import RationalFunction, TransferMatrix

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class FieldIntensities:
    """
    Thermal intensities of the scalar input field (u) and channel environment (w).

    Attributes:
        sigma_u_sq: Input field intensity, >= 0
        sigma_w_sq: Environment intensity, >= 0
    """

    sigma_u_sq: float
    sigma_w_sq: float

    def __post_init__(self) -> None:
        for name in ("sigma_u_sq", "sigma_w_sq"):
            value = float(getattr(self, name))
            if not np.isfinite(value) or value < 0.0:
                raise ParameterOutOfRange(f"{name} must be a finite nonnegative number", **{name: value})
            object.__setattr__(self, name, value)


@dataclass(frozen=True)
class StaticKind:
    k: complex
    m: complex
    phi: float


@dataclass(frozen=True)
class CavityKind:
    k: float
    kappa: float
    omega_c: float


ChannelKind = Union[StaticKind, CavityKind]


def _check_grid() -> FrequencyGrid:
    return log_grid(1e-3, 1e3, 100)


@dataclass(frozen=True)
class ChannelModel:
    """
    Passive channel G(s) = [[g11, g12], [g21, g22]] with field intensities.

    Attributes:
        g11, g12, g21, g22: Annihilation blocks
        intensities: Thermal intensities of the input field and environment
        kind: Construction parameters (static or cavity)
    """

    g11: RationalFunction
    g12: RationalFunction
    g21: RationalFunction
    g22: RationalFunction
    intensities: FieldIntensities
    kind: ChannelKind

    @property
    def g(self) -> TransferMatrix:
        return TransferMatrix.from_rows([[self.g11, self.g12], [self.g21, self.g22]])

    @property
    def sigma_u_sq(self) -> float:
        return self.intensities.sigma_u_sq

    @property
    def sigma_w_sq(self) -> float:
        return self.intensities.sigma_w_sq

    @property
    def is_static(self) -> bool:
        return isinstance(self.kind, StaticKind)

    @property
    def is_cavity(self) -> bool:
        return isinstance(self.kind, CavityKind)

    def resonance_frequencies(self) -> tuple[float, ...]:
        """Frequencies that verification grids must contain."""
        if self.is_cavity:
            return (-self.kind.omega_c, self.kind.omega_c)
        return ()

    def paraunitarity_residual(self, grid: FrequencyGrid | None = None) -> float:
        """max |G(iw) G(iw)^dagger - I| over the grid."""
        omegas = (grid or _check_grid()).omegas
        values = self.g.freqresp(omegas)
        gram = values @ np.conj(np.transpose(values, (0, 2, 1)))
        return float(np.max(np.abs(gram - np.eye(2))))

    def with_intensities(self, intensities: FieldIntensities) -> "ChannelModel":
        return replace(self, intensities=intensities)

    def describe(self) -> dict:
        if self.is_static:
            kind = {"type": "static", "k": self.kind.k, "m": self.kind.m, "phi": self.kind.phi}
        else:
            kind = {"type": "cavity", "k": self.kind.k, "kappa": self.kind.kappa, "omega_c": self.kind.omega_c}
        return {**kind, "sigma_u_sq": self.sigma_u_sq, "sigma_w_sq": self.sigma_w_sq}


def _validated(channel: ChannelModel) -> ChannelModel:
    if not channel.g.is_stable():
        raise ParameterOutOfRange("Channel blocks must be stable")
    residual = channel.paraunitarity_residual()
    if residual > get_tolerances().channel_paraunitarity_tol:
        raise NotUnitary("Channel transfer function is not paraunitary", residual=residual)
    return channel


def new_static_channel(k: complex, m: complex, phi: float, intensities: FieldIntensities) -> ChannelModel:
    """
    Static two-port with G = [[k, m], [-e^{i phi} conj(m), e^{i phi} conj(k)]].

    Raises:
        NotUnitary: If |k|^2 + |m|^2 differs from 1

    Example:
        >>> ch = new_static_channel(0.7 ** 0.5, 0.3 ** 0.5, 0.0, FieldIntensities(0.1, 0.2))
        >>> round(ch.g11(0j).real, 5)
        0.83666
    """
    k, m, phi = complex(k), complex(m), float(phi)
    deviation = abs(abs(k) ** 2 + abs(m) ** 2 - 1.0)
    if deviation > get_tolerances().unitarity_tol:
        raise NotUnitary("Static channel requires |k|^2 + |m|^2 = 1", k=k, m=m, deviation=deviation)
    rotation = np.exp(1j * phi)
    channel = ChannelModel(
        g11=RationalFunction.constant(k),
        g12=RationalFunction.constant(m),
        g21=RationalFunction.constant(-rotation * np.conj(m)),
        g22=RationalFunction.constant(rotation * np.conj(k)),
        intensities=intensities,
        kind=StaticKind(k=k, m=m, phi=phi),
    )
    return _validated(channel)


def static_channel_from_transmittance(eta: float, phi: float, intensities: FieldIntensities) -> ChannelModel:
    """Beam splitter with real k = sqrt(eta), m = sqrt(1 - eta)."""
    if not 0.0 <= eta <= 1.0:
        raise ParameterOutOfRange("Transmittance must lie in [0, 1]", eta=eta)
    return new_static_channel(np.sqrt(eta), np.sqrt(1.0 - eta), phi, intensities)


def cavity_transfer(kappa: float, omega_c: float) -> RationalFunction:
    """G_c(s) = (s - kappa + i*omega_c) / (s + kappa + i*omega_c)"""
    return RationalFunction.first_order(1.0, -kappa + 1j * omega_c, kappa + 1j * omega_c)


def new_cavity_channel(k: float, kappa: float, omega_c: float, intensities: FieldIntensities) -> ChannelModel:
    """
    Optical cavity between two beam splitters of amplitude k.

    Args:
        k: Beam-splitter amplitude, 0 < k^2 < 1/2
        kappa: Cavity decay rate, > 0
        omega_c: Detuning (rad/s)
        intensities: Field intensities

    Raises:
        ParameterOutOfRange: If k or kappa violates its range
    """
    k, kappa, omega_c = float(k), float(kappa), float(omega_c)
    if not 0.0 < k**2 < 0.5:
        raise ParameterOutOfRange("Cavity channel requires 0 < k^2 < 1/2", k=k, k_sq=k**2)
    if not kappa > 0.0:
        raise ParameterOutOfRange("Cavity decay rate must be positive", kappa=kappa)
    gc = cavity_transfer(kappa, omega_c)
    transmit = 1.0 - k**2
    cross = k * np.sqrt(transmit) * (gc + 1.0)
    channel = ChannelModel(
        g11=k**2 * gc - transmit,
        g12=cross,
        g21=-cross,
        g22=k**2 - transmit * gc,
        intensities=intensities,
        kind=CavityKind(k=k, kappa=kappa, omega_c=omega_c),
    )
    logger.debug("Built cavity channel k=%s kappa=%s omega_c=%s", k, kappa, omega_c)
    return _validated(channel)
