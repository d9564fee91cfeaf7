"""
Error power spectral density of an equalized channel.

``error_psd`` uses the reduced scalar form valid for paraunitary filters;
``error_psd_oracle`` rebuilds the full error transfer row and the noise
intensity matrix and serves as an independent cross-check.
"""

from dataclasses import dataclass
from functools import lru_cache
from typing import Any

import numpy as np

from src.channel.models import ChannelModel
from src.core.rational import RationalFunction


@lru_cache(maxsize=64)
def psi(channel: ChannelModel) -> RationalFunction:
    """Psi = sigma_u^2 g11 g11^H + sigma_w^2 g12 g12^H (para-Hermitian, >= 0 on the axis)."""
    return channel.sigma_u_sq * channel.g11 * channel.g11.para_conjugate() + channel.sigma_w_sq * (
        channel.g12 * channel.g12.para_conjugate()
    )


def response(block: Any, s: np.ndarray) -> np.ndarray:
    """Values of a rational function, a pointwise evaluator or a constant at s."""
    if isinstance(block, (int, float, complex, np.number)):
        return np.full(s.shape, complex(block))
    return np.asarray(block(s), dtype=complex)


def error_psd_from_values(channel: ChannelModel, h11_values: np.ndarray, omegas: np.ndarray) -> np.ndarray:
    s = 1j * np.asarray(omegas, dtype=float)
    g11 = np.asarray(channel.g11(s), dtype=complex)
    weight = np.real(np.asarray(psi(channel)(s), dtype=complex))
    su = channel.sigma_u_sq
    h = np.asarray(h11_values, dtype=complex)
    return np.abs(h) ** 2 * weight - 2.0 * np.real(h * g11 * (1.0 + su)) + su + 2.0


def error_psd(channel: ChannelModel, h11: Any, omega):
    """
    P_e(i omega) = |h11|^2 Psi - 2 Re[h11 g11 (1 + sigma_u^2)] + sigma_u^2 + 2.

    Args:
        channel: Channel model
        h11: RationalFunction, pointwise evaluator or complex constant
        omega: Real frequency or array of frequencies

    Returns:
        float for scalar omega, otherwise an array

    Raises:
        PoleHit: If h11 or the channel has a pole at i*omega
    """
    omegas = np.asarray(omega, dtype=float)
    values = error_psd_from_values(channel, response(h11, 1j * np.atleast_1d(omegas)), np.atleast_1d(omegas))
    return float(values[0]) if omegas.ndim == 0 else values


@dataclass(frozen=True)
class ErrorModel:
    """Noise intensity matrix of the combined field (u, w, z, and their conjugate parts)."""

    channel: ChannelModel

    @property
    def f_v(self) -> np.ndarray:
        su, sw = self.channel.sigma_u_sq, self.channel.sigma_w_sq
        return np.diag([1.0 + su, 1.0 + sw, 1.0, su, sw, 0.0]).astype(complex)

    def error_row(self, h11_values: np.ndarray, h12_values: np.ndarray, omegas: np.ndarray) -> np.ndarray:
        """E_-(i omega) = [h11 g11 - 1, h11 g12, h12], shape (N, 3)."""
        s = 1j * np.asarray(omegas, dtype=float)
        g11 = np.asarray(self.channel.g11(s), dtype=complex)
        g12 = np.asarray(self.channel.g12(s), dtype=complex)
        return np.stack([h11_values * g11 - 1.0, h11_values * g12, h12_values], axis=1)

    def psd(self, h11_values: np.ndarray, h12_values: np.ndarray, omegas: np.ndarray) -> np.ndarray:
        row = self.error_row(h11_values, h12_values, omegas)
        block = self.f_v[:3, :3]
        return np.real(np.einsum("ni,ij,nj->n", row, block, np.conj(row)))


def error_psd_oracle(channel: ChannelModel, h11: Any, h12: Any, omega):
    """Full-form P_e built from E_-(i omega) and F_v; equals error_psd when |h11|^2 + |h12|^2 = 1."""
    omegas = np.asarray(omega, dtype=float)
    grid = np.atleast_1d(omegas)
    s = 1j * grid
    values = ErrorModel(channel).psd(response(h11, s), response(h12, s), grid)
    return float(values[0]) if omegas.ndim == 0 else values


def unequalized_psd(channel: ChannelModel, omega):
    """P_{y-u}: the oracle with the pass-through filter h11 = 1, h12 = 0."""
    return error_psd_oracle(channel, 1.0, 0.0, omega)
