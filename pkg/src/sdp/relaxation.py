"""
Frequency-grid relaxation of the guaranteed-cost problem.

At each grid node the error PSD is a convex quadratic in the complex number
H11 and the contraction constraint is the closed unit disc, so the scalar
node problem is solved exactly from its KKT conditions: the unconstrained
minimizer (1 + sigma_u^2) conj(g11) / Psi when it lies in the disc, its radial
projection otherwise.
"""

import logging
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from src.channel.models import ChannelModel
from src.channel.psd import error_psd, psi
from src.core.config import get_settings, get_tolerances
from src.core.grid import FrequencyGrid

logger = logging.getLogger(__name__)


class NodeOptimum(NamedTuple):
    h11: complex
    cost: float


def _node_data(channel: ChannelModel, omega: float) -> tuple[complex, float]:
    s = 1j * float(omega)
    return complex(channel.g11(s)), float(np.real(psi(channel)(s)))


def is_degenerate(channel: ChannelModel, omega: float) -> bool:
    """Psi and g11 both vanish: every h in the disc has cost sigma_u^2 + 2."""
    tiny = get_tolerances().psd_nonneg_tol
    g11, weight = _node_data(channel, omega)
    return weight <= tiny and abs(g11) <= tiny


def per_frequency_optimum(channel: ChannelModel, omega: float) -> NodeOptimum:
    """
    Minimize P_e(i omega, h) over |h| <= 1.

    Returns:
        NodeOptimum: (h11, cost); h11 = 0 with cost sigma_u^2 + 2 at degenerate nodes

    Example:
        >>> channel = static_channel_from_transmittance(0.7, 0.0, FieldIntensities(0.1, 4.0))
        >>> round(per_frequency_optimum(channel, 0.0).cost, 4)
        1.4331
    """
    tiny = get_tolerances().psd_nonneg_tol
    g11, weight = _node_data(channel, omega)
    target = (1.0 + channel.sigma_u_sq) * np.conj(g11)
    if weight <= tiny:
        if abs(g11) <= tiny:
            logger.warning("Degenerate node at omega=%g: Psi and g11 vanish", omega)
            h = 0j
        else:
            h = target / abs(target)
    else:
        h = target / weight
        if abs(h) > 1.0:
            h = h / abs(h)
    return NodeOptimum(complex(h), float(error_psd(channel, complex(h), omega)))


def kkt_multiplier(channel: ChannelModel, omega: float) -> float:
    """lambda = (1 + sigma_u^2)|g11| - Psi; positive exactly when the disc constraint is active."""
    g11, weight = _node_data(channel, omega)
    return (1.0 + channel.sigma_u_sq) * abs(g11) - weight


@dataclass(frozen=True)
class GridSolution:
    """
    Node-wise optimal H11 values and the grid optimum gamma_tilde^2.

    Attributes:
        omegas: Grid
        h11_values: Optimal H11 per node
        per_freq_cost: P_e at the optimal value per node
        gamma_tilde_sq: Largest node cost
        trivial: True when gamma_tilde^2 >= sigma_u^2 + 2 and the swap filter is as good
        boundary: Nodes whose value lies on the unit circle
        degenerate: Nodes where Psi and g11 vanish together
    """

    omegas: FrequencyGrid
    h11_values: tuple[complex, ...]
    per_freq_cost: tuple[float, ...]
    gamma_tilde_sq: float
    trivial: bool
    boundary: tuple[bool, ...]
    degenerate: tuple[bool, ...]

    @property
    def node_magnitudes(self) -> np.ndarray:
        return np.abs(np.asarray(self.h11_values))

    def interpolation_values(self, shrink: float | None = None) -> np.ndarray:
        """Node values with boundary-touching entries pulled strictly inside the disc."""
        factor = get_settings().pick_shrink if shrink is None else shrink
        values = np.asarray(self.h11_values, dtype=complex)
        touching = np.abs(values) >= factor
        if np.any(touching):
            logger.warning("Shrinking %d boundary node value(s) by %.12g", int(np.sum(touching)), factor)
            values = np.where(touching, values / np.abs(values) * factor, values)
        return values


def grid_solve(channel: ChannelModel, grid: FrequencyGrid) -> GridSolution:
    """
    Solve the node problem at every grid frequency.

    Example:
        >>> solution = grid_solve(channel, node_grid_21())
        >>> len(solution.h11_values)
        21
    """
    optima = [per_frequency_optimum(channel, omega) for omega in grid]
    costs = tuple(o.cost for o in optima)
    gamma_tilde_sq = max(costs)
    limit = channel.sigma_u_sq + 2.0
    trivial = not gamma_tilde_sq < limit
    if trivial:
        logger.warning("Grid optimum %.10g reaches sigma_u^2 + 2; the swap filter is optimal", gamma_tilde_sq)
    else:
        logger.info("Grid optimum gamma_tilde^2 = %.10g over %d nodes", gamma_tilde_sq, len(grid))
    return GridSolution(
        omegas=grid,
        h11_values=tuple(o.h11 for o in optima),
        per_freq_cost=costs,
        gamma_tilde_sq=gamma_tilde_sq,
        trivial=trivial,
        boundary=tuple(abs(abs(o.h11) - 1.0) <= 1e-12 for o in optima),
        degenerate=tuple(is_degenerate(channel, omega) for omega in grid),
    )
