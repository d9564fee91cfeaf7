"""
Independent verification of a finished equalizer design.

Everything is re-evaluated on a dense grid that differs from every synthesis
grid: paraunitarity of H(i omega), contraction of H11, the claimed PSD bound,
constant normal rank of 1 - |H11|^2 and agreement of the reduced PSD formula
with the full error model. Failures are reported, never raised.
"""

import logging
from dataclasses import asdict, dataclass
from typing import Any, Optional, Sequence, Union

import numpy as np
from numpy.polynomial import polynomial as P

from src.channel.models import ChannelModel
from src.channel.psd import ErrorModel, error_psd_from_values
from src.core.config import get_tolerances
from src.core.errors import CoheqError
from src.core.grid import FrequencyGrid, verification_grid
from src.core.rational import RationalFunction
from src.nevpick.interpolant import PointwiseEqualizer
from src.synthesis.design import EqualizerDesign

logger = logging.getLogger(__name__)

Equalizer = Union[EqualizerDesign, PointwiseEqualizer]

ORACLE_SAMPLES = 100


@dataclass(frozen=True)
class VerificationReport:
    """
    Outcome of ``verify_design``.

    Attributes:
        paraunitarity_residual_max: max |H H^+ - I| and |H^+ H - I| over the grid
        contraction_margin: 1 - max |H11|, including analytic peaks
        psd_bound_margin: gamma^2 bound - sup P_e (None when the design claims no bound)
        h3_rank_constant: 1 - |H11|^2 has constant rank on the grid
        grid_used: Grid summary (size, min, max)
        passed: Paraunitarity, contraction, bound and node checks all hold
        sup_error_psd: Largest P_e on the grid
        analytic_peak_frequency: Frequency of the largest |H11| among the
            real critical points (rational H11 only)
        node_residual_max: Interpolation error at the Pick nodes, when known
        oracle_residual_max: Reduced vs full PSD formula at random frequencies
        failures: Names of the failed checks
    """

    paraunitarity_residual_max: float
    contraction_margin: float
    psd_bound_margin: Optional[float]
    h3_rank_constant: bool
    grid_used: dict[str, float]
    passed: bool
    sup_error_psd: float
    analytic_peak_frequency: Optional[float] = None
    node_residual_max: Optional[float] = None
    oracle_residual_max: Optional[float] = None
    failures: tuple[str, ...] = ()

    def to_dict(self) -> dict[str, Any]:
        data = asdict(self)
        data["failures"] = list(self.failures)
        return data


def critical_frequencies(h11: RationalFunction) -> np.ndarray:
    """
    Real critical points of |h11(i omega)|^2 = N2(omega) / D2(omega): real
    roots of N2' D2 - N2 D2'.
    """
    if h11.is_constant:
        return np.empty(0)
    num = h11.num.on_axis()
    den = h11.den.on_axis()
    n2 = np.real(P.polymul(num, np.conj(num)))
    d2 = np.real(P.polymul(den, np.conj(den)))
    stationary = P.polysub(P.polymul(P.polyder(n2), d2), P.polymul(n2, P.polyder(d2)))
    stationary = np.trim_zeros(np.asarray(stationary, dtype=float), "b")
    if stationary.size <= 1:
        return np.empty(0)
    roots = P.polyroots(stationary)
    real = roots[np.abs(roots.imag) <= 1e-8 * (1.0 + np.abs(roots))].real
    return np.unique(real)


def verify_design(
    channel: ChannelModel,
    design: Equalizer,
    grid: Optional[FrequencyGrid] = None,
    *,
    nodes: Optional[tuple[Sequence[float], Sequence[complex]]] = None,
    seed: int = 0,
) -> VerificationReport:
    """
    Check every invariant the design claims.

    Args:
        channel: Channel the design equalizes
        design: Explicit or pointwise equalizer
        grid: Verification grid (default: dense log grid plus resonances and nodes)
        nodes: Interpolation nodes and values, when the design interpolates
        seed: Seed for the random oracle frequencies

    Returns:
        VerificationReport: passed requires paraunitarity below
        paraunitarity_tol, contraction margin >= -contraction_tol and a
        positive PSD margin when a bound is claimed, and node residuals below
        node_tol when nodes are known

    Example:
        >>> report = verify_design(channel, trivial_design(0.1, 1e-9))
        >>> report.paraunitarity_residual_max
        0.0
    """
    tol = get_tolerances()
    if isinstance(design, PointwiseEqualizer) and nodes is None:
        nodes = (design.h11.problem.omegas, design.h11.problem.values)
    extra = list(channel.resonance_frequencies())
    if nodes is not None:
        extra.extend(float(omega) for omega in nodes[0])
    grid = grid or verification_grid(extra)
    omegas = grid.omegas
    failures: list[str] = []

    values = design.response(omegas)
    adjoint = np.conj(np.transpose(values, (0, 2, 1)))
    identity = np.eye(2)
    para = float(max(np.max(np.abs(values @ adjoint - identity)), np.max(np.abs(adjoint @ values - identity))))
    if not para < tol.paraunitarity_tol:
        failures.append("paraunitarity")

    h11_values = values[:, 0, 0]
    peak = float(np.max(np.abs(h11_values)))
    peak_frequency = None
    if isinstance(design, EqualizerDesign):
        critical = critical_frequencies(design.h11)
        if critical.size:
            magnitudes = np.abs(design.h11.freqresp(critical))
            peak_frequency = float(critical[int(np.argmax(magnitudes))])
            peak = max(peak, float(np.max(magnitudes)))
    contraction = 1.0 - peak
    if contraction < -tol.contraction_tol:
        failures.append("contraction")

    psd = error_psd_from_values(channel, h11_values, omegas)
    sup_psd = float(np.max(psd))
    margin = None
    if design.gamma_sq_bound is not None:
        margin = float(design.gamma_sq_bound - sup_psd)
        if not margin > 0.0:
            failures.append("psd_bound")

    headroom = np.abs(1.0 - np.abs(h11_values) ** 2)
    rank_constant = bool(np.all(headroom > tol.rank_upper) or np.all(headroom < tol.rank_lower))

    node_residual = None
    if nodes is not None:
        node_omegas = np.asarray(nodes[0], dtype=float)
        node_values = design.response(node_omegas)[:, 0, 0]
        node_residual = float(np.max(np.abs(node_values - np.asarray(nodes[1], dtype=complex))))
        if not node_residual < tol.node_tol:
            failures.append("node")

    oracle_residual = None
    try:
        rng = np.random.default_rng(seed)
        samples = rng.uniform(-omegas.max(), omegas.max(), ORACLE_SAMPLES)
        blocks = design.response(samples)
        reduced = error_psd_from_values(channel, blocks[:, 0, 0], samples)
        full = ErrorModel(channel).psd(blocks[:, 0, 0], blocks[:, 0, 1], samples)
        oracle_residual = float(np.max(np.abs(reduced - full)))
    except CoheqError as exc:
        logger.warning("Oracle cross-check skipped: %s", exc)

    report = VerificationReport(
        paraunitarity_residual_max=para,
        contraction_margin=contraction,
        psd_bound_margin=margin,
        h3_rank_constant=rank_constant,
        grid_used=grid.summary(),
        passed=not failures,
        sup_error_psd=sup_psd,
        analytic_peak_frequency=peak_frequency,
        node_residual_max=node_residual,
        oracle_residual_max=oracle_residual,
        failures=tuple(failures),
    )
    if failures:
        logger.warning("Verification failed: %s", ", ".join(failures))
    else:
        logger.info("Verification passed: residual %.2e, contraction margin %.3e", para, contraction)
    return report
