"""
Two-step completion of a contractive H11 into a paraunitary 2x2 filter.

H12 is the spectral factor of X1 = 1 - H11 H11^H and H21~ the spectral factor
of X2 = 1 - H11^H H11. The remaining blocks are H21 = U H21~ and
H22 = -U (H21~^{-1})^H H11^H H12 where the inner function U cancels the
unstable poles of (H21~^{-1})^H H11^H H12.
"""

import logging
from typing import Optional

import numpy as np

from src.core.config import get_tolerances
from src.core.errors import NotContractive, NotRealizable, RankDropOnAxis, UnstableInput
from src.core.grid import FrequencyGrid, feasibility_grid
from src.core.rational import Polynomial, RationalFunction, Scalar, as_rational
from src.spectral.factorization import spectral_factor
from src.spectral.jspectral import AuxiliaryFactorization
from src.synthesis.design import EqualizerDesign

logger = logging.getLogger(__name__)


def normal_rank(x2: RationalFunction, grid: FrequencyGrid) -> int:
    """
    Normal rank of the scalar X2 on the axis: 1, 0, or RankDropOnAxis.
    """
    tol = get_tolerances()
    magnitude = np.abs(x2.freqresp(grid.omegas))
    if np.all(magnitude > tol.rank_upper):
        return 1
    if np.all(magnitude < tol.rank_lower):
        return 0
    worst = int(np.argmin(magnitude))
    raise RankDropOnAxis(
        "1 - |H11|^2 vanishes at isolated axis frequencies",
        omega=float(grid.omegas[worst]),
        value=float(magnitude[worst]),
    )


def cancelling_allpass(f: RationalFunction) -> RationalFunction:
    """
    Inner U = prod (s - p) / (s + conj(p)) over the right half-plane poles p of f.

    Raises:
        RankDropOnAxis: If f has a pole on the imaginary axis
    """
    band = get_tolerances().axis_tol
    poles = f.poles()
    if np.any(np.abs(poles.real) <= band * np.maximum(1.0, np.abs(poles))):
        raise RankDropOnAxis("Completion requires cancelling a pole on the imaginary axis")
    unstable = poles[poles.real > 0.0]
    if unstable.size == 0:
        return RationalFunction.constant(1.0)
    return RationalFunction(Polynomial.from_roots(unstable), Polynomial.from_roots(-np.conj(unstable)))


def paraunitarity_residual(design: EqualizerDesign, grid: FrequencyGrid) -> float:
    values = design.response(grid.omegas)
    adjoint = np.conj(np.transpose(values, (0, 2, 1)))
    identity = np.eye(2)
    return float(max(np.max(np.abs(values @ adjoint - identity)), np.max(np.abs(adjoint @ values - identity))))


def complete_equalizer(
    h11: Scalar,
    *,
    gamma_sq_bound: Optional[float] = None,
    theta: Optional[Scalar] = None,
    aux: Optional[AuxiliaryFactorization] = None,
    grid: Optional[FrequencyGrid] = None,
    method: str = "completion",
) -> EqualizerDesign:
    """
    Embed h11 into a full paraunitary equalizer.

    Args:
        h11: Stable, proper, contractive H11
        gamma_sq_bound: Cost claim carried by the returned design
        theta: Parameter the h11 came from (metadata)
        aux: Factorization the h11 came from (metadata)
        grid: Frequencies for the contraction and rank tests
        method: Name recorded on the design

    Returns:
        EqualizerDesign: diag(h11, 1) when h11 is inner, otherwise the
        two-step completion

    Raises:
        UnstableInput: If h11 is unstable or improper, or a block comes out unstable
        NotContractive: If |h11(i omega)| exceeds 1 on the grid
        RankDropOnAxis: If 1 - |h11|^2 touches zero at isolated frequencies
        NotRealizable: If the completed filter misses paraunitarity_tol on the grid

    Example:
        >>> design = complete_equalizer(0.0)
        >>> design.h12.constant_value, design.h21.constant_value
        ((1+0j), (1+0j))
    """
    tol = get_tolerances()
    h11 = as_rational(h11)
    grid = grid or feasibility_grid()
    if not h11.is_stable() or not h11.is_proper():
        raise UnstableInput("H11 must be stable and proper")
    peak = float(np.max(np.abs(h11.freqresp(grid.omegas))))
    if peak > 1.0 + tol.contraction_check_tol:
        raise NotContractive("H11 is not contractive on the imaginary axis", peak=peak)

    h11_adj = h11.para_conjugate()
    x1 = 1.0 - h11 * h11_adj
    x2 = 1.0 - h11_adj * h11
    extras = dict(
        gamma_sq_bound=gamma_sq_bound,
        theta=as_rational(theta) if theta is not None else RationalFunction.constant(0.0),
        aux=aux,
        method=method,
    )
    if normal_rank(x2, grid) == 0:
        logger.info("H11 is inner; completing without extra noise channels")
        return EqualizerDesign(
            h11=h11,
            h12=RationalFunction.constant(0.0),
            h21=RationalFunction.constant(0.0),
            h22=RationalFunction.constant(1.0),
            **extras,
        )

    h12 = spectral_factor(x1)
    h21_tilde = spectral_factor(x2)
    coupling = h21_tilde.inverse().para_conjugate() * h11_adj * h12
    u = cancelling_allpass(coupling)
    design = EqualizerDesign(h11=h11, h12=h12, h21=u * h21_tilde, h22=-(u * coupling), u_allpass=u, **extras)
    if not design.matrix.is_stable():
        raise UnstableInput("Completion produced an unstable block")

    residual = paraunitarity_residual(design, grid)
    if not residual < tol.paraunitarity_tol:
        raise NotRealizable(
            "Completed filter is not paraunitary", residual=residual, tolerance=tol.paraunitarity_tol
        )
    logger.debug("Completed H11 with %d cancelled pole(s), residual %.2e", u.den.degree, residual)
    return design.with_metadata(completion_residual=residual)
