"""
Spectral factorization of scalar para-Hermitian rational functions.

Roots of a para-Hermitian function come in mirror pairs (r, -conj(r)). The
factor keeps the left half-plane member of every pair. Roots within
``axis_tol`` of the imaginary axis are paired by imaginary part and the member
with the smaller real part is kept. The gain is the positive constant that
matches |factor|^2 to the function on the axis.
"""

import logging

import numpy as np

from src.core.config import get_tolerances
from src.core.errors import NotFactorable, PoleHit
from src.core.grid import FrequencyGrid, log_grid
from src.core.rational import RationalFunction

logger = logging.getLogger(__name__)


def factor_grid() -> FrequencyGrid:
    return log_grid(1e-3, 1e3, 100)


def _half_of_mirror_pairs(roots: np.ndarray, what: str) -> list[complex]:
    band = get_tolerances().axis_tol
    near_axis = np.abs(roots.real) <= band * np.maximum(1.0, np.abs(roots))
    stable = roots[(roots.real < 0) & ~near_axis]
    unstable = roots[(roots.real > 0) & ~near_axis]
    if stable.size != unstable.size:
        raise NotFactorable(
            f"{what} are not mirror-paired across the imaginary axis",
            stable=int(stable.size),
            unstable=int(unstable.size),
        )
    kept = list(stable)
    axis = sorted(roots[near_axis], key=lambda r: (r.imag, r.real))
    if len(axis) % 2:
        raise NotFactorable(f"{what} on the imaginary axis have odd multiplicity", count=len(axis))
    for first, second in zip(axis[0::2], axis[1::2]):
        kept.append(first if first.real <= second.real else second)
    return kept


def spectral_factor(x: RationalFunction, grid: FrequencyGrid | None = None) -> RationalFunction:
    """
    Factor x = M M^H with M stable and minimum phase.

    Args:
        x: Para-Hermitian rational function, nonnegative on the imaginary axis
        grid: Frequencies used for the sign test, gain matching and residual
            check; defaults to a log grid on +/-[1e-3, 1e3]

    Returns:
        RationalFunction: M with left half-plane poles and zeros and a real
        positive gain

    Raises:
        NotFactorable: If x is negative somewhere on the axis, is not
            para-Hermitian, has poles on the axis or the factor fails the
            residual check

    Example:
        >>> spectral_factor(RationalFunction.constant(0.13)).constant_value
        (0.36055512754639896+0j)
    """
    tol = get_tolerances()
    if x.is_constant:
        value = x.constant_value
        if abs(value.imag) > tol.factor_tol or value.real < -tol.psd_nonneg_tol:
            raise NotFactorable("Constant is not a nonnegative real number", value=value)
        return RationalFunction.constant(np.sqrt(max(value.real, 0.0)))

    if not x.is_para_hermitian():
        raise NotFactorable("Function is not para-Hermitian")

    omegas = (grid or factor_grid()).omegas
    try:
        samples = x.freqresp(omegas)
    except PoleHit as exc:
        raise NotFactorable("Function has a pole on the imaginary axis") from exc
    scale = 1.0 + np.abs(samples)
    if np.min(samples.real / scale) < -tol.psd_nonneg_tol:
        worst = int(np.argmin(samples.real))
        raise NotFactorable(
            "Function is negative on the imaginary axis",
            omega=float(omegas[worst]),
            value=float(samples.real[worst]),
        )

    zeros = _half_of_mirror_pairs(x.zeros(), "zeros")
    kept_poles = _half_of_mirror_pairs(x.poles(), "poles")
    if any(p.real >= 0.0 for p in kept_poles):
        raise NotFactorable("Function has a pole on the imaginary axis")

    shape = RationalFunction.from_zpk(zeros, kept_poles, 1.0)
    shape_sq = np.abs(shape.freqresp(omegas)) ** 2
    usable = shape_sq > 1e-8 * np.max(shape_sq)
    gain = np.sqrt(np.median(samples.real[usable] / shape_sq[usable]))
    factor = shape * float(gain)

    residual = np.abs(np.abs(factor.freqresp(omegas)) ** 2 - samples.real)
    worst = float(np.max(residual / scale))
    if worst > tol.factor_tol:
        raise NotFactorable("Spectral factor fails the residual check", residual=worst)
    logger.debug("Spectral factor of degree %d, residual %.2e", factor.den.degree, worst)
    return factor
