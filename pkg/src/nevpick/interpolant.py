"""
Bounded-real interpolants of node-wise optimal values and their completion.

For a positive definite Pick problem every interpolant is
(W11 Theta + W12) / (W21 Theta + W22) with Theta a stable contraction; the
equalizer entry is the interpolant shifted back by tau, H11(s) = H^(s + tau).

Small node sets are expanded into an explicit ``RationalFunction`` and
completed by the two-step completion. Larger node sets stay in
partial-fraction form and are completed pointwise from the poles and
residues of the interpolant.
"""

import logging
from dataclasses import dataclass, field, replace
from typing import Any, Optional, Union

import numpy as np

from src.core.config import get_settings, get_tolerances
from src.core.errors import DegreeLimitExceeded, RankDropOnAxis, ThetaNotAdmissible
from src.core.rational import RationalFunction, Scalar, as_rational, hinf_norm
from src.nevpick.partial_fraction import PartialFraction
from src.nevpick.pick import PickProblem
from src.spectral.factorization import factor_grid
from src.synthesis.completion import complete_equalizer
from src.synthesis.design import EqualizerDesign

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class Interpolant:
    """
    H11(s) = H^(s + tau) for one choice of Theta.

    Attributes:
        problem: Pick problem the interpolant solves
        theta: Free parameter
        numerator, denominator: Theta W11 + W12 and Theta W21 + W22 in
            partial-fraction form (constant Theta only)
        explicit: H11 as a rational function, when it was expanded
    """

    problem: PickProblem
    theta: RationalFunction
    numerator: Optional[PartialFraction]
    denominator: Optional[PartialFraction]
    explicit: Optional[RationalFunction]

    @property
    def tau(self) -> float:
        return self.problem.tau

    def shifted(self, s):
        """H^(s) in the shifted variable."""
        points = np.asarray(s, dtype=complex)
        if self.numerator is not None:
            return self.numerator(points) / self.denominator(points)
        w = self.problem.w_blocks(np.atleast_1d(points).ravel())
        th = np.atleast_1d(self.theta(np.atleast_1d(points).ravel()))
        values = (w[:, 0, 0] * th + w[:, 0, 1]) / (w[:, 1, 0] * th + w[:, 1, 1])
        return complex(values[0]) if points.ndim == 0 else values.reshape(points.shape)

    def __call__(self, s):
        return self.shifted(np.asarray(s, dtype=complex) + self.tau)

    def freqresp(self, omegas) -> np.ndarray:
        return np.atleast_1d(self(1j * np.asarray(omegas, dtype=float)))

    def poles(self) -> np.ndarray:
        if self.explicit is not None:
            return self.explicit.poles()
        if self.denominator is None:
            raise ThetaNotAdmissible("Poles of a non-constant Theta interpolant are only available when explicit")
        return self.denominator.zeros() - self.tau

    def analytic_margin(self) -> float:
        poles = self.poles()
        return float(-np.max(poles.real)) if poles.size else float("inf")

    def node_residual(self) -> float:
        """max_l |H11(i omega_l) - v_l|."""
        values = self.freqresp(self.problem.omegas)
        return float(np.max(np.abs(values - self.problem.values)))


def interpolant(problem: PickProblem, theta: Scalar = 0.0, max_nodes: Optional[int] = None) -> Interpolant:
    """
    Interpolant for the given Theta.

    Args:
        problem: Positive definite Pick problem
        theta: Stable Theta with ||Theta||_inf < 1
        max_nodes: Largest node count expanded into an explicit rational
            function (default from settings)

    Raises:
        ThetaNotAdmissible: If Theta is unstable or not strictly contractive
        PickNotPD: If the Pick matrix is not positive definite

    Example:
        >>> problem = pick_problem([0.0], [0.5], tau=1e-3)
        >>> round(abs(interpolant(problem)(0.0) - 0.5), 12)
        0.0
    """
    theta = as_rational(theta)
    if not theta.is_stable():
        raise ThetaNotAdmissible("Theta must be stable")
    norm = hinf_norm(theta)
    if not norm < 1.0:
        raise ThetaNotAdmissible("Theta must satisfy ||Theta||_inf < 1", norm=norm)
    limit = get_settings().explicit_interpolant_max_nodes if max_nodes is None else max_nodes

    coefficients = problem.w_blocks
    numerator = denominator = None
    explicit = None
    if theta.is_constant:
        value = theta.constant_value
        combined = coefficients.combination(value)
        numerator = PartialFraction(value, -combined, coefficients.poles)
        denominator = PartialFraction(1.0, -np.conj(problem.values) * combined, coefficients.poles)
        if problem.size <= limit:
            explicit = _expand(numerator, denominator, problem.tau)
    elif problem.size <= limit:
        blocks = {name: block.to_rational() for name, block in coefficients.blocks().items()}
        try:
            shifted = (blocks["w11"] * theta + blocks["w12"]) / (blocks["w21"] * theta + blocks["w22"])
            explicit = shifted.shift(problem.tau)
        except DegreeLimitExceeded:
            logger.warning("Interpolant for a dynamic Theta exceeds the degree cap; keeping it pointwise")

    result = Interpolant(problem=problem, theta=theta, numerator=numerator, denominator=denominator, explicit=explicit)
    logger.debug(
        "Interpolant over %d nodes: node residual %.2e, explicit=%s",
        problem.size,
        result.node_residual(),
        explicit is not None,
    )
    return result


def _expand(numerator: PartialFraction, denominator: PartialFraction, tau: float) -> Optional[RationalFunction]:
    try:
        return RationalFunction(numerator.numerator_polynomial(), denominator.numerator_polynomial()).shift(tau)
    except DegreeLimitExceeded:
        logger.warning("Interpolant exceeds the degree cap; keeping it pointwise")
        return None


@dataclass(frozen=True, eq=False)
class PointwiseEqualizer:
    """
    Paraunitary completion of an interpolant evaluated pointwise on the axis.

    With poles pi_j of H11 and the stable zeros z_j of 1 - H11 H11^H:

        h12 = g prod (s - z_j) / (s - pi_j)
        h21 = U h12,   U = prod (s + conj(z_j)) / (s - z_j)
        h22 = -conj(h11) prod (s + conj(pi_j)) / (s - pi_j)
    """

    h11: Interpolant
    poles: np.ndarray
    zeros: np.ndarray
    gain: float
    gamma_sq_bound: Optional[float] = None
    optimal_value: Optional[float] = None
    method: str = "sdp_nevpick"
    parameters: dict[str, Any] = field(default_factory=dict)

    @property
    def theta(self) -> RationalFunction:
        return self.h11.theta

    def response(self, omegas) -> np.ndarray:
        """H(i omega), shape (N, 2, 2)."""
        s = 1j * np.atleast_1d(np.asarray(omegas, dtype=float))
        h11 = self.h11(s)
        ratio = np.ones_like(s)
        inner_u = np.ones_like(s)
        inner_b = np.ones_like(s)
        for zero, pole in zip(self.zeros, self.poles):
            ratio *= (s - zero) / (s - pole)
            inner_u *= (s + np.conj(zero)) / (s - zero)
            inner_b *= (s + np.conj(pole)) / (s - pole)
        h12 = self.gain * ratio
        out = np.empty((s.size, 2, 2), dtype=complex)
        out[:, 0, 0] = h11
        out[:, 0, 1] = h12
        out[:, 1, 0] = inner_u * h12
        out[:, 1, 1] = -np.conj(h11) * inner_b
        return out

    def is_stable(self) -> bool:
        return bool(np.all(self.poles.real < 0.0) and np.all(self.zeros.real < 0.0))

    def with_bound(self, gamma_sq_bound: float, optimal_value: Optional[float] = None) -> "PointwiseEqualizer":
        return replace(self, gamma_sq_bound=gamma_sq_bound, optimal_value=optimal_value)

    def with_metadata(self, method: Optional[str] = None, **parameters: Any) -> "PointwiseEqualizer":
        return replace(self, method=method or self.method, parameters={**self.parameters, **parameters})


def pointwise_completion(interp: Interpolant, gamma_sq_bound: Optional[float] = None) -> PointwiseEqualizer:
    """
    Complete a constant-Theta interpolant from its poles and residues.

    Raises:
        ThetaNotAdmissible: If Theta is not constant
        RankDropOnAxis: If 1 - |H11|^2 has zeros on the axis, or the
            stable zeros do not match the poles in number
    """
    if interp.numerator is None:
        raise ThetaNotAdmissible("Pointwise completion requires a constant Theta")
    band = get_tolerances().axis_tol
    shifted_poles = interp.denominator.zeros()
    residues = interp.numerator(shifted_poles) / interp.denominator.derivative(shifted_poles)
    poles = shifted_poles - interp.tau
    if np.any(poles.real >= 0.0):
        raise RankDropOnAxis("Interpolant has poles outside the open left half-plane")

    mirror = -np.conj(poles)
    weights = -residues * np.conj(interp(mirror))
    theta = interp.theta.constant_value
    x1 = PartialFraction(
        1.0 - abs(theta) ** 2,
        np.concatenate([weights, -np.conj(weights)]),
        np.concatenate([poles, mirror]),
    )
    zeros = x1.zeros()
    if np.any(np.abs(zeros.real) <= band * np.maximum(1.0, np.abs(zeros))):
        raise RankDropOnAxis("1 - |H11|^2 has a zero on the imaginary axis")
    stable = zeros[zeros.real < 0.0]
    if stable.size != poles.size:
        raise RankDropOnAxis(
            "Stable zeros of 1 - |H11|^2 do not match the interpolant poles",
            zeros=int(stable.size),
            poles=int(poles.size),
        )

    samples = factor_grid().omegas
    s = 1j * samples
    shape = np.ones_like(s)
    for zero, pole in zip(stable, poles):
        shape *= (s - zero) / (s - pole)
    headroom = 1.0 - np.abs(interp(s)) ** 2
    gain = float(np.sqrt(np.median(headroom / np.abs(shape) ** 2)))
    logger.info("Pointwise completion over %d poles, gain %.6g", poles.size, gain)
    return PointwiseEqualizer(
        h11=interp,
        poles=poles,
        zeros=stable,
        gain=gain,
        gamma_sq_bound=gamma_sq_bound,
        parameters={"tau": interp.tau, "nodes": interp.problem.size},
    )


def complete_interpolant(
    interp: Interpolant, gamma_sq_bound: Optional[float] = None
) -> Union[EqualizerDesign, PointwiseEqualizer]:
    """
    Complete an interpolant into a paraunitary equalizer.

    Explicit interpolants go through the two-step completion; the rest are
    completed pointwise.
    """
    if interp.explicit is not None:
        design = complete_equalizer(
            interp.explicit, gamma_sq_bound=gamma_sq_bound, theta=interp.theta, method="sdp_nevpick"
        )
        return design.with_metadata(tau=interp.tau, nodes=interp.problem.size)
    return pointwise_completion(interp, gamma_sq_bound)
