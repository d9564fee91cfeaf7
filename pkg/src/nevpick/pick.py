"""
Pick matrix, shift selection and the coefficient matrix W(s).

Nodes are s_l = i omega_l + tau. The Pick matrix is
P[l, k] = (1 - v_l conj(v_k)) / (s_l + conj(s_k)) and

    W(s) = I - [[1/(s + conj(s_k))], [conj(v_k)/(s + conj(s_k))]] P^{-1} [1, -v_l]

parameterizes every interpolant as (W11 Theta + W12) / (W21 Theta + W22).
"""

import logging
from dataclasses import dataclass
from functools import cached_property
from typing import Optional, Sequence

import numpy as np
from scipy import linalg

from src.core.config import get_settings, get_tolerances
from src.core.errors import CannotAchievePD, DuplicateNodes, NodeInLeftHalfPlane, NotContractive, PickNotPD
from src.nevpick.partial_fraction import PartialFraction

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class PickProblem:
    """
    Interpolation data and its Pick matrix.

    Attributes:
        nodes: s_l with Re s_l > 0
        values: Prescribed values H11(s_l)
        tau: Shift; nodes are i omega_l + tau
        pick_matrix: Hermitian Pick matrix
    """

    nodes: np.ndarray
    values: np.ndarray
    tau: float
    pick_matrix: np.ndarray

    @property
    def size(self) -> int:
        return int(self.nodes.size)

    @property
    def omegas(self) -> np.ndarray:
        return self.nodes.imag.copy()

    @cached_property
    def min_eigenvalue(self) -> float:
        return float(np.linalg.eigvalsh(self.pick_matrix)[0])

    def is_positive_definite(self) -> bool:
        return self.min_eigenvalue > 0.0

    @cached_property
    def w_blocks(self) -> "CoefficientMatrix":
        return coefficient_matrix(self)


def build_pick(nodes: Sequence[complex], values: Sequence[complex], tau: Optional[float] = None) -> PickProblem:
    """
    Assemble the Pick matrix for the given nodes and values.

    Args:
        nodes: Distinct nodes in the open right half-plane
        values: Values with |v| <= 1
        tau: Shift recorded on the problem (default: smallest Re node)

    Raises:
        NodeInLeftHalfPlane: If some Re s_l <= 0
        DuplicateNodes: If two nodes coincide
        NotContractive: If some |v_l| > 1

    Example:
        >>> build_pick([1e-3], [0.0]).pick_matrix
        array([[500.+0.j]])
    """
    nodes = np.atleast_1d(np.asarray(nodes, dtype=complex))
    values = np.atleast_1d(np.asarray(values, dtype=complex))
    if nodes.shape != values.shape:
        raise ValueError("Nodes and values must have the same length")
    if np.any(nodes.real <= 0.0):
        raise NodeInLeftHalfPlane("Pick nodes must lie in the open right half-plane", worst=float(np.min(nodes.real)))
    gaps = np.abs(nodes[:, None] - nodes[None, :]) + np.eye(nodes.size)
    if np.any(gaps < 1e-14 * (1.0 + np.max(np.abs(nodes)))):
        raise DuplicateNodes("Pick nodes must be distinct")
    if np.any(np.abs(values) > 1.0 + get_tolerances().contraction_check_tol):
        raise NotContractive("Interpolation values must lie in the closed unit disc", peak=float(np.max(np.abs(values))))
    pick = (1.0 - values[:, None] * np.conj(values)[None, :]) / (nodes[:, None] + np.conj(nodes)[None, :])
    shift = float(np.min(nodes.real)) if tau is None else float(tau)
    return PickProblem(nodes=nodes, values=values, tau=shift, pick_matrix=pick)


def pick_problem(omegas: Sequence[float], values: Sequence[complex], tau: float) -> PickProblem:
    """Pick problem with nodes i omega_l + tau."""
    return build_pick(1j * np.asarray(omegas, dtype=float) + tau, values, tau=tau)


def choose_tau(values: Sequence[complex], omegas: Sequence[float], tau0: Optional[float] = None) -> float:
    """
    Halve tau from tau0 until the Pick matrix is positive definite with
    minimum eigenvalue above 1e-12 / (2 tau).

    Raises:
        CannotAchievePD: After the configured number of halvings
    """
    settings = get_settings()
    tau = settings.default_tau if tau0 is None else float(tau0)
    for attempt in range(settings.tau_max_halvings + 1):
        problem = pick_problem(omegas, values, tau)
        if problem.min_eigenvalue > 1e-12 / (2.0 * tau):
            if attempt:
                logger.info("Pick matrix positive definite after %d halving(s): tau=%.6g", attempt, tau)
            return tau
        logger.debug("Pick matrix not positive definite at tau=%.6g (min eigenvalue %.3e)", tau, problem.min_eigenvalue)
        tau *= 0.5
    raise CannotAchievePD("Pick matrix never became positive definite", tau=tau, halvings=settings.tau_max_halvings)


@dataclass(frozen=True, eq=False)
class CoefficientMatrix:
    """
    W(s) of a Pick problem. ``weights`` is P^{-1} [1, -v] (L x 2).
    """

    problem: PickProblem
    weights: np.ndarray

    @property
    def poles(self) -> np.ndarray:
        return -np.conj(self.problem.nodes)

    def blocks(self) -> dict[str, PartialFraction]:
        conj_values = np.conj(self.problem.values)
        first, second = self.weights[:, 0], self.weights[:, 1]
        return {
            "w11": PartialFraction(1.0, -first, self.poles),
            "w12": PartialFraction(0.0, -second, self.poles),
            "w21": PartialFraction(0.0, -conj_values * first, self.poles),
            "w22": PartialFraction(1.0, -conj_values * second, self.poles),
        }

    def __call__(self, s) -> np.ndarray:
        """W(s), shape (2, 2) for scalar s, (N, 2, 2) otherwise."""
        points = np.asarray(s, dtype=complex)
        blocks = self.blocks()
        flat = np.atleast_1d(points).ravel()
        out = np.empty((flat.size, 2, 2), dtype=complex)
        out[:, 0, 0] = blocks["w11"](flat)
        out[:, 0, 1] = blocks["w12"](flat)
        out[:, 1, 0] = blocks["w21"](flat)
        out[:, 1, 1] = blocks["w22"](flat)
        return out[0] if points.ndim == 0 else out

    def combination(self, theta: complex) -> np.ndarray:
        """P^{-1} [1, -v] [theta, 1]^T."""
        return self.weights @ np.array([theta, 1.0], dtype=complex)


def coefficient_matrix(problem: PickProblem) -> CoefficientMatrix:
    """
    Coefficient matrix via a Cholesky solve against the Pick matrix.

    Raises:
        PickNotPD: If the Pick matrix is not positive definite
    """
    rhs = np.column_stack([np.ones(problem.size, dtype=complex), -problem.values])
    try:
        factor = linalg.cho_factor(problem.pick_matrix)
    except linalg.LinAlgError as exc:
        raise PickNotPD("Pick matrix is not positive definite", min_eigenvalue=problem.min_eigenvalue) from exc
    return CoefficientMatrix(problem=problem, weights=linalg.cho_solve(factor, rhs))
