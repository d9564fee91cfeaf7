"""
Node problem for multimode channels (n > 1), solved by projected gradient.

The largest eigenvalue of P_e(H) = H Psi H^+ - H K - K^+ H^+ + Sigma_u^T + 2I,
K = G11 (I + Sigma_u^T), is smoothed by a soft-max over the spectrum;
iterates are projected onto the contractions by clipping singular values.
The best iterate by the true largest eigenvalue is returned.
"""

import logging
from dataclasses import dataclass
from typing import Optional

import numpy as np

from src.core.config import get_settings

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class MatrixNodeOptimum:
    h11: np.ndarray
    cost: float
    iterations: int


def project_contraction(h: np.ndarray) -> np.ndarray:
    u, singular, vh = np.linalg.svd(h)
    return (u * np.minimum(singular, 1.0)) @ vh


def error_psd_matrix(h: np.ndarray, psi: np.ndarray, g11: np.ndarray, sigma_u: np.ndarray) -> np.ndarray:
    n = h.shape[0]
    coupling = g11 @ (np.eye(n) + sigma_u.T)
    adjoint = h.conj().T
    return h @ psi @ adjoint - h @ coupling - coupling.conj().T @ adjoint + sigma_u.T + 2.0 * np.eye(n)


def _largest_eigenvalue(p: np.ndarray) -> float:
    return float(np.linalg.eigvalsh(0.5 * (p + p.conj().T))[-1])


def _power_iteration(matrix: np.ndarray, iterations: int = 100) -> float:
    vector = np.ones(matrix.shape[0], dtype=complex) / np.sqrt(matrix.shape[0])
    estimate = 0.0
    for _ in range(iterations):
        image = matrix @ vector
        norm = np.linalg.norm(image)
        if norm == 0.0:
            return 0.0
        vector = image / norm
        estimate = float(np.real(vector.conj() @ matrix @ vector))
    return estimate


def per_frequency_optimum_matrix(
    g11: np.ndarray,
    psi: np.ndarray,
    sigma_u: np.ndarray,
    max_iterations: Optional[int] = None,
    temperature: Optional[float] = None,
) -> MatrixNodeOptimum:
    """
    Best-effort minimizer of lambda_max(P_e(H)) over contractions H.

    Args:
        g11: G11(i omega), n x n
        psi: Psi(i omega), n x n Hermitian positive semidefinite
        sigma_u: Input intensity matrix, n x n
        max_iterations: Iteration cap (default from settings)
        temperature: Soft-max smoothing width; defaults to 1e-3 times the
            scale of P_e(0)

    Returns:
        MatrixNodeOptimum: Best iterate and its largest eigenvalue
    """
    g11 = np.atleast_2d(np.asarray(g11, dtype=complex))
    psi = np.atleast_2d(np.asarray(psi, dtype=complex))
    sigma_u = np.atleast_2d(np.asarray(sigma_u, dtype=complex))
    n = g11.shape[0]
    limit = max_iterations or get_settings().pg_max_iterations
    coupling_adj = (g11 @ (np.eye(n) + sigma_u.T)).conj().T

    step = 1.0 / max(2.0 * _power_iteration(psi), 1e-12)
    h = np.zeros((n, n), dtype=complex)
    best_h, best = h, _largest_eigenvalue(error_psd_matrix(h, psi, g11, sigma_u))
    width = temperature or 1e-3 * max(1.0, abs(best))
    stall = 0
    iteration = 0
    for iteration in range(1, limit + 1):
        values, vectors = np.linalg.eigh(error_psd_matrix(h, psi, g11, sigma_u))
        weights = np.exp((values - values[-1]) / width)
        weights /= weights.sum()
        smooth = (vectors * weights) @ vectors.conj().T
        gradient = 2.0 * smooth @ (h @ psi - coupling_adj)
        h = project_contraction(h - step * gradient)
        value = _largest_eigenvalue(error_psd_matrix(h, psi, g11, sigma_u))
        if value < best - 1e-14:
            best, best_h, stall = value, h, 0
        else:
            stall += 1
            if stall >= 200:
                break
    logger.debug("Projected gradient stopped after %d iterations at %.12g", iteration, best)
    return MatrixNodeOptimum(h11=best_h, cost=best, iterations=iteration)
