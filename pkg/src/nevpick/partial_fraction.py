"""
Rational functions with simple poles kept in partial-fraction form.

Interpolants with many nodes are evaluated and factored in this form; the
expanded polynomial coefficients would lose accuracy.
"""

from dataclasses import dataclass

import numpy as np
from scipy import linalg

from src.core.config import get_tolerances
from src.core.errors import PoleHit
from src.core.rational import Polynomial, RationalFunction


@dataclass(frozen=True, eq=False)
class PartialFraction:
    """
    f(s) = constant + sum_k residues[k] / (s - poles[k]).

    Example:
        >>> f = PartialFraction(1.0, np.array([2.0]), np.array([-1.0]))
        >>> f.zeros()
        array([-3.+0.j])
    """

    constant: complex
    residues: np.ndarray
    poles: np.ndarray

    def __post_init__(self) -> None:
        residues = np.atleast_1d(np.asarray(self.residues, dtype=complex))
        poles = np.atleast_1d(np.asarray(self.poles, dtype=complex))
        if residues.shape != poles.shape:
            raise ValueError("Residues and poles must have the same length")
        object.__setattr__(self, "constant", complex(self.constant))
        object.__setattr__(self, "residues", residues)
        object.__setattr__(self, "poles", poles)

    def _gaps(self, s) -> tuple[np.ndarray, np.ndarray]:
        points = np.asarray(s, dtype=complex)
        gaps = np.atleast_1d(points).ravel()[:, None] - self.poles[None, :]
        if gaps.size and np.min(np.abs(gaps)) < get_tolerances().pole_tol:
            raise PoleHit("Evaluation point coincides with a pole")
        return points, gaps

    def __call__(self, s):
        points, gaps = self._gaps(s)
        values = self.constant + np.sum(self.residues[None, :] / gaps, axis=1)
        return complex(values[0]) if points.ndim == 0 else values.reshape(points.shape)

    def derivative(self, s):
        points, gaps = self._gaps(s)
        values = -np.sum(self.residues[None, :] / gaps**2, axis=1)
        return complex(values[0]) if points.ndim == 0 else values.reshape(points.shape)

    def zeros(self) -> np.ndarray:
        """
        Finite zeros: generalized eigenvalues of [[diag(poles), residues], [1^T, constant]]
        against diag(1, ..., 1, 0).
        """
        n = self.poles.size
        if n == 0:
            return np.empty(0, dtype=complex)
        pencil = np.zeros((n + 1, n + 1), dtype=complex)
        pencil[:n, :n] = np.diag(self.poles)
        pencil[:n, n] = self.residues
        pencil[n, :n] = 1.0
        pencil[n, n] = self.constant
        mass = np.diag(np.r_[np.ones(n), 0.0]).astype(complex)
        eigenvalues = linalg.eigvals(pencil, mass)
        finite = eigenvalues[np.isfinite(eigenvalues)]
        scale = 1.0 + np.max(np.abs(self.poles))
        return finite[np.abs(finite) < 1e8 * scale]

    def numerator_polynomial(self) -> Polynomial:
        """Numerator over the common denominator prod (s - poles[k])."""
        total = Polynomial.from_roots(self.poles) * self.constant
        for k, residue in enumerate(self.residues):
            total = total + Polynomial.from_roots(np.delete(self.poles, k)) * residue
        return total

    def to_rational(self) -> RationalFunction:
        return RationalFunction(self.numerator_polynomial(), Polynomial.from_roots(self.poles))
