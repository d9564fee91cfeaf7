"""
Equalizer design records shared by every synthesis path.
"""

from dataclasses import dataclass, field, replace
from typing import Any, Optional

import numpy as np

from src.core.rational import RationalFunction, TransferMatrix
from src.spectral.jspectral import AuxiliaryFactorization


@dataclass(frozen=True, eq=False)
class EqualizerDesign:
    """
    Full 2x2 passive equalizer H(s) with its cost claim.

    Attributes:
        h11, h12, h21, h22: Blocks of H(s)
        gamma_sq_bound: Guaranteed bound on sup P_e (None when no claim is made)
        theta: Free parameter the design was built from
        aux: Auxiliary factorization, when the J-spectral path was used
        u_allpass: Inner factor that cancelled the unstable poles in completion
        optimal_value: Exact attained optimum when the design is optimal
        method: Name of the synthesis path
        parameters: Scalar metadata (closed-form constants, offsets)
    """

    h11: RationalFunction
    h12: RationalFunction
    h21: RationalFunction
    h22: RationalFunction
    gamma_sq_bound: Optional[float] = None
    theta: RationalFunction = field(default_factory=lambda: RationalFunction.constant(0.0))
    aux: Optional[AuxiliaryFactorization] = None
    u_allpass: RationalFunction = field(default_factory=lambda: RationalFunction.constant(1.0))
    optimal_value: Optional[float] = None
    method: str = "completion"
    parameters: dict[str, Any] = field(default_factory=dict)

    @property
    def matrix(self) -> TransferMatrix:
        return TransferMatrix.from_rows([[self.h11, self.h12], [self.h21, self.h22]])

    @property
    def blocks(self) -> dict[str, RationalFunction]:
        return {"h11": self.h11, "h12": self.h12, "h21": self.h21, "h22": self.h22}

    def response(self, omegas) -> np.ndarray:
        """H(i omega), shape (N, 2, 2)."""
        return self.matrix.freqresp(omegas)

    def with_bound(self, gamma_sq_bound: float, optimal_value: Optional[float] = None) -> "EqualizerDesign":
        return replace(self, gamma_sq_bound=gamma_sq_bound, optimal_value=optimal_value)

    def with_metadata(self, method: Optional[str] = None, **parameters: Any) -> "EqualizerDesign":
        return replace(self, method=method or self.method, parameters={**self.parameters, **parameters})


def trivial_design(sigma_u_sq: float, guard: float) -> EqualizerDesign:
    """The swap filter H = [[0, 1], [1, 0]], whose cost is sigma_u^2 + 2 at every frequency."""
    return EqualizerDesign(
        h11=RationalFunction.constant(0.0),
        h12=RationalFunction.constant(1.0),
        h21=RationalFunction.constant(1.0),
        h22=RationalFunction.constant(0.0),
        gamma_sq_bound=sigma_u_sq + 2.0 + guard,
        optimal_value=sigma_u_sq + 2.0,
        method="trivial",
    )
