"""
Verification stage: re-checks a design on a fresh dense grid.
"""

import logging
from typing import Optional, Sequence

from src.channel.models import ChannelModel
from src.core.grid import verification_grid
from src.stages.base import Stage, StageResult
from src.verify import Equalizer, certify_threshold, verify_design

logger = logging.getLogger(__name__)


class VerificationStage(Stage):
    """
    Stage that verifies a design and, when it claims a bound, reports the
    threshold certificate at that bound.
    """

    def __init__(self, grid_density: Optional[int] = None, seed: int = 0) -> None:
        super().__init__("verification")
        self.grid_density = grid_density
        self.seed = seed

    def run(
        self,
        channel: ChannelModel,
        design: Equalizer,
        nodes: Optional[tuple[Sequence[float], Sequence[complex]]] = None,
        **kwargs,
    ) -> StageResult:
        """
        Returns:
            StageResult: data["report"] always holds the VerificationReport;
            success is False with error_code "VerificationFailed" when a
            check fails
        """
        extra = list(channel.resonance_frequencies())
        if nodes is not None:
            extra.extend(float(omega) for omega in nodes[0])
        grid = verification_grid(extra, density=self.grid_density)
        report = verify_design(channel, design, grid, nodes=nodes, seed=self.seed)

        data = {"report": report, "certificate": None}
        if design.gamma_sq_bound is not None:
            certificate = certify_threshold(channel, design.gamma_sq_bound)
            data["certificate"] = certificate.to_dict() if certificate is not None else None

        if not report.passed:
            return StageResult(
                success=False,
                data={
                    **data,
                    "error": {
                        "error": "VerificationFailed",
                        "message": f"Verification failed: {', '.join(report.failures)}",
                        "details": report.to_dict(),
                    },
                },
                error=f"Verification failed: {', '.join(report.failures)}",
                error_code="VerificationFailed",
            )
        return StageResult(success=True, data=data)
