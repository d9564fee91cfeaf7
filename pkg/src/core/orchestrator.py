"""
Orchestrator for the equalizer design pipeline.

This module runs the stages in sequence (synthesis, verification, export)
and passes data between them. If a stage fails, the orchestrator returns an
error naming that stage.
"""

import logging
from typing import Any, Optional

from src.core.config import get_settings
from src.core.errors import CoheqError
from src.core.schemas import DesignRecord, ExperimentConfig
from src.stages.export import ExportStage
from src.stages.figures import FiguresStage
from src.stages.records import build_channel, design_from_record, record_nodes, to_record
from src.stages.synthesis import SynthesisStage
from src.stages.verification import VerificationStage

logger = logging.getLogger(__name__)


class Orchestrator:
    """
    Orchestrates the design pipeline.

    1. Synthesis - build the channel and run the configured method
    2. Verification - re-check the design on a fresh dense grid
    3. Export - write design.json, CSVs and the summary

    Attributes:
        synthesis: SynthesisStage instance
        verification: VerificationStage instance
        export: ExportStage instance
        figures: FiguresStage instance

    Example:
        >>> orchestrator = Orchestrator()
        >>> result = orchestrator.run(config)
        >>> if result["status"] == "completed":
        ...     print(result["paths"]["design"])
    """

    def __init__(self, grid_density: Optional[int] = None, seed: int = 0) -> None:
        self.synthesis = SynthesisStage()
        self.verification = VerificationStage(grid_density=grid_density, seed=seed)
        self.export = ExportStage()
        self.figures = FiguresStage()

    def run(
        self,
        config: ExperimentConfig,
        output_dir: Optional[str] = None,
        theta: Optional[float] = None,
        write: bool = True,
    ) -> dict[str, Any]:
        """
        Execute synthesis, verification and export for one config.

        Args:
            config: Validated experiment config
            output_dir: Overrides config.output_dir and the settings default
            theta: Overrides the config's Theta
            write: Skip the export stage when False

        Returns:
            dict: On success
                  {"status": "completed", "record": dict, "paths": dict}

                  On failure
                  {"error": str, "stage": str, "code": str, "details": dict}
                  plus "record" and "paths" when the failure is a
                  verification failure (the artifacts are still written)
        """
        # STEP 1: SYNTHESIS
        synthesis_result = self.synthesis.run(config=config, theta=theta)
        if not synthesis_result.success:
            return self._failure(synthesis_result, "synthesis")
        outcome = synthesis_result.data["outcome"]

        # STEP 2: VERIFICATION
        verification_result = self.verification.run(
            channel=outcome.channel, design=outcome.design, nodes=outcome.nodes
        )
        report = verification_result.data["report"]
        record = to_record(config, outcome, report, verification_result.data["certificate"])

        # STEP 3: EXPORT
        paths: dict[str, str] = {}
        if write:
            target = output_dir or config.output_dir or get_settings().output_dir
            export_result = self.export.run(
                record=record,
                channel=outcome.channel,
                design=outcome.design,
                output_dir=target,
                nodes=outcome.nodes,
            )
            if not export_result.success:
                return self._failure(export_result, "export")
            paths = export_result.data["paths"]

        # STEP 4: RETURN FINAL RESPONSE
        record_data = record.model_dump(mode="json")
        if not verification_result.success:
            failure = self._failure(verification_result, "verification")
            return {**failure, "record": record_data, "paths": paths}
        return {"status": "completed", "record": record_data, "paths": paths}

    def verify_record(self, record: DesignRecord) -> dict[str, Any]:
        """
        Rebuild a recorded design and verify it again.

        Returns:
            dict: {"status": "completed", "report": dict} or a failure dict
            with stage "verification" (and "report" when checks failed)
        """
        try:
            channel = build_channel(record.config)
            design = design_from_record(record)
        except CoheqError as exc:
            return {"error": exc.message, "stage": "verification", "code": exc.code, "details": exc.to_dict()["details"]}
        result = self.verification.run(channel=channel, design=design, nodes=record_nodes(record))
        report = result.data["report"].to_dict()
        if not result.success:
            return {**self._failure(result, "verification"), "report": report}
        return {"status": "completed", "report": report, "certificate": result.data["certificate"]}

    def run_figures(self, config: ExperimentConfig, output_dir: Optional[str] = None) -> dict[str, Any]:
        target = output_dir or config.output_dir or get_settings().output_dir
        result = self.figures.run(config=config, output_dir=target)
        if not result.success:
            return self._failure(result, "figures")
        return {"status": "completed", "paths": result.data["paths"]}

    @staticmethod
    def _failure(result, stage: str) -> dict[str, Any]:
        error = result.error_dict()
        logger.warning("Pipeline stopped at %s: %s", stage, result.error)
        return {
            "error": result.error,
            "stage": stage,
            "code": result.error_code,
            "details": error.get("details", {}),
        }
