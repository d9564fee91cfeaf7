"""
Base stage class and result type for the design pipeline.

Every pipeline step (synthesis, verification, export, figures) inherits from
``Stage`` and reports through ``StageResult``. Numerical layers raise
``CoheqError``; stages turn those into failed results so the orchestrator can
name the stage that stopped the run.
"""

from abc import ABC, abstractmethod
from dataclasses import dataclass
from typing import Any

from src.core.errors import CoheqError


@dataclass
class StageResult:
    """
    Standard result object returned by all stages.

    Attributes:
        success: Whether the stage completed
        data: Stage output (python objects, not necessarily JSON)
        error: Error message if the stage failed
        error_code: Machine-readable error name (the exception class name)

    Examples:
        >>> result = StageResult(success=True, data={"design": design})
        >>> result = StageResult(success=False, error="Pick matrix is not positive definite", error_code="PickNotPD")
    """

    success: bool
    data: dict[str, Any] | None = None
    error: str | None = None
    error_code: str | None = None

    @classmethod
    def failure(cls, exc: CoheqError, **data: Any) -> "StageResult":
        return cls(success=False, data={"error": exc.to_dict(), **data}, error=exc.message, error_code=exc.code)

    def error_dict(self) -> dict[str, Any]:
        """The machine-readable error JSON of a failed stage."""
        if self.data and "error" in self.data:
            return self.data["error"]
        return {"error": self.error_code, "message": self.error, "details": {}}


class Stage(ABC):
    """
    Abstract base class for all pipeline stages.

    Attributes:
        name: The stage identifier used in failure reports (e.g. "synthesis")

    Example:
        >>> class EchoStage(Stage):
        ...     def run(self, **kwargs) -> StageResult:
        ...         return StageResult(success=True, data=kwargs)
        >>> EchoStage(name="echo").run(value=1).data
        {'value': 1}
    """

    def __init__(self, name: str) -> None:
        self.name = name

    @abstractmethod
    def run(self, **kwargs) -> StageResult:
        """
        Execute the stage.

        Returns:
            StageResult: success flag, output data and error information
        """
