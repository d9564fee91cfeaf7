from src.stages.base import Stage, StageResult
from src.stages.export import ExportStage
from src.stages.figures import FiguresStage
from src.stages.records import SynthesisOutcome, build_channel, design_from_record, to_record
from src.stages.synthesis import SynthesisStage
from src.stages.verification import VerificationStage

__all__ = [
    "ExportStage",
    "FiguresStage",
    "Stage",
    "StageResult",
    "SynthesisOutcome",
    "SynthesisStage",
    "VerificationStage",
    "build_channel",
    "design_from_record",
    "to_record",
]
