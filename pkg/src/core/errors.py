"""
Exception hierarchy for the equalizer toolkit.

Numerical layers raise these exceptions; the pipeline stages turn them into
failed ``StageResult`` objects and the CLI maps them onto exit codes. Every
exception carries a ``details`` dictionary with the quantities that triggered
it, so the machine-readable error JSON names the offending value.
"""

from typing import Any


class CoheqError(Exception):
    """
    Base class for all toolkit errors.

    Args:
        message: Human-readable description
        **details: Values that explain the failure (serialized with ``to_dict``)

    Example:
        >>> err = ParameterOutOfRange("k^2 must lie in (0, 1/2)", k=0.8)
        >>> err.to_dict()["error"]
        'ParameterOutOfRange'
    """

    def __init__(self, message: str, **details: Any) -> None:
        super().__init__(message)
        self.message = message
        self.details = details

    @property
    def code(self) -> str:
        return type(self).__name__

    def to_dict(self) -> dict[str, Any]:
        return {
            "error": self.code,
            "message": self.message,
            "details": {key: _jsonable(value) for key, value in self.details.items()},
        }


def _jsonable(value: Any) -> Any:
    if isinstance(value, complex):
        return [value.real, value.imag]
    if isinstance(value, (int, float, str, bool)) or value is None:
        return value
    try:
        return float(value)
    except (TypeError, ValueError):
        return str(value)


# --- rational algebra ---

class RationalError(CoheqError):
    pass


class PoleHit(RationalError):
    """Evaluation point coincides with a pole within tolerance."""


class SingularMatrix(RationalError):
    """Inverse requested of an identically zero function or determinant."""


class UnstableInput(RationalError):
    """A stable function was required."""


class DegreeLimitExceeded(RationalError):
    """Polynomial degree exceeded the hard cap."""


# --- channel models ---

class ChannelError(CoheqError):
    pass


class NotUnitary(ChannelError):
    pass


class ParameterOutOfRange(ChannelError):
    pass


# --- spectral factorization ---

class FactorizationError(CoheqError):
    pass


class NotFactorable(FactorizationError):
    pass


class GammaTooSmall(FactorizationError):
    pass


class GammaTooLarge(FactorizationError):
    pass


class BetaNotAdmissible(FactorizationError):
    pass


# --- synthesis ---

class SynthesisError(CoheqError):
    pass


class ThetaNotContractive(SynthesisError):
    pass


class ThetaUnstable(SynthesisError):
    pass


class ThetaOutOfInterval(SynthesisError):
    pass


class ThetaIntervalEmpty(SynthesisError):
    """beta + alpha does not exceed Upsilon3 / mu, so no constant Theta is admissible."""


class RankDropOnAxis(SynthesisError):
    pass


class NotContractive(SynthesisError):
    pass


class DegenerateChannel(SynthesisError):
    pass


class BranchMismatch(SynthesisError):
    pass


class NotRealizable(SynthesisError):
    """Completed filter violates the paraunitarity identities."""


class FamilyMismatch(SynthesisError):
    """Closed-form cavity H11 disagrees with the parameterized family."""


class Infeasible(SynthesisError):
    pass


# --- interpolation ---

class InterpolationError(CoheqError):
    pass


class DuplicateNodes(InterpolationError):
    pass


class NodeInLeftHalfPlane(InterpolationError):
    pass


class CannotAchievePD(InterpolationError):
    pass


class PickNotPD(InterpolationError):
    pass


class ThetaNotAdmissible(InterpolationError):
    pass


# --- configuration ---

class ConfigError(CoheqError):
    pass
