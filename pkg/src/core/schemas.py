"""
Experiment configuration and design record schemas.

``ExperimentConfig`` is validated before any computation; its JSON schema is
what ``coheq schema`` and ``GET /schema`` publish. ``DesignRecord`` is the
content of design.json. Complex numbers are stored as [re, im] pairs of
decimal strings with 17 significant digits so that records reload exactly.
"""

import json
from pathlib import Path
from typing import Annotated, Any, Literal, Optional, Union

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator, model_validator

from src.core.errors import ConfigError
from src.core.grid import FrequencyGrid, node_grid_21
from src.core.rational import Polynomial, RationalFunction

ComplexPair = tuple[str, str]


def encode_complex(value: complex) -> ComplexPair:
    value = complex(value)
    return (format(value.real, ".17g"), format(value.imag, ".17g"))


def decode_complex(pair: ComplexPair) -> complex:
    return complex(float(pair[0]), float(pair[1]))


def jsonable(value: Any) -> Any:
    """Plain JSON value for metadata: complex as pairs, numpy scalars unwrapped."""
    if isinstance(value, dict):
        return {str(key): jsonable(item) for key, item in value.items()}
    if isinstance(value, (list, tuple, np.ndarray)):
        return [jsonable(item) for item in value]
    if isinstance(value, np.generic):
        value = value.item()
    if isinstance(value, complex):
        return list(encode_complex(value))
    if isinstance(value, float) and not np.isfinite(value):
        return str(value)
    return value


# =========================================
# CONFIGURATION MODELS
# =========================================

class _Strict(BaseModel):
    model_config = ConfigDict(extra="forbid")


class StaticChannelConfig(_Strict):
    """Static beam splitter: either the transmittance eta or explicit k, m as [re, im]."""

    type: Literal["static"] = "static"
    eta: Optional[float] = Field(default=None, ge=0.0, le=1.0)
    k: Optional[tuple[float, float]] = None
    m: Optional[tuple[float, float]] = None
    phi: float = 0.0

    @model_validator(mode="after")
    def _one_parameterization(self) -> "StaticChannelConfig":
        explicit = self.k is not None or self.m is not None
        if (self.eta is None) == (not explicit):
            raise ValueError("Give either eta or both k and m")
        if explicit and (self.k is None or self.m is None):
            raise ValueError("Both k and m are required")
        return self


class CavityChannelConfig(_Strict):
    """Cavity channel; the physical range of k is checked by the channel constructor."""

    type: Literal["cavity"] = "cavity"
    k: float = 0.4
    kappa: float = 5.0
    omega_c: float = 10.0


ChannelConfig = Annotated[Union[StaticChannelConfig, CavityChannelConfig], Field(discriminator="type")]


class IntensitiesConfig(_Strict):
    sigma_u_sq: float = Field(default=0.1, ge=0.0)
    sigma_w_sq: float = Field(ge=0.0)


class GridConfig(_Strict):
    """Relaxation grid: the 21-node preset or an explicit frequency list."""

    preset: Optional[Literal["paper21"]] = None
    omegas: Optional[list[float]] = None

    @model_validator(mode="after")
    def _one_source(self) -> "GridConfig":
        if self.preset is None and self.omegas is None:
            self.preset = "paper21"
        if self.preset is not None and self.omegas is not None:
            raise ValueError("Give either a grid preset or an omegas list, not both")
        if self.omegas is not None and not self.omegas:
            raise ValueError("The omegas list must not be empty")
        return self

    def build(self) -> FrequencyGrid:
        if self.omegas is not None:
            return FrequencyGrid.from_values(self.omegas)
        return node_grid_21()


class ExperimentConfig(_Strict):
    """
    One experiment: a channel, a synthesis method and its parameters.

    Example:
        >>> config = ExperimentConfig.model_validate({
        ...     "channel": {"type": "cavity"},
        ...     "intensities": {"sigma_w_sq": 0.2},
        ...     "method": "sdp_nevpick",
        ...     "theta": "sweep:[-0.95, 0, 0.95]",
        ... })
        >>> config.theta_values()
        [-0.95, 0.0, 0.95]
    """

    channel: ChannelConfig
    intensities: IntensitiesConfig
    method: Literal["closed_form", "jspectral", "sdp_nevpick"] = "closed_form"
    theta: Optional[Union[float, str]] = None
    gamma_sq: Optional[float] = Field(default=None, gt=0.0)
    grid: GridConfig = Field(default_factory=GridConfig)
    tau: float = Field(default=1e-3, gt=0.0)
    output_dir: Optional[str] = None
    sigma_w_sq_sweep: Optional[list[float]] = None
    figures: list[Literal["fig_compare", "fig_h11", "cav_subopt", "cav_bode", "psds", "ratio"]] = Field(
        default_factory=list
    )

    @field_validator("theta")
    @classmethod
    def _theta_form(cls, value: Optional[Union[float, str]]) -> Optional[Union[float, str]]:
        if isinstance(value, str):
            _parse_sweep(value)
        return value

    @field_validator("sigma_w_sq_sweep")
    @classmethod
    def _sweep_nonnegative(cls, value: Optional[list[float]]) -> Optional[list[float]]:
        if value is not None and any(item < 0.0 for item in value):
            raise ValueError("sigma_w_sq_sweep values must be nonnegative")
        return value

    def theta_values(self) -> Optional[list[float]]:
        """Theta as a list (None when unset)."""
        if self.theta is None:
            return None
        if isinstance(self.theta, str):
            return _parse_sweep(self.theta)
        return [float(self.theta)]

    @classmethod
    def load(cls, path: Union[str, Path]) -> "ExperimentConfig":
        """
        Read and validate a JSON config file.

        Raises:
            ConfigError: If the file is unreadable, not JSON, or fails validation
        """
        return _load(cls, path)


def _parse_sweep(text: str) -> list[float]:
    if not text.startswith("sweep:"):
        raise ValueError("theta must be a number or 'sweep:[...]'")
    try:
        values = json.loads(text[len("sweep:"):])
    except json.JSONDecodeError as exc:
        raise ValueError(f"Invalid theta sweep list: {exc.msg}") from exc
    if not isinstance(values, list) or not values or not all(isinstance(v, (int, float)) for v in values):
        raise ValueError("theta sweep must be a non-empty list of numbers")
    return [float(v) for v in values]


# =========================================
# RECORD MODELS
# =========================================

class BlockRecord(BaseModel):
    """Rational block as ascending coefficient lists."""

    num_coeffs: list[ComplexPair]
    den_coeffs: list[ComplexPair]

    @classmethod
    def from_rational(cls, f: RationalFunction) -> "BlockRecord":
        num, den = f.coefficient_pairs()
        return cls(num_coeffs=[encode_complex(c) for c in num], den_coeffs=[encode_complex(c) for c in den])

    def to_rational(self) -> RationalFunction:
        return RationalFunction(
            Polynomial([decode_complex(c) for c in self.num_coeffs]),
            Polynomial([decode_complex(c) for c in self.den_coeffs]),
        )


class InterpolationRecord(BaseModel):
    """Data needed to rebuild a pointwise interpolant."""

    omegas: list[float]
    values: list[ComplexPair]
    tau: float
    theta: float

    def decoded_values(self) -> np.ndarray:
        return np.array([decode_complex(v) for v in self.values], dtype=complex)


class AlternativeRecord(BaseModel):
    theta: float
    sup_error_psd: Optional[float] = None
    passed: bool = False
    error: Optional[str] = None


class DesignRecord(BaseModel):
    """Contents of design.json."""

    config: ExperimentConfig
    channel: dict[str, Any]
    method: str
    blocks: Optional[dict[str, BlockRecord]] = None
    interpolation: Optional[InterpolationRecord] = None
    gamma_sq_bound: Optional[float] = None
    optimal_value: Optional[float] = None
    gamma_tilde_sq: Optional[float] = None
    theta: Optional[float] = None
    parameters: dict[str, Any] = Field(default_factory=dict)
    realization: Optional[dict[str, Any]] = None
    verification: Optional[dict[str, Any]] = None
    alternatives: list[AlternativeRecord] = Field(default_factory=list)

    @model_validator(mode="after")
    def _has_filter(self) -> "DesignRecord":
        if self.blocks is None and self.interpolation is None:
            raise ValueError("A design record needs either blocks or interpolation data")
        if self.blocks is not None and set(self.blocks) != {"h11", "h12", "h21", "h22"}:
            raise ValueError("blocks must contain exactly h11, h12, h21 and h22")
        return self

    def to_json(self) -> str:
        return json.dumps(self.model_dump(mode="json"), indent=2) + "\n"

    @classmethod
    def load(cls, path: Union[str, Path]) -> "DesignRecord":
        return _load(cls, path)


def _load(model: type[BaseModel], path: Union[str, Path]):
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"Cannot read {path}", reason=str(exc)) from exc
    try:
        return model.model_validate_json(text)
    except ValidationError as exc:
        raise ConfigError(f"Invalid {model.__name__} in {path}", reason=_first_error(exc)) from exc


def _first_error(exc: ValidationError) -> str:
    first = exc.errors()[0]
    location = ".".join(str(part) for part in first.get("loc", ()))
    return f"{location}: {first.get('msg', 'invalid')}" if location else first.get("msg", "invalid")


def config_schema() -> dict[str, Any]:
    """The published JSON schema of ExperimentConfig."""
    return ExperimentConfig.model_json_schema()
