"""
Conversions between configs, in-memory designs and design records.
"""

from dataclasses import dataclass, field
from typing import Any, Optional

import numpy as np

from src.channel.models import (
    ChannelModel,
    FieldIntensities,
    new_cavity_channel,
    new_static_channel,
    static_channel_from_transmittance,
)
from src.core.rational import RationalFunction
from src.core.schemas import (
    AlternativeRecord,
    BlockRecord,
    CavityChannelConfig,
    DesignRecord,
    ExperimentConfig,
    InterpolationRecord,
    encode_complex,
    jsonable,
)
from src.nevpick import PointwiseEqualizer, interpolant, pick_problem, pointwise_completion
from src.synthesis.design import EqualizerDesign
from src.verify import Equalizer, VerificationReport


def build_channel(config: ExperimentConfig, sigma_w_sq: Optional[float] = None) -> ChannelModel:
    """
    Channel described by a config, optionally at another environment intensity.

    Raises:
        ParameterOutOfRange, NotUnitary: From the channel constructors
    """
    intensities = FieldIntensities(
        config.intensities.sigma_u_sq,
        config.intensities.sigma_w_sq if sigma_w_sq is None else sigma_w_sq,
    )
    channel_config = config.channel
    if isinstance(channel_config, CavityChannelConfig):
        return new_cavity_channel(channel_config.k, channel_config.kappa, channel_config.omega_c, intensities)
    if channel_config.eta is not None:
        return static_channel_from_transmittance(channel_config.eta, channel_config.phi, intensities)
    return new_static_channel(complex(*channel_config.k), complex(*channel_config.m), channel_config.phi, intensities)


@dataclass
class SynthesisOutcome:
    """
    Everything the synthesis stage produced.

    Attributes:
        channel: Channel model the design equalizes
        design: Chosen equalizer
        gamma_tilde_sq: Grid optimum (sdp_nevpick only)
        nodes: Interpolation frequencies and values (sdp_nevpick only)
        tau: Pick shift (sdp_nevpick only)
        realization: Hardware parameters, when the design has a realization
        alternatives: Per-Theta results of a sweep
    """

    channel: ChannelModel
    design: Equalizer
    gamma_tilde_sq: Optional[float] = None
    nodes: Optional[tuple[np.ndarray, np.ndarray]] = None
    tau: Optional[float] = None
    realization: Optional[dict[str, Any]] = None
    alternatives: list[AlternativeRecord] = field(default_factory=list)


def _theta_scalar(design: Equalizer) -> Optional[float]:
    theta = design.theta
    if not theta.is_constant:
        return None
    value = theta.constant_value
    return float(value.real) if abs(value.imag) == 0.0 else None


def to_record(
    config: ExperimentConfig,
    outcome: SynthesisOutcome,
    report: Optional[VerificationReport] = None,
    certificate: Optional[dict[str, Any]] = None,
) -> DesignRecord:
    """Design record for design.json; the threshold certificate is stored next to the report."""
    design = outcome.design
    blocks = None
    if isinstance(design, EqualizerDesign):
        blocks = {name: BlockRecord.from_rational(block) for name, block in design.blocks.items()}
    interpolation = None
    if outcome.nodes is not None:
        omegas, values = outcome.nodes
        interpolation = InterpolationRecord(
            omegas=[float(w) for w in omegas],
            values=[encode_complex(v) for v in values],
            tau=float(outcome.tau),
            theta=float(_theta_scalar(design) or 0.0),
        )
    parameters = dict(design.parameters)
    if design.theta.is_constant and _theta_scalar(design) is None:
        parameters["theta_value"] = design.theta.constant_value
    return DesignRecord(
        config=config,
        channel=jsonable(outcome.channel.describe()),
        method=design.method,
        blocks=blocks,
        interpolation=interpolation,
        gamma_sq_bound=design.gamma_sq_bound,
        optimal_value=design.optimal_value,
        gamma_tilde_sq=outcome.gamma_tilde_sq,
        theta=_theta_scalar(design),
        parameters=jsonable(parameters),
        realization=jsonable(outcome.realization) if outcome.realization is not None else None,
        verification={**report.to_dict(), "certificate": certificate} if report is not None else None,
        alternatives=outcome.alternatives,
    )


def design_from_record(record: DesignRecord) -> Equalizer:
    """
    Rebuild the equalizer stored in a record, without re-running synthesis.

    Explicit designs are rebuilt from their coefficients; pointwise designs
    are re-interpolated from the stored nodes and completed again.
    """
    if record.blocks is not None:
        blocks = {name: block.to_rational() for name, block in record.blocks.items()}
        theta = RationalFunction.constant(record.theta if record.theta is not None else 0.0)
        return EqualizerDesign(
            **blocks,
            gamma_sq_bound=record.gamma_sq_bound,
            theta=theta,
            optimal_value=record.optimal_value,
            method=record.method,
            parameters=dict(record.parameters),
        )
    data = record.interpolation
    problem = pick_problem(data.omegas, data.decoded_values(), data.tau)
    design: PointwiseEqualizer = pointwise_completion(interpolant(problem, data.theta), record.gamma_sq_bound)
    return design.with_bound(record.gamma_sq_bound, record.optimal_value)


def record_nodes(record: DesignRecord) -> Optional[tuple[list[float], np.ndarray]]:
    if record.interpolation is None:
        return None
    return record.interpolation.omegas, record.interpolation.decoded_values()
