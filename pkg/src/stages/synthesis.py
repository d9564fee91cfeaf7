"""
Synthesis stage: builds the channel from a config and runs the requested
design method.
"""

import logging
from typing import Optional

import numpy as np

from src.channel.models import ChannelModel
from src.channel.psd import error_psd_from_values
from src.core.config import get_settings, get_tolerances
from src.core.errors import CoheqError, Infeasible
from src.core.grid import verification_grid
from src.core.schemas import AlternativeRecord, ExperimentConfig
from src.nevpick import choose_tau, complete_interpolant, interpolant, pick_problem
from src.sdp import grid_solve
from src.spectral import j_spectral_factor, static_cost_floor
from src.stages.base import Stage, StageResult
from src.stages.records import SynthesisOutcome, build_channel
from src.synthesis import (
    cavity_gamma_search,
    cavity_realization,
    cavity_suboptimal,
    complete_equalizer,
    parameterize_h11,
    static_optimal,
    static_realization,
    static_theta_choice,
    static_threshold,
    static_unequalized_gap,
    trivial_design,
)
from src.synthesis.static import static_branch
from src.verify import verify_design

logger = logging.getLogger(__name__)

# points per side of the grid the sdp_nevpick bound is taken on, relative to verification
BOUND_GRID_FACTOR = 4


class SynthesisStage(Stage):
    """
    Stage that turns an ExperimentConfig into an equalizer design.

    Methods:
        closed_form: static optimum, or the cavity gamma^2 search
        jspectral: J-spectral factorization, Theta parameterization and completion
        sdp_nevpick: grid relaxation, Pick interpolation per Theta and completion

    Example:
        >>> result = SynthesisStage().run(config=config)
        >>> result.data["outcome"].design.method
        'static_optimal'
    """

    def __init__(self) -> None:
        super().__init__("synthesis")

    def run(self, config: ExperimentConfig, theta: Optional[float] = None, **kwargs) -> StageResult:
        """
        Args:
            config: Validated experiment config
            theta: Overrides the config's Theta (a single constant)

        Returns:
            StageResult: data["outcome"] holds a SynthesisOutcome; failures
            carry the error JSON in data["error"]
        """
        thetas = [float(theta)] if theta is not None else config.theta_values()
        try:
            channel = build_channel(config)
            logger.info("Synthesis with %s on %s", config.method, channel.describe())
            if config.method == "closed_form":
                outcome = self._closed_form(channel, config, thetas)
            elif config.method == "jspectral":
                outcome = self._jspectral(channel, config, thetas)
            else:
                outcome = self._sdp_nevpick(channel, config, thetas)
        except CoheqError as exc:
            logger.warning("Synthesis failed: %s (%s)", exc.message, exc.code)
            return StageResult.failure(exc)
        return StageResult(success=True, data={"outcome": outcome})

    # =========================================
    # CLOSED FORM
    # =========================================

    def _closed_form(
        self, channel: ChannelModel, config: ExperimentConfig, thetas: Optional[list[float]]
    ) -> SynthesisOutcome:
        if channel.is_static:
            design = static_optimal(channel).with_metadata(
                threshold=static_threshold(channel),
                unequalized_gap=static_unequalized_gap(channel),
            )
            if static_branch(channel) == "splitter":
                realization = {"equalizer_transmittance": static_realization(channel).equalizer_transmittance}
            else:
                realization = {"phase": float(np.angle(design.h11.constant_value))}
            return SynthesisOutcome(channel=channel, design=design, realization=realization)

        theta = thetas[0] if thetas else None
        if config.gamma_sq is not None:
            theta_const = theta if theta is not None else -1.0 + get_settings().theta_offset
            design = cavity_suboptimal(channel, config.gamma_sq, theta_const)
        else:
            _, design = cavity_gamma_search(channel, theta=theta)
        realization = cavity_realization(design).as_dict() if design.method != "trivial" else None
        return SynthesisOutcome(channel=channel, design=design, realization=realization)

    # =========================================
    # J-SPECTRAL
    # =========================================

    def _jspectral(
        self, channel: ChannelModel, config: ExperimentConfig, thetas: Optional[list[float]]
    ) -> SynthesisOutcome:
        gamma_sq = config.gamma_sq
        if gamma_sq is None:
            if channel.is_static:
                gamma_sq = static_cost_floor(channel) + 1e-3
            else:
                gamma_sq, _ = cavity_gamma_search(channel, allow_trivial=False)
        if thetas:
            theta = thetas[0]
        elif channel.is_static:
            theta = static_theta_choice(channel)
        else:
            theta = -1.0 + get_settings().theta_offset

        aux = j_spectral_factor(channel, gamma_sq)
        family = parameterize_h11(aux, theta)
        design = complete_equalizer(
            family.h11, gamma_sq_bound=gamma_sq, theta=theta, aux=aux, method="jspectral"
        ).with_metadata(gamma_sq=gamma_sq, factor_margins=aux.margins())
        logger.info("J-spectral design at gamma^2=%.10g", gamma_sq)
        return SynthesisOutcome(channel=channel, design=design)

    # =========================================
    # SDP + NEVANLINNA-PICK
    # =========================================

    def _sdp_nevpick(
        self, channel: ChannelModel, config: ExperimentConfig, thetas: Optional[list[float]]
    ) -> SynthesisOutcome:
        guard = get_tolerances().bound_guard
        grid = config.grid.build()
        solution = grid_solve(channel, grid)
        if solution.trivial:
            design = trivial_design(channel.sigma_u_sq, guard)
            return SynthesisOutcome(channel=channel, design=design, gamma_tilde_sq=solution.gamma_tilde_sq)

        omegas = grid.omegas
        values = solution.interpolation_values()
        tau = choose_tau(values, omegas, config.tau)
        problem = pick_problem(omegas, values, tau)
        extra = list(channel.resonance_frequencies()) + list(omegas)
        checked = verification_grid(extra)
        dense = checked.merged(
            verification_grid(extra, density=BOUND_GRID_FACTOR * get_settings().verification_grid_points).points
        )

        candidates = []
        alternatives: list[AlternativeRecord] = []
        for theta in thetas or list(get_settings().theta_sweep):
            try:
                design = complete_interpolant(interpolant(problem, theta))
                sup = float(np.max(error_psd_from_values(channel, design.response(dense.omegas)[:, 0, 0], dense.omegas)))
                design = design.with_bound(max(solution.gamma_tilde_sq, sup) + guard).with_metadata(
                    theta=theta, sup_error_psd=sup, bound_grid_size=len(dense)
                )
                report = verify_design(channel, design, checked, nodes=(omegas, values))
            except CoheqError as exc:
                logger.warning("Theta %.6g failed: %s (%s)", theta, exc.message, exc.code)
                alternatives.append(AlternativeRecord(theta=theta, error=exc.code))
                continue
            alternatives.append(AlternativeRecord(theta=theta, sup_error_psd=sup, passed=report.passed))
            candidates.append((not report.passed, sup, len(candidates), design))

        if not candidates:
            raise Infeasible("No Theta produced a completed interpolant", thetas=len(alternatives))
        _, sup, _, best = min(candidates, key=lambda item: item[:3])
        logger.info(
            "Selected Theta=%.6g: sup P_e %.10g vs grid optimum %.10g",
            best.parameters["theta"],
            sup,
            solution.gamma_tilde_sq,
        )
        return SynthesisOutcome(
            channel=channel,
            design=best,
            gamma_tilde_sq=solution.gamma_tilde_sq,
            nodes=(omegas, values),
            tau=tau,
            alternatives=alternatives,
        )
