"""
Figures stage: one CSV of plot data per requested figure.

    fig_compare  static sweep: P_y-u, optimal P_e and the grid optimum vs sigma_w^2
    fig_h11      static sweep: closed-form and grid-optimal |H11| vs sigma_w^2
    cav_subopt   cavity sweep: sup P_y-u and the optimized bound vs sigma_w^2
    cav_bode     cavity: Bode data of the suboptimal equalizer
    psds         normalized P_e / gamma_tilde^2 per Theta, and P_y-u / gamma_tilde^2
    ratio        Bode data of the interpolants per Theta, with the node values
"""

import logging
from pathlib import Path
from typing import Callable, Optional

import numpy as np
import pandas as pd

from src.channel.psd import error_psd_from_values, unequalized_psd
from src.core.config import get_settings
from src.core.errors import CoheqError, ConfigError
from src.core.grid import FrequencyGrid, verification_grid
from src.core.schemas import ExperimentConfig
from src.core.storage import write_csv
from src.nevpick import choose_tau, interpolant, pick_problem
from src.sdp import grid_solve, per_frequency_optimum
from src.stages.base import Stage, StageResult
from src.stages.export import bode_frame, plot_omegas
from src.stages.records import build_channel
from src.synthesis import cavity_gamma_search, static_optimal, static_threshold

logger = logging.getLogger(__name__)

STATIC_SWEEP = np.linspace(0.05, 8.0, 40)
CAVITY_SWEEP = np.linspace(0.15, 4.0, 20)


def theta_column(theta: float, prefix: str = "theta") -> str:
    return f"{prefix}_{theta:g}"


class FiguresStage(Stage):
    """
    Stage that writes the data behind the standard figures.

    Example:
        >>> FiguresStage().run(config=config, output_dir="results").data["paths"]
        {'psds': 'results/psds.csv'}
    """

    def __init__(self) -> None:
        super().__init__("figures")
        self._builders: dict[str, Callable[[ExperimentConfig], pd.DataFrame]] = {
            "fig_compare": self._fig_compare,
            "fig_h11": self._fig_h11,
            "cav_subopt": self._cav_subopt,
            "cav_bode": self._cav_bode,
            "psds": self._psds,
            "ratio": self._ratio,
        }

    def run(self, config: ExperimentConfig, output_dir: str, figures: Optional[list[str]] = None, **kwargs) -> StageResult:
        names = figures if figures is not None else list(config.figures)
        if not names:
            names = ["fig_compare", "fig_h11"] if config.channel.type == "static" else ["cav_subopt", "psds", "ratio"]
        paths: dict[str, str] = {}
        try:
            for name in names:
                if name not in self._builders:
                    raise ConfigError(f"Unknown figure '{name}'", figure=name)
                frame = self._builders[name](config)
                paths[name] = str(write_csv(frame, Path(output_dir) / f"{name}.csv"))
                logger.info("Figure %s: %d rows", name, len(frame))
        except CoheqError as exc:
            logger.warning("Figure generation failed: %s", exc.message)
            return StageResult.failure(exc, paths=paths)
        return StageResult(success=True, data={"paths": paths})

    # =========================================
    # STATIC SWEEPS
    # =========================================

    @staticmethod
    def _require(config: ExperimentConfig, kind: str, figure: str) -> None:
        if config.channel.type != kind:
            raise ConfigError(f"Figure '{figure}' needs a {kind} channel", figure=figure, channel=config.channel.type)

    @staticmethod
    def _sweep(config: ExperimentConfig, default: np.ndarray) -> np.ndarray:
        return np.asarray(config.sigma_w_sq_sweep, dtype=float) if config.sigma_w_sq_sweep else default

    def _fig_compare(self, config: ExperimentConfig) -> pd.DataFrame:
        self._require(config, "static", "fig_compare")
        rows = []
        node = FrequencyGrid.from_values([0.0])
        for sigma_w_sq in self._sweep(config, STATIC_SWEEP):
            channel = build_channel(config, float(sigma_w_sq))
            rows.append(
                {
                    "sigma_w_sq": sigma_w_sq,
                    "P_y_minus_u": unequalized_psd(channel, 0.0),
                    "P_e_optimal": static_optimal(channel).optimal_value,
                    "sdp_optimum": grid_solve(channel, node).gamma_tilde_sq,
                    "above_threshold": bool(sigma_w_sq > static_threshold(channel)),
                }
            )
        return pd.DataFrame(rows)

    def _fig_h11(self, config: ExperimentConfig) -> pd.DataFrame:
        self._require(config, "static", "fig_h11")
        rows = []
        for sigma_w_sq in self._sweep(config, STATIC_SWEEP):
            channel = build_channel(config, float(sigma_w_sq))
            rows.append(
                {
                    "sigma_w_sq": sigma_w_sq,
                    "abs_h11_closed_form": abs(static_optimal(channel).h11.constant_value),
                    "abs_h11_sdp": abs(per_frequency_optimum(channel, 0.0).h11),
                }
            )
        return pd.DataFrame(rows)

    # =========================================
    # CAVITY
    # =========================================

    def _cav_subopt(self, config: ExperimentConfig) -> pd.DataFrame:
        self._require(config, "cavity", "cav_subopt")
        rows = []
        for sigma_w_sq in self._sweep(config, CAVITY_SWEEP):
            channel = build_channel(config, float(sigma_w_sq))
            omegas = verification_grid(channel.resonance_frequencies()).omegas
            gamma_sq, design = cavity_gamma_search(channel)
            rows.append(
                {
                    "sigma_w_sq": sigma_w_sq,
                    "sup_P_y_minus_u": float(np.max(unequalized_psd(channel, omegas))),
                    "optimized_bound": gamma_sq,
                    "trivial": design.method == "trivial",
                }
            )
        return pd.DataFrame(rows)

    def _cav_bode(self, config: ExperimentConfig) -> pd.DataFrame:
        self._require(config, "cavity", "cav_bode")
        channel = build_channel(config)
        _, design = cavity_gamma_search(channel)
        return bode_frame(design, plot_omegas(channel))

    # =========================================
    # INTERPOLANTS
    # =========================================

    def _interpolants(self, config: ExperimentConfig):
        channel = build_channel(config)
        grid = config.grid.build()
        solution = grid_solve(channel, grid)
        values = solution.interpolation_values()
        tau = choose_tau(values, grid.omegas, config.tau)
        problem = pick_problem(grid.omegas, values, tau)
        thetas = config.theta_values() or list(get_settings().theta_sweep)
        return channel, solution, problem, [(theta, interpolant(problem, theta)) for theta in thetas]

    def _psds(self, config: ExperimentConfig) -> pd.DataFrame:
        channel, solution, problem, family = self._interpolants(config)
        omegas = plot_omegas(channel, (problem.omegas, problem.values))
        scale = solution.gamma_tilde_sq
        columns = {"omega": omegas, "P_y_minus_u_normalized": unequalized_psd(channel, omegas) / scale}
        for theta, interp in family:
            columns[theta_column(theta)] = error_psd_from_values(channel, interp.freqresp(omegas), omegas) / scale
        return pd.DataFrame(columns)

    def _ratio(self, config: ExperimentConfig) -> pd.DataFrame:
        channel, _, problem, family = self._interpolants(config)
        omegas = plot_omegas(channel, (problem.omegas, problem.values))
        columns = {"omega": omegas}
        for theta, interp in family:
            values = interp.freqresp(omegas)
            columns[theta_column(theta, "mag_theta")] = np.abs(values)
            columns[theta_column(theta, "phase_theta")] = np.angle(values)
        node_values = dict(zip(problem.omegas.tolist(), problem.values.tolist()))
        nodes = np.array([node_values.get(float(omega), np.nan) for omega in omegas], dtype=complex)
        columns["node_mag"] = np.where(np.isnan(nodes.real), np.nan, np.abs(nodes))
        columns["node_phase"] = np.where(np.isnan(nodes.real), np.nan, np.angle(nodes))
        return pd.DataFrame(columns)