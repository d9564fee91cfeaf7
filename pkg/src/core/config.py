"""
Configuration management using Pydantic settings.

This module handles loading and validating configuration from environment variables
and .env files. Every numerical tolerance used by the toolkit is collected in a
single ``Tolerances`` record; two named profiles are available and the active one
is selected with ``COHEQ_TOLERANCE_PROFILE``.
"""

from functools import lru_cache

from pydantic import BaseModel, field_validator
from pydantic_settings import BaseSettings


class Tolerances(BaseModel):
    """
    Numerical tolerances shared by all modules.

    Attributes:
        cancel_tol: Absolute distance under which a numerator root and a
            denominator root are cancelled
        trim_rtol: Relative size under which trailing polynomial coefficients
            are dropped
        pole_tol: |den(s)| below this value raises PoleHit
        axis_tol: |Re r| below this value marks a root as near the imaginary
            axis; such roots are paired with their mirror images
        unitarity_tol: Static channel |k|^2 + |m|^2 = 1 tolerance
        channel_paraunitarity_tol: Channel construction residual bound
        factor_tol: Spectral and J-spectral factorization residual bound
        psd_nonneg_tol: x(iw) >= -psd_nonneg_tol is accepted as nonnegative
        paraunitarity_tol: Design verification residual bound
        contraction_tol: Verification contraction margin bound
        contraction_check_tol: Slack used by check_contraction
        rank_upper: |X2| above this everywhere means full normal rank
        rank_lower: |X2| below this everywhere means identically zero
        node_tol: Interpolation fidelity at the Pick nodes
        family_tol: Closed-form vs parameterized cavity H11 agreement
        certificate_tol: Minimum eigenvalue required of an LMI certificate
        bound_guard: Added to attained optima so the cost bound is strict
    """

    cancel_tol: float = 1e-9
    trim_rtol: float = 1e-13
    pole_tol: float = 1e-12
    axis_tol: float = 1e-6
    unitarity_tol: float = 1e-12
    channel_paraunitarity_tol: float = 1e-9
    factor_tol: float = 1e-9
    psd_nonneg_tol: float = 1e-12
    paraunitarity_tol: float = 1e-8
    contraction_tol: float = 1e-9
    contraction_check_tol: float = 1e-10
    rank_upper: float = 1e-10
    rank_lower: float = 1e-12
    node_tol: float = 1e-8
    family_tol: float = 1e-8
    certificate_tol: float = 1e-12
    bound_guard: float = 1e-9


TOLERANCE_PROFILES: dict[str, Tolerances] = {
    "default": Tolerances(),
    "strict": Tolerances(
        cancel_tol=1e-10,
        paraunitarity_tol=1e-10,
        contraction_tol=1e-11,
        contraction_check_tol=1e-12,
        factor_tol=1e-10,
        node_tol=1e-9,
    ),
}


class Settings(BaseSettings):
    tolerance_profile: str = "default"

    # frequency grids (rad/s)
    hinf_grid_points: int = 2048
    hinf_grid_min: float = 1e-4
    hinf_grid_max: float = 1e4
    verification_grid_points: int = 1000
    verification_grid_min: float = 1e-4
    verification_grid_max: float = 1e3
    feasibility_grid_points: int = 500

    # synthesis
    theta_offset: float = 2e-4
    epsilon_limit: float = 1.0 - 1e-6
    gamma_bisection_tol: float = 1e-8
    gamma_safety_margin: float = 1e-6

    # interpolation
    default_tau: float = 1e-3
    tau_max_halvings: int = 60
    pick_shrink: float = 1.0 - 1e-6
    explicit_interpolant_max_nodes: int = 8
    theta_sweep: tuple[float, ...] = (-0.95, 0.0, 0.95)

    # generic matrix relaxation
    pg_max_iterations: int = 10_000

    sigma_u_sq_default: float = 0.1
    output_dir: str = "results"
    log_level: str = "INFO"

    class Config:
        env_prefix = "COHEQ_"
        env_file = ".env"
        env_file_encoding = "utf-8"

    @field_validator("tolerance_profile")
    @classmethod
    def _known_profile(cls, value: str) -> str:
        if value not in TOLERANCE_PROFILES:
            raise ValueError(
                f"Unknown tolerance profile '{value}'. Use one of: {', '.join(TOLERANCE_PROFILES)}"
            )
        return value

    @property
    def tolerances(self) -> Tolerances:
        """The tolerance record of the active profile."""
        return TOLERANCE_PROFILES[self.tolerance_profile]


@lru_cache()
def get_settings() -> Settings:
    """
    Get the application settings singleton.

    This function returns a cached instance of Settings to ensure that
    configuration is only loaded once during the application lifecycle.
    Tests that change COHEQ_* variables call ``get_settings.cache_clear()``.

    Returns:
        Settings: The application settings instance with all configuration values

    Raises:
        ValidationError: If an environment variable holds an invalid value
            (for example an unknown tolerance profile)

    Example:
        >>> settings = get_settings()
        >>> settings.tolerances.paraunitarity_tol
        1e-08
    """
    return Settings()


def get_tolerances() -> Tolerances:
    return get_settings().tolerances
