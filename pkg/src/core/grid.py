"""
Frequency grids (rad/s) shared by norm estimation, synthesis and verification.
"""

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from src.core.config import get_settings


@dataclass(frozen=True)
class FrequencyGrid:
    """
    Sorted set of real frequencies.

    Attributes:
        points: Strictly increasing, finite frequencies in rad/s

    Example:
        >>> grid = FrequencyGrid.from_values([1.0, -1.0, 0.0])
        >>> grid.points
        (-1.0, 0.0, 1.0)
    """

    points: tuple[float, ...]

    def __post_init__(self) -> None:
        values = np.asarray(self.points, dtype=float)
        if values.ndim != 1 or values.size == 0:
            raise ValueError("FrequencyGrid needs at least one frequency")
        if not np.all(np.isfinite(values)):
            raise ValueError("FrequencyGrid frequencies must be finite")
        if values.size > 1 and not np.all(np.diff(values) > 0):
            raise ValueError("FrequencyGrid frequencies must be strictly increasing")
        object.__setattr__(self, "points", tuple(float(v) for v in values))

    @classmethod
    def from_values(cls, values: Iterable[float]) -> "FrequencyGrid":
        """Build a grid from arbitrary values (sorted, duplicates removed)."""
        return cls(tuple(np.unique(np.asarray(list(values), dtype=float))))

    @property
    def omegas(self) -> np.ndarray:
        return np.asarray(self.points, dtype=float)

    def __len__(self) -> int:
        return len(self.points)

    def __iter__(self):
        return iter(self.points)

    def merged(self, extra: Iterable[float]) -> "FrequencyGrid":
        return FrequencyGrid.from_values(list(self.points) + list(extra))

    def summary(self) -> dict[str, float]:
        return {"size": len(self.points), "min": self.points[0], "max": self.points[-1]}


def log_grid(
    lo: float,
    hi: float,
    num: int,
    *,
    symmetric: bool = True,
    include_zero: bool = True,
    extra: Sequence[float] = (),
) -> FrequencyGrid:
    """
    Logarithmically spaced grid on [lo, hi], mirrored to negative frequencies.

    Args:
        lo: Smallest positive frequency
        hi: Largest positive frequency
        num: Number of points per side
        symmetric: Add the negatives of all points
        include_zero: Add omega = 0
        extra: Additional frequencies (e.g. a cavity resonance)

    Returns:
        FrequencyGrid: The merged grid
    """
    positive = np.logspace(np.log10(lo), np.log10(hi), num)
    values = list(positive)
    if symmetric:
        values.extend(-positive)
    if include_zero:
        values.append(0.0)
    values.extend(extra)
    return FrequencyGrid.from_values(values)


def node_grid_21() -> FrequencyGrid:
    """The 21-node relaxation grid: 0 and +/- ten log-spaced points in [1e-3, 10]."""
    return log_grid(1e-3, 10.0, 10)


def hinf_grid() -> FrequencyGrid:
    settings = get_settings()
    return log_grid(settings.hinf_grid_min, settings.hinf_grid_max, settings.hinf_grid_points)


def verification_grid(extra: Sequence[float] = (), density: int | None = None) -> FrequencyGrid:
    """
    Default dense grid for design verification.

    Args:
        extra: Frequencies that must be present (resonances, nodes)
        density: Points per side; defaults to the configured value
    """
    settings = get_settings()
    return log_grid(
        settings.verification_grid_min,
        settings.verification_grid_max,
        density or settings.verification_grid_points,
        extra=extra,
    )


def feasibility_grid(extra: Sequence[float] = ()) -> FrequencyGrid:
    settings = get_settings()
    return log_grid(1e-3, 1e3, settings.feasibility_grid_points // 2, extra=extra)
