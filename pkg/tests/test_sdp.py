import numpy as np
import pytest

from src.channel import FieldIntensities, static_channel_from_transmittance
from src.channel.psd import error_psd_from_values
from src.core.grid import FrequencyGrid, node_grid_21
from src.sdp import grid_solve, kkt_multiplier, per_frequency_optimum, per_frequency_optimum_matrix


def test_grid_optimum_low_noise(cavity_low):
    solution = grid_solve(cavity_low, node_grid_21())
    assert solution.gamma_tilde_sq == pytest.approx(0.7049, abs=0.01)
    assert not solution.trivial
    assert len(solution.h11_values) == 21


def test_grid_optimum_high_noise(cavity_high):
    solution = grid_solve(cavity_high, node_grid_21())
    assert solution.gamma_tilde_sq == pytest.approx(1.8117, abs=0.01)
    positive = solution.omegas.omegas >= 0.0
    magnitudes = solution.node_magnitudes[positive]
    assert np.all((magnitudes >= 0.3) & (magnitudes <= 0.5))


def test_node_optimum_static(static_high, static_low):
    assert per_frequency_optimum(static_high, 0.0).cost == pytest.approx(1.4331, abs=1e-4)
    low = per_frequency_optimum(static_low, 0.0)
    assert low.h11 == pytest.approx(1.0)
    assert low.cost == pytest.approx(0.389347, abs=1e-6)


def test_kkt_multiplier_marks_active_constraint(static_high, static_low):
    assert kkt_multiplier(static_high, 0.0) < 0.0
    assert kkt_multiplier(static_low, 0.0) > 0.0


def test_node_optimum_beats_random_contractions(cavity_high):
    rng = np.random.default_rng(3)
    for omega in (-10.0, -3.0, 0.0, 4.0):
        best = per_frequency_optimum(cavity_high, omega).cost
        h = rng.uniform(0.0, 1.0, 200) * np.exp(1j * rng.uniform(-np.pi, np.pi, 200))
        assert best <= np.min(error_psd_from_values(cavity_high, h, np.full(200, omega))) + 1e-12


def test_interpolation_values_are_shrunk(static_low):
    solution = grid_solve(static_low, FrequencyGrid.from_values([0.0, 1.0]))
    assert all(solution.boundary)
    assert np.allclose(np.abs(solution.interpolation_values(0.999)), 0.999)
    assert np.all(np.abs(solution.interpolation_values()) < 1.0)


def test_degenerate_channel_falls_back_to_swap():
    channel = static_channel_from_transmittance(0.0, 0.0, FieldIntensities(0.0, 0.0))
    solution = grid_solve(channel, FrequencyGrid.from_values([0.0]))
    assert solution.trivial
    assert solution.degenerate == (True,)
    assert solution.gamma_tilde_sq == pytest.approx(2.0)


def test_matrix_node_problem_single_mode(static_high):
    result = per_frequency_optimum_matrix([[np.sqrt(0.7)]], [[1.27]], [[0.1]])
    assert result.cost == pytest.approx(per_frequency_optimum(static_high, 0.0).cost, abs=1e-6)
    assert result.h11[0, 0].real == pytest.approx(0.72467, abs=1e-4)


def test_matrix_node_problem_decoupled_modes():
    g11 = np.diag([np.sqrt(0.7), np.sqrt(0.5)])
    psi = np.diag([1.27, 2.05])
    result = per_frequency_optimum_matrix(g11, psi, 0.1 * np.eye(2))
    expected = max(2.1 - 1.21 * 0.7 / 1.27, 2.1 - 1.21 * 0.5 / 2.05)
    assert result.cost == pytest.approx(expected, abs=1e-4)
    assert np.linalg.norm(result.h11, 2) <= 1.0 + 1e-12
