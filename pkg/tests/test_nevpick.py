import numpy as np
import pytest

from src.core.errors import DuplicateNodes, NodeInLeftHalfPlane, NotContractive, ThetaNotAdmissible
from src.core.grid import FrequencyGrid, node_grid_21
from src.core.rational import RationalFunction
from src.nevpick import (
    PartialFraction,
    PointwiseEqualizer,
    build_pick,
    choose_tau,
    complete_interpolant,
    interpolant,
    pick_problem,
    pointwise_completion,
)
from src.sdp import grid_solve
from src.synthesis import EqualizerDesign


def _problem(channel, grid):
    solution = grid_solve(channel, grid)
    values = solution.interpolation_values()
    omegas = solution.omegas.omegas
    return pick_problem(omegas, values, choose_tau(values, omegas))


def test_single_node_pick_matrix():
    problem = build_pick([1e-3], [0.0])
    assert problem.pick_matrix[0, 0] == pytest.approx(500.0)
    assert problem.is_positive_definite()


@pytest.mark.parametrize(
    "nodes, values, error",
    [
        ([-1.0 + 0j], [0.0], NodeInLeftHalfPlane),
        ([1.0, 1.0], [0.0, 0.1], DuplicateNodes),
        ([1.0], [1.5], NotContractive),
    ],
)
def test_pick_input_validation(nodes, values, error):
    with pytest.raises(error):
        build_pick(nodes, values)


def test_single_node_interpolant():
    interp = interpolant(pick_problem([0.0], [0.5], tau=1e-3))
    assert interp(0.0) == pytest.approx(0.5)
    assert interp.explicit is not None
    assert interp.explicit.is_stable()


def test_theta_must_be_strictly_contractive():
    problem = pick_problem([0.0], [0.5], tau=1e-3)
    with pytest.raises(ThetaNotAdmissible):
        interpolant(problem, 1.0)


def test_partial_fraction_zeros_and_expansion():
    f = PartialFraction(1.0, np.array([2.0]), np.array([-1.0]))
    assert f.zeros()[0] == pytest.approx(-3.0)
    s = np.array([0.5j, 2.0 + 1j])
    assert np.allclose(f.to_rational()(s), f(s))
    assert np.allclose(f.derivative(s), -2.0 / (s + 1.0) ** 2)


def test_explicit_and_pointwise_paths_agree(cavity_high):
    problem = _problem(cavity_high, FrequencyGrid.from_values([-5.0, -1.0, 0.0, 1.0, 5.0]))
    explicit = interpolant(problem, 0.0)
    pointwise = interpolant(problem, 0.0, max_nodes=0)
    assert explicit.explicit is not None
    assert pointwise.explicit is None

    omegas = np.linspace(-40.0, 40.0, 161)
    assert np.allclose(explicit.freqresp(omegas), pointwise.freqresp(omegas), atol=1e-8)

    design = complete_interpolant(explicit)
    completed = complete_interpolant(pointwise)
    assert isinstance(design, EqualizerDesign)
    assert isinstance(completed, PointwiseEqualizer)
    assert completed.is_stable()
    for equalizer in (design, completed):
        values = equalizer.response(omegas)
        adjoint = np.conj(np.transpose(values, (0, 2, 1)))
        assert np.max(np.abs(values @ adjoint - np.eye(2))) < 1e-8
    assert pointwise.node_residual() < 1e-8


@pytest.mark.parametrize("theta", [-0.95, 0.0, 0.95])
def test_interpolants_on_21_node_grid(cavity_high, theta):
    problem = _problem(cavity_high, node_grid_21())
    interp = interpolant(problem, theta)
    assert interp.node_residual() < 1e-8
    assert interp.analytic_margin() > 0.0
    dense = np.concatenate([np.linspace(-100.0, 100.0, 5000), problem.omegas])
    assert np.max(np.abs(interp.freqresp(dense))) <= 1.0 + 1e-9


def test_pointwise_completion_needs_constant_theta():
    problem = pick_problem([0.0], [0.5], tau=1e-3)
    dynamic = interpolant(problem, RationalFunction.first_order(0.5, 1.0, 2.0), max_nodes=0)
    with pytest.raises(ThetaNotAdmissible):
        pointwise_completion(dynamic)


def test_tau_is_halved_until_pick_matrix_is_definite(cavity_low):
    solution = grid_solve(cavity_low, node_grid_21())
    values = solution.interpolation_values()
    omegas = solution.omegas.omegas
    assert all(solution.boundary)
    assert not pick_problem(omegas, values, 1e-3).is_positive_definite()
    tau = choose_tau(values, omegas)
    assert tau == pytest.approx(1e-3 / 64)
    assert pick_problem(omegas, values, tau).is_positive_definite()
