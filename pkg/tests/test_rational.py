import numpy as np
import pytest

from src.core.errors import DegreeLimitExceeded, PoleHit, SingularMatrix, UnstableInput
from src.core.grid import FrequencyGrid, log_grid, node_grid_21, verification_grid
from src.core.rational import Polynomial, RationalFunction, TransferMatrix, hinf_norm


def test_polynomial_evaluation_and_degree():
    p = Polynomial((2.0, 1.0))
    assert p(1j) == 2 + 1j
    assert p.degree == 1
    assert Polynomial().degree == -1


def test_polynomial_shift_and_para_conjugate():
    square = Polynomial((0.0, 0.0, 1.0))
    assert square.shift(1.0).coeffs == (1 + 0j, 2 + 0j, 1 + 0j)
    assert Polynomial((2.0, 1.0)).para_conjugate().coeffs == (2 + 0j, -1 + 0j)


def test_polynomial_degree_cap():
    with pytest.raises(DegreeLimitExceeded):
        Polynomial.from_roots(-np.arange(1.0, 18.0))


def test_rational_is_normalized():
    f = RationalFunction(Polynomial((2.0,)), Polynomial((2.0, 2.0)))
    assert f.den.coeffs == (1 + 0j, 1 + 0j)
    assert f.num.coeffs == (1 + 0j,)


def test_common_roots_cancel():
    f = RationalFunction.from_zpk([-1.0, -2.0], [-1.0, -3.0], 1.0)
    assert f.den.degree == 1
    assert f.poles()[0] == pytest.approx(-3.0)
    assert f.zeros()[0] == pytest.approx(-2.0)


def test_first_order_value():
    f = RationalFunction.first_order(1.0, -5 + 10j, 5 + 10j)
    assert f(0.0) == pytest.approx(0.6 + 0.8j)


def test_pole_hit():
    with pytest.raises(PoleHit):
        RationalFunction.first_order(1.0, 0.0, 1.0)(-1.0)


def test_zero_denominator_rejected():
    with pytest.raises(SingularMatrix):
        RationalFunction(Polynomial((1.0,)), Polynomial((0.0,)))


def test_algebra_matches_pointwise_values():
    f = RationalFunction.first_order(2.0, 1.0, 3.0)
    g = RationalFunction.from_zpk([-0.5 + 1j], [-2.0, -4.0], 1.5)
    s = np.array([0.3j, -1.2 + 0.4j, 2.0 + 5.0j])
    assert np.allclose((f + g)(s), f(s) + g(s))
    assert np.allclose((f * g)(s), f(s) * g(s))
    assert np.allclose((f / g)(s), f(s) / g(s))
    assert np.allclose((1.0 - f)(s), 1.0 - f(s))


def test_stability_and_margin():
    f = RationalFunction.from_zpk([], [-2.0, -3.0 + 1j], 1.0)
    assert f.is_stable()
    assert f.analytic_margin() == pytest.approx(2.0)
    assert not RationalFunction.first_order(1.0, 1.0, -1.0).is_stable()


def test_para_conjugate_is_conjugate_on_axis():
    f = RationalFunction.from_zpk([-1 + 2j], [-0.5 - 1j, -3.0], 2.0 - 1j)
    omegas = np.linspace(-5.0, 5.0, 11)
    assert np.allclose(f.para_conjugate().freqresp(omegas), np.conj(f.freqresp(omegas)))
    assert (f * f.para_conjugate()).is_para_hermitian()


def test_shift():
    f = RationalFunction.first_order(1.0, 2.0, 5.0)
    assert f.shift(0.5)(1.0) == pytest.approx(f(1.5))


def test_hinf_norm_first_order():
    assert hinf_norm(RationalFunction.from_zpk([], [-1.0], 1.0)) == pytest.approx(1.0, abs=1e-9)


def test_hinf_norm_resonant_peak():
    zeta = 0.1
    f = RationalFunction(Polynomial((1.0,)), Polynomial((1.0, 2.0 * zeta, 1.0)))
    expected = 1.0 / (2.0 * zeta * np.sqrt(1.0 - zeta**2))
    assert hinf_norm(f) == pytest.approx(expected, rel=1e-4)


def test_hinf_norm_rejects_unstable():
    with pytest.raises(UnstableInput):
        hinf_norm(RationalFunction.first_order(1.0, 0.0, -1.0))


def test_transfer_matrix_product_and_inverse():
    swap = TransferMatrix.from_rows([[0, 1], [1, 0]])
    assert np.allclose((swap @ swap)(1j), np.eye(2))
    f = RationalFunction.first_order(1.0, 2.0, 1.0)
    m = TransferMatrix.from_rows([[f, 1.0], [0.0, 2.0]])
    product = m @ m.inverse()
    assert np.allclose(product(0.7j), np.eye(2))
    assert m.freqresp([0.0, 1.0, 2.0]).shape == (3, 2, 2)


def test_grids():
    grid = node_grid_21()
    assert len(grid) == 21
    assert 0.0 in grid.points
    assert np.allclose(grid.omegas, -grid.omegas[::-1])
    assert 10.0 in verification_grid([10.0], density=50).points
    assert FrequencyGrid.from_values([1.0, -1.0, 1.0]).points == (-1.0, 1.0)
    assert len(log_grid(1.0, 10.0, 5, symmetric=False, include_zero=False)) == 5
    with pytest.raises(ValueError):
        FrequencyGrid((1.0, 0.0))
