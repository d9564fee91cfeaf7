import numpy as np
import pytest

from src.core.errors import BetaNotAdmissible, GammaTooLarge, GammaTooSmall, NotFactorable, ParameterOutOfRange
from src.core.rational import RationalFunction
from src.spectral import cavity_constants, j_spectral_factor, spectral_factor, static_cost_floor
from src.channel import FieldIntensities, new_cavity_channel


def test_constant_factor():
    assert spectral_factor(RationalFunction.constant(0.13)).constant_value == pytest.approx(np.sqrt(0.13))


def test_factor_recovers_minimum_phase_function():
    f = RationalFunction.from_zpk([-2.0 + 1j], [-3.0, -0.5 + 2j], 1.7)
    factor = spectral_factor(f * f.para_conjugate())
    omegas = np.linspace(-20.0, 20.0, 81)
    assert np.allclose(np.abs(factor.freqresp(omegas)), np.abs(f.freqresp(omegas)), rtol=1e-8)
    assert factor.is_stable()
    assert np.all(factor.zeros().real < 0.0)


def test_factor_reflects_unstable_zeros():
    f = RationalFunction.from_zpk([1.0], [-2.0], 1.0)
    factor = spectral_factor(f * f.para_conjugate())
    assert factor.zeros()[0] == pytest.approx(-1.0)


@pytest.mark.parametrize("value", [-1.0, 0.5j])
def test_constant_must_be_nonnegative_real(value):
    with pytest.raises(NotFactorable):
        spectral_factor(RationalFunction.constant(value))


def test_negative_function_not_factorable():
    f = RationalFunction.first_order(1.0, 2.0, 1.0)
    with pytest.raises(NotFactorable):
        spectral_factor(-(f * f.para_conjugate()))


def test_static_cost_floor(static_low, static_high):
    assert static_cost_floor(static_low) == pytest.approx(0.389347, abs=1e-6)
    assert static_cost_floor(static_high) == pytest.approx(2.1 - 1.21 * 0.7 / 1.27, abs=1e-12)


def test_j_spectral_factor_static(static_high):
    aux = j_spectral_factor(static_high, 1.5)
    assert aux.upsilon3**2 == pytest.approx(0.6)
    assert max(aux.residuals().values()) < 1e-9
    assert min(aux.margins().values()) > 0.0


def test_j_spectral_factor_cavity(cavity_low):
    aux = j_spectral_factor(cavity_low, 0.8)
    assert max(aux.residuals().values()) < 1e-9
    omegas = np.array([0.0, 1.0, -10.0, 10.0])
    assert np.allclose(np.abs(aux.m_factor.freqresp(omegas)) ** 2, aux.psi.freqresp(omegas).real)


def test_j_spectral_factor_gamma_range(static_high, cavity_high):
    with pytest.raises(GammaTooLarge):
        j_spectral_factor(static_high, 2.2)
    with pytest.raises(GammaTooSmall):
        j_spectral_factor(static_high, 1.0)
    with pytest.raises(GammaTooSmall):
        j_spectral_factor(cavity_high, 1.0)


def test_cavity_constants(cavity_low):
    consts = cavity_constants(cavity_low, 0.8)
    assert consts.rho == pytest.approx(4.72024, abs=1e-5)
    assert consts.delta_hat == pytest.approx(1.47059, abs=1e-5)
    assert consts.alpha == pytest.approx(np.sqrt(consts.beta**2 - 1.0))
    lower, upper = consts.theta_interval()
    assert lower == -1.0 and upper <= 0.0


def test_cavity_constants_beta_not_admissible(cavity_high):
    with pytest.raises(BetaNotAdmissible):
        cavity_constants(cavity_high, 1.0)


def test_cavity_constants_need_noisy_environment():
    quiet = new_cavity_channel(0.4, 5.0, 10.0, FieldIntensities(0.1, 0.05))
    with pytest.raises(ParameterOutOfRange):
        cavity_constants(quiet, 0.8)
