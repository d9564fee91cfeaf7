import numpy as np
import pytest

from src.channel import (
    FieldIntensities,
    error_psd,
    error_psd_oracle,
    new_cavity_channel,
    new_static_channel,
    psi,
    static_channel_from_transmittance,
    unequalized_psd,
)
from src.core.errors import NotUnitary, ParameterOutOfRange
from src.core.grid import verification_grid
from src.synthesis import static_optimal, static_unequalized_gap


def test_static_channel_blocks(static_high):
    assert static_high.g11(0j) == pytest.approx(np.sqrt(0.7))
    assert static_high.g12(0j) == pytest.approx(np.sqrt(0.3))
    assert static_high.paraunitarity_residual() < 1e-12
    assert static_high.resonance_frequencies() == ()


def test_static_channel_with_phase():
    channel = new_static_channel(0.6j, 0.8, 0.3, FieldIntensities(0.1, 1.0))
    assert channel.paraunitarity_residual() < 1e-12
    assert channel.describe()["type"] == "static"


def test_static_channel_rejects_non_unitary():
    with pytest.raises(NotUnitary):
        new_static_channel(1.0, 1.0, 0.0, FieldIntensities(0.1, 0.2))


@pytest.mark.parametrize(
    "build",
    [
        lambda: static_channel_from_transmittance(1.5, 0.0, FieldIntensities(0.1, 0.2)),
        lambda: new_cavity_channel(0.8, 5.0, 10.0, FieldIntensities(0.1, 0.2)),
        lambda: new_cavity_channel(0.4, 0.0, 10.0, FieldIntensities(0.1, 0.2)),
        lambda: FieldIntensities(-0.1, 0.2),
    ],
)
def test_parameter_ranges(build):
    with pytest.raises(ParameterOutOfRange):
        build()


def test_cavity_channel_is_paraunitary_and_stable(cavity_low):
    assert cavity_low.g.is_stable()
    assert cavity_low.paraunitarity_residual() < 1e-9
    assert cavity_low.resonance_frequencies() == (-10.0, 10.0)


def test_cavity_channel_at_resonance(cavity_low):
    # the environment decouples completely at omega = -Omega
    assert cavity_low.g11(-10j) == pytest.approx(-1.0)
    assert abs(cavity_low.g12(-10j)) == pytest.approx(0.0, abs=1e-12)
    assert psi(cavity_low)(-10j).real == pytest.approx(0.1)


def test_static_psi(static_high):
    assert psi(static_high).constant_value.real == pytest.approx(1.27)


def test_reduced_psd_matches_oracle_for_paraunitary_filter(static_high, cavity_low):
    design = static_optimal(static_high)
    omegas = np.linspace(-3.0, 3.0, 7)
    reduced = error_psd(static_high, design.h11, omegas)
    full = error_psd_oracle(static_high, design.h11, design.h12, omegas)
    assert np.allclose(reduced, full, atol=1e-12)

    rng = np.random.default_rng(7)
    omegas = rng.uniform(-50.0, 50.0, 20)
    h11 = 0.6 * np.exp(1j * 0.4)
    h12 = np.sqrt(1.0 - abs(h11) ** 2)
    assert np.allclose(error_psd(cavity_low, h11, omegas), error_psd_oracle(cavity_low, h11, h12, omegas), atol=1e-12)


def test_error_psd_scalar_input(static_high):
    value = error_psd(static_high, 1.0, 0.0)
    assert isinstance(value, float)
    assert value == pytest.approx(unequalized_psd(static_high, 0.0))


def test_unequalized_gap(static_high, static_low):
    for channel in (static_high, static_low):
        gap = unequalized_psd(channel, 0.0) - static_optimal(channel).optimal_value
        assert gap == pytest.approx(static_unequalized_gap(channel), abs=1e-12)
    assert static_unequalized_gap(static_high) == pytest.approx(0.09628, abs=1e-4)


def test_unequalized_psd_cavity_is_nonnegative(cavity_high):
    values = unequalized_psd(cavity_high, verification_grid([-10.0, 10.0], density=200).omegas)
    assert np.all(values >= 0.0)
