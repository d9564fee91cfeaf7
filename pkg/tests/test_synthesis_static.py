import numpy as np
import pytest

from src.channel import FieldIntensities, error_psd, static_channel_from_transmittance
from src.core.errors import BranchMismatch, DegenerateChannel, GammaTooSmall
from src.spectral import j_spectral_factor, static_cost_floor
from src.synthesis import (
    complete_equalizer,
    parameterize_h11,
    static_optimal,
    static_realization,
    static_theta_choice,
    static_threshold,
)
from src.synthesis.static import static_branch, static_lmi_certificate
from src.verify import certify_threshold, verify_design


def _disc_search(channel, radii=801, angles=720):
    r = np.linspace(0.0, 1.0, radii)[:, None]
    phase = np.exp(1j * np.linspace(-np.pi, np.pi, angles, endpoint=False))[None, :]
    h = (r * phase).ravel()
    k = channel.kind.k
    su = channel.sigma_u_sq
    weight = su * abs(k) ** 2 + channel.sigma_w_sq * abs(channel.kind.m) ** 2
    cost = np.abs(h) ** 2 * weight - 2.0 * np.real(h * k * (1.0 + su)) + su + 2.0
    best = int(np.argmin(cost))
    return h[best], float(cost[best])


def test_below_threshold_is_a_phase(static_low):
    design = static_optimal(static_low)
    assert static_branch(static_low) == "phase"
    assert design.h11.constant_value == pytest.approx(1.0)
    assert design.optimal_value == pytest.approx(0.38934, abs=1e-5)
    assert design.gamma_sq_bound == pytest.approx(design.optimal_value + 1e-9)


def test_above_threshold_is_a_beam_splitter(static_high):
    design = static_optimal(static_high)
    assert static_branch(static_high) == "splitter"
    assert design.h11.constant_value.real == pytest.approx(0.72467, abs=1e-4)
    assert design.optimal_value == pytest.approx(1.433071, abs=1e-5)
    assert design.optimal_value == pytest.approx(1.43315, abs=1e-3)


def test_optimal_designs_verify(static_low, static_high):
    for channel in (static_low, static_high):
        report = verify_design(channel, static_optimal(channel))
        assert report.passed
        assert report.paraunitarity_residual_max < 1e-12


def test_closed_form_matches_disc_search():
    rng = np.random.default_rng(11)
    for _ in range(20):
        eta = rng.uniform(0.2, 0.9)
        sigma_u_sq = rng.uniform(0.05, 0.5)
        reference = static_channel_from_transmittance(eta, 0.0, FieldIntensities(sigma_u_sq, 1.0))
        sigma_w_sq = static_threshold(reference) * rng.choice([0.5, 1.5])
        channel = static_channel_from_transmittance(eta, 0.0, FieldIntensities(sigma_u_sq, sigma_w_sq))
        design = static_optimal(channel)
        h, value = _disc_search(channel)
        assert design.optimal_value == pytest.approx(value, abs=1e-5)
        assert design.optimal_value <= value + 1e-12
        assert abs(design.h11.constant_value - h) < 1e-2
        assert error_psd(channel, design.h11, 0.0) == pytest.approx(design.optimal_value, abs=1e-12)


def test_degenerate_channel():
    channel = static_channel_from_transmittance(0.0, 0.0, FieldIntensities(0.0, 0.0))
    with pytest.raises(DegenerateChannel):
        static_optimal(channel)


def test_threshold_value():
    channel = static_channel_from_transmittance(0.7, 0.0, FieldIntensities(0.1, 1.0))
    assert static_threshold(channel) == pytest.approx(2.83442, abs=1e-4)


def test_realization(static_high, static_low):
    assert static_realization(static_high).equalizer_transmittance == pytest.approx(0.52514, abs=1e-4)
    with pytest.raises(BranchMismatch):
        static_realization(static_low)


def test_threshold_certificate_equivalence():
    mismatches = 0
    for sigma_w_sq in np.linspace(0.05, 8.0, 40):
        channel = static_channel_from_transmittance(0.7, 0.0, FieldIntensities(0.1, float(sigma_w_sq)))
        certificate = certify_threshold(channel, static_optimal(channel).gamma_sq_bound)
        above = sigma_w_sq > static_threshold(channel)
        mismatches += (certificate is not None) != above
        if certificate is not None:
            assert certificate.closed_form
            assert certificate.min_eig_over_grid > 0.0
    assert mismatches == 0


def test_lmi_certificate_at_exact_optimum(static_high, static_low):
    assert static_lmi_certificate(static_high, static_optimal(static_high).optimal_value) is not None
    assert static_lmi_certificate(static_low, static_optimal(static_low).optimal_value) is None


def test_theta_choice(static_low, static_high):
    assert static_theta_choice(static_high) == 0j
    assert static_theta_choice(static_low) == pytest.approx(1.0 - 1e-6)


@pytest.mark.parametrize("theta", [-0.5, 0.0, 0.5])
def test_jspectral_designs_meet_their_bound(static_high, theta):
    gamma_sq = static_cost_floor(static_high) + 1e-3
    family = parameterize_h11(j_spectral_factor(static_high, gamma_sq), theta)
    design = complete_equalizer(family.h11, gamma_sq_bound=gamma_sq, theta=theta)
    report = verify_design(static_high, design)
    assert report.passed
    assert report.sup_error_psd < gamma_sq


def test_jspectral_below_floor(static_high):
    with pytest.raises(GammaTooSmall):
        j_spectral_factor(static_high, static_cost_floor(static_high) - 1e-3)


@pytest.mark.parametrize("sigma_w_sq", [0.2, 4.0])
def test_suboptimal_family_converges_to_optimum(sigma_w_sq):
    channel = static_channel_from_transmittance(0.7, 0.0, FieldIntensities(0.1, sigma_w_sq))
    optimum = static_optimal(channel).h11.constant_value
    floor = static_cost_floor(channel)
    theta = static_theta_choice(channel)
    errors = []
    for offset in np.logspace(-1, -7, 10):
        family = parameterize_h11(j_spectral_factor(channel, floor + offset), theta)
        errors.append(abs(family.h11.freqresp([0.0])[0] - optimum))
    assert np.all(np.diff(errors) <= 1e-9)
    assert errors[-1] < 1e-5
    assert errors[-1] < 1e-3 * errors[0]
