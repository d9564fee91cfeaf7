import numpy as np
import pytest

from src.channel import FieldIntensities, error_psd, new_cavity_channel, unequalized_psd
from src.core.config import get_tolerances
from src.core.errors import FamilyMismatch, NotRealizable, ParameterOutOfRange, ThetaOutOfInterval
from src.core.grid import verification_grid
from src.core.rational import RationalFunction
from src.synthesis import (
    cavity_gamma_search,
    cavity_realization,
    cavity_suboptimal,
    check_contraction,
    complete_equalizer,
    trivial_design,
)
from src.verify import verify_design


def test_gamma_search_reproduces_published_design(cavity_low):
    gamma_sq, design = cavity_gamma_search(cavity_low)
    assert gamma_sq == pytest.approx(0.75777, abs=1e-3)
    params = design.parameters
    assert params["theta"] == pytest.approx(-0.9998)
    assert params["c"] * params["kappa"] == pytest.approx(7.961, abs=0.05)
    assert params["a"] == pytest.approx(-1.0, abs=1e-3)
    assert -1.0 < params["a"] < 0.0

    target = RationalFunction.first_order(-1.0, 5 + 10j, 7.961 + 10j)
    omegas = np.array([-10.0, 0.0, 10.0, 50.0])
    assert np.allclose(design.h11.freqresp(omegas), target.freqresp(omegas), atol=0.02)


def test_suboptimal_design_is_stable_and_contractive(cavity_low):
    design = cavity_suboptimal(cavity_low, 0.8, -0.9998)
    assert design.h11.is_stable()
    assert check_contraction(design.h11)
    assert design.parameters["family_mismatch"] < 1e-8


@pytest.mark.parametrize("gamma_sq", [0.8, 1.2, 2.0])
def test_suboptimal_design_meets_bound(cavity_low, gamma_sq):
    design = cavity_suboptimal(cavity_low, gamma_sq, -0.9998)
    report = verify_design(cavity_low, design)
    assert report.passed
    assert report.paraunitarity_residual_max < 1e-8
    assert report.contraction_margin >= -1e-9
    assert report.sup_error_psd < gamma_sq


def test_theta_outside_interval(cavity_low):
    with pytest.raises(ThetaOutOfInterval):
        cavity_suboptimal(cavity_low, 0.8, 0.5)
    with pytest.raises(ParameterOutOfRange):
        cavity_gamma_search(cavity_low, theta=0.5)


def test_environment_must_be_noisier_than_input():
    quiet = new_cavity_channel(0.4, 5.0, 10.0, FieldIntensities(0.1, 0.05))
    with pytest.raises(ParameterOutOfRange):
        cavity_gamma_search(quiet)


def test_realization_rebuilds_h11(cavity_low):
    _, design = cavity_gamma_search(cavity_low)
    realization = cavity_realization(design)
    omegas = np.linspace(-30.0, 30.0, 61)
    assert np.allclose(realization.realized_h11().freqresp(omegas), design.h11.freqresp(omegas), atol=1e-9)
    assert realization.eta1**2 + realization.xi1**2 == pytest.approx(1.0)
    assert realization.eta2**2 + realization.xi2**2 == pytest.approx(1.0)
    assert realization.hc_pole == pytest.approx(design.parameters["c"] * 5.0)


def test_realization_needs_cavity_parameters():
    with pytest.raises(ParameterOutOfRange):
        cavity_realization(trivial_design(0.1, 1e-9))


def test_optimized_bound_beats_unequalized_channel():
    for sigma_w_sq in np.linspace(0.15, 4.0, 6):
        channel = new_cavity_channel(0.4, 5.0, 10.0, FieldIntensities(0.1, float(sigma_w_sq)))
        gamma_sq, design = cavity_gamma_search(channel)
        omegas = verification_grid(channel.resonance_frequencies(), density=300).omegas
        assert gamma_sq < float(np.max(unequalized_psd(channel, omegas)))
        assert float(np.max(error_psd(channel, design.h11, omegas))) < gamma_sq


def test_search_without_trivial_fallback(cavity_low):
    gamma_sq, design = cavity_gamma_search(cavity_low, allow_trivial=False)
    assert design.method == "cavity_suboptimal"
    assert gamma_sq < cavity_low.sigma_u_sq + 2.0


def test_high_noise_search_stops_at_beta_boundary(cavity_high):
    # beta > 1 binds for Theta near -1 at this noise level
    gamma_sq, design = cavity_gamma_search(cavity_high, allow_trivial=False)
    assert gamma_sq == pytest.approx(1.84529, abs=1e-3)
    assert design.parameters["beta"] > 1.0


def test_cavity_design_must_match_parameterized_family(cavity_low, monkeypatch):
    exact = get_tolerances().model_copy(update={"family_tol": 0.0})
    monkeypatch.setattr("src.synthesis.cavity.get_tolerances", lambda: exact)
    with pytest.raises(FamilyMismatch) as info:
        cavity_suboptimal(cavity_low, 0.8, -0.9998)
    assert info.value.details["mismatch"] < 1e-8
    assert info.value.to_dict()["error"] == "FamilyMismatch"


def test_completion_refuses_non_paraunitary_result(monkeypatch):
    exact = get_tolerances().model_copy(update={"paraunitarity_tol": 0.0})
    monkeypatch.setattr("src.synthesis.completion.get_tolerances", lambda: exact)
    with pytest.raises(NotRealizable) as info:
        complete_equalizer(RationalFunction.first_order(-0.5, 5 + 10j, 8 + 10j))
    assert info.value.details["residual"] < 1e-8
    assert info.value.details["tolerance"] == 0.0
