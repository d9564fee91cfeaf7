import json
from pathlib import Path

import numpy as np
import pandas as pd
import pytest

from src.core.config import get_tolerances
from src.core.orchestrator import Orchestrator
from src.core.schemas import DesignRecord, ExperimentConfig
from src.stages import SynthesisStage, design_from_record
from src.verify import verify_design

STATIC = {
    "channel": {"type": "static", "eta": 0.7},
    "intensities": {"sigma_u_sq": 0.1, "sigma_w_sq": 4.0},
    "method": "closed_form",
}
CAVITY = {
    "channel": {"type": "cavity", "k": 0.4, "kappa": 5.0, "omega_c": 10.0},
    "intensities": {"sigma_u_sq": 0.1, "sigma_w_sq": 0.2},
}


@pytest.fixture
def orchestrator():
    return Orchestrator(grid_density=400)


def test_static_run_writes_artifacts(orchestrator, tmp_path):
    result = orchestrator.run(ExperimentConfig.model_validate(STATIC), output_dir=str(tmp_path))
    assert result["status"] == "completed"
    assert set(result["paths"]) == {"design", "psd", "bode", "summary_md", "summary_html"}
    for path in result["paths"].values():
        assert Path(path).exists()

    record = DesignRecord.load(tmp_path / "design.json")
    assert record.method == "static_optimal"
    assert record.optimal_value == pytest.approx(1.433071, abs=1e-5)
    assert record.realization["equalizer_transmittance"] == pytest.approx(0.52514, abs=1e-4)
    assert record.verification["passed"]

    psd = pd.read_csv(tmp_path / "psd.csv")
    assert {"omega", "P_e", "P_y_minus_u"} <= set(psd.columns)
    assert np.all(psd["P_e"] <= psd["P_y_minus_u"] + 1e-12)
    assert "static_optimal" in (tmp_path / "summary.md").read_text(encoding="utf-8")
    assert "<table>" in (tmp_path / "summary.html").read_text(encoding="utf-8")


def test_cavity_closed_form_run(orchestrator):
    result = orchestrator.run(ExperimentConfig.model_validate({**CAVITY, "method": "closed_form"}), write=False)
    assert result["status"] == "completed"
    record = result["record"]
    assert record["gamma_sq_bound"] == pytest.approx(0.75777, abs=1e-3)
    assert record["realization"] is not None
    assert result["paths"] == {}


def test_sdp_nevpick_run(orchestrator):
    config = ExperimentConfig.model_validate({**CAVITY, "method": "sdp_nevpick"})
    result = orchestrator.run(config, write=False)
    assert result["status"] == "completed"
    record = result["record"]
    assert record["gamma_tilde_sq"] == pytest.approx(0.7049, abs=0.01)
    assert record["verification"]["passed"]
    assert len(record["alternatives"]) == 3
    assert record["gamma_sq_bound"] >= record["gamma_tilde_sq"]


def test_jspectral_static_run(orchestrator):
    config = ExperimentConfig.model_validate({**STATIC, "method": "jspectral", "theta": 0.0})
    result = orchestrator.run(config, write=False)
    assert result["status"] == "completed"
    assert result["record"]["method"] == "jspectral"


def test_synthesis_failure_names_the_stage(orchestrator):
    config = ExperimentConfig.model_validate({**CAVITY, "method": "closed_form", "theta": 0.5})
    result = orchestrator.run(config, write=False)
    assert result["stage"] == "synthesis"
    assert result["code"] == "ParameterOutOfRange"


def test_theta_override():
    config = ExperimentConfig.model_validate({**CAVITY, "method": "sdp_nevpick"})
    result = SynthesisStage().run(config=config, theta=0.0)
    assert result.success
    outcome = result.data["outcome"]
    assert len(outcome.alternatives) == 1
    assert outcome.design.parameters["theta"] == 0.0


def test_sdp_bound_is_taken_on_a_denser_grid():
    config = ExperimentConfig.model_validate({**CAVITY, "method": "sdp_nevpick"})
    outcome = SynthesisStage().run(config=config, theta=0.0).data["outcome"]
    design = outcome.design
    report = verify_design(outcome.channel, design)
    assert design.parameters["bound_grid_size"] > report.grid_used["size"]
    assert design.gamma_sq_bound == pytest.approx(
        max(outcome.gamma_tilde_sq, design.parameters["sup_error_psd"]) + get_tolerances().bound_guard
    )
    assert report.sup_error_psd <= design.parameters["sup_error_psd"] + 1e-12
    assert report.psd_bound_margin >= get_tolerances().bound_guard - 1e-12


def test_verify_record_roundtrip(orchestrator, tmp_path):
    orchestrator.run(ExperimentConfig.model_validate(STATIC), output_dir=str(tmp_path))
    record = DesignRecord.load(tmp_path / "design.json")
    design = design_from_record(record)
    assert design.h11.constant_value.real == pytest.approx(0.72467, abs=1e-4)
    result = orchestrator.verify_record(record)
    assert result["status"] == "completed"
    assert result["report"]["passed"]


def test_verify_record_reports_failures(orchestrator, tmp_path):
    orchestrator.run(ExperimentConfig.model_validate(STATIC), output_dir=str(tmp_path))
    data = json.loads((tmp_path / "design.json").read_text(encoding="utf-8"))
    data["gamma_sq_bound"] = 1.0
    result = orchestrator.verify_record(DesignRecord.model_validate(data))
    assert result["stage"] == "verification"
    assert "psd_bound" in result["report"]["failures"]


def test_static_figures(orchestrator, tmp_path):
    config = ExperimentConfig.model_validate({**STATIC, "figures": ["fig_compare", "fig_h11"]})
    result = orchestrator.run_figures(config, output_dir=str(tmp_path))
    assert result["status"] == "completed"

    compare = pd.read_csv(tmp_path / "fig_compare.csv")
    assert len(compare) == 40
    assert np.allclose(compare["P_e_optimal"], compare["sdp_optimum"], atol=1e-9)
    assert np.all(compare["P_e_optimal"] <= compare["P_y_minus_u"] + 1e-12)
    above = compare["above_threshold"].astype(bool)
    assert above.any() and not above.all()
    assert np.all(compare["P_e_optimal"][above] < compare["P_y_minus_u"][above])
    assert np.all(np.diff(compare["P_e_optimal"]) >= -1e-12)

    h11 = pd.read_csv(tmp_path / "fig_h11.csv")
    below = ~above
    assert np.allclose(h11["abs_h11_closed_form"][below], 1.0)
    assert np.allclose(h11["abs_h11_closed_form"], h11["abs_h11_sdp"], atol=1e-9)


def test_cavity_subopt_figure(orchestrator, tmp_path):
    config = ExperimentConfig.model_validate(
        {**CAVITY, "figures": ["cav_subopt"], "sigma_w_sq_sweep": [0.2, 1.0, 4.0]}
    )
    result = orchestrator.run_figures(config, output_dir=str(tmp_path))
    assert result["status"] == "completed"
    frame = pd.read_csv(tmp_path / "cav_subopt.csv")
    assert np.all(frame["optimized_bound"] < frame["sup_P_y_minus_u"])


def test_figure_needs_matching_channel(orchestrator, tmp_path):
    config = ExperimentConfig.model_validate({**CAVITY, "figures": ["fig_compare"]})
    result = orchestrator.run_figures(config, output_dir=str(tmp_path))
    assert result["code"] == "ConfigError"
