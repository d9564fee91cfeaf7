import json

import pytest
from pydantic import ValidationError

from src.core.errors import ConfigError, ParameterOutOfRange
from src.core.rational import RationalFunction
from src.core.schemas import (
    BlockRecord,
    DesignRecord,
    ExperimentConfig,
    config_schema,
    decode_complex,
    encode_complex,
)
from src.stages import build_channel

CAVITY = {
    "channel": {"type": "cavity"},
    "intensities": {"sigma_w_sq": 0.2},
    "method": "sdp_nevpick",
}


def test_valid_config_defaults():
    config = ExperimentConfig.model_validate(CAVITY)
    assert config.channel.kappa == 5.0
    assert config.intensities.sigma_u_sq == 0.1
    assert config.grid.preset == "paper21"
    assert len(config.grid.build()) == 21
    assert config.theta_values() is None


def test_theta_sweep_and_scalar():
    config = ExperimentConfig.model_validate({**CAVITY, "theta": "sweep:[-0.95, 0, 0.95]"})
    assert config.theta_values() == [-0.95, 0.0, 0.95]
    assert ExperimentConfig.model_validate({**CAVITY, "theta": 0.5}).theta_values() == [0.5]


@pytest.mark.parametrize("theta", ["0.5", "sweep:[]", "sweep:[1, 'a']", "sweep:nope"])
def test_invalid_theta(theta):
    with pytest.raises(ValidationError):
        ExperimentConfig.model_validate({**CAVITY, "theta": theta})


@pytest.mark.parametrize(
    "data",
    [
        {**CAVITY, "unknown": 1},
        {**CAVITY, "method": "lqg"},
        {**CAVITY, "intensities": {"sigma_w_sq": -1.0}},
        {**CAVITY, "grid": {"preset": "paper21", "omegas": [0.0]}},
        {**CAVITY, "grid": {"omegas": []}},
        {**CAVITY, "sigma_w_sq_sweep": [0.1, -0.2]},
        {**CAVITY, "figures": ["fig_unknown"]},
        {"channel": {"type": "static", "eta": 0.7, "k": [0.8, 0.0]}, "intensities": {"sigma_w_sq": 1.0}},
        {"channel": {"type": "static", "k": [0.8, 0.0]}, "intensities": {"sigma_w_sq": 1.0}},
        {"channel": {"type": "static"}, "intensities": {"sigma_w_sq": 1.0}},
    ],
)
def test_invalid_configs(data):
    with pytest.raises(ValidationError):
        ExperimentConfig.model_validate(data)


def test_load_reports_config_errors(tmp_path):
    with pytest.raises(ConfigError):
        ExperimentConfig.load(tmp_path / "missing.json")
    broken = tmp_path / "broken.json"
    broken.write_text("{not json", encoding="utf-8")
    with pytest.raises(ConfigError):
        ExperimentConfig.load(broken)
    invalid = tmp_path / "invalid.json"
    invalid.write_text(json.dumps({**CAVITY, "tau": -1.0}), encoding="utf-8")
    with pytest.raises(ConfigError) as info:
        ExperimentConfig.load(invalid)
    assert info.value.to_dict()["error"] == "ConfigError"
    assert "tau" in info.value.details["reason"]


def test_load_valid_file(tmp_path):
    path = tmp_path / "config.json"
    path.write_text(json.dumps(CAVITY), encoding="utf-8")
    assert ExperimentConfig.load(path).method == "sdp_nevpick"


def test_record_needs_a_filter():
    with pytest.raises(ValidationError):
        DesignRecord(config=ExperimentConfig.model_validate(CAVITY), channel={}, method="sdp_nevpick")


def test_record_roundtrip(tmp_path):
    f = RationalFunction.first_order(-1.0, 5 + 10j, 7.961 + 10j)
    block = BlockRecord.from_rational(f)
    record = DesignRecord(
        config=ExperimentConfig.model_validate(CAVITY),
        channel={"type": "cavity"},
        method="cavity_suboptimal",
        blocks={name: block for name in ("h11", "h12", "h21", "h22")},
        gamma_sq_bound=0.8,
    )
    path = tmp_path / "design.json"
    path.write_text(record.to_json(), encoding="utf-8")
    loaded = DesignRecord.load(path)
    assert loaded.gamma_sq_bound == 0.8
    assert loaded.blocks["h11"].to_rational()(0.3j) == pytest.approx(f(0.3j), abs=1e-14)


def test_complex_encoding_is_exact():
    value = complex(0.1, -1.0 / 3.0)
    assert decode_complex(encode_complex(value)) == value


def test_config_schema_names_methods():
    schema = config_schema()
    assert set(schema["required"]) == {"channel", "intensities"}
    assert "sdp_nevpick" in json.dumps(schema)


def test_channel_ranges_are_checked_at_build_time():
    config = ExperimentConfig.model_validate({**CAVITY, "channel": {"type": "cavity", "k": 0.9}})
    with pytest.raises(ParameterOutOfRange):
        build_channel(config)
