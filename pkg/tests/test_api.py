import pytest
from fastapi.testclient import TestClient

from src.api.app import app

STATIC = {
    "channel": {"type": "static", "eta": 0.7},
    "intensities": {"sigma_u_sq": 0.1, "sigma_w_sq": 4.0},
    "method": "closed_form",
}


@pytest.fixture(scope="module")
def client():
    return TestClient(app)


def test_health(client):
    response = client.get("/health")
    assert response.status_code == 200
    assert response.json() == {"status": "ok"}


def test_schema(client):
    assert "intensities" in client.get("/schema").json()["properties"]


def test_design_returns_record(client):
    response = client.post("/design", json=STATIC)
    assert response.status_code == 200
    record = response.json()
    assert record["method"] == "static_optimal"
    assert record["optimal_value"] == pytest.approx(1.433071, abs=1e-5)
    assert record["verification"]["passed"]


def test_design_rejects_invalid_config(client):
    response = client.post("/design", json={**STATIC, "method": "unknown"})
    assert response.status_code == 422


def test_design_reports_synthesis_failure(client):
    config = {"channel": {"type": "cavity", "k": 0.9}, "intensities": {"sigma_w_sq": 0.2}}
    response = client.post("/design", json=config)
    assert response.status_code == 400
    detail = response.json()["detail"]
    assert detail["stage"] == "synthesis"
    assert detail["error"] == "ParameterOutOfRange"


def test_verify_roundtrip(client):
    record = client.post("/design", json=STATIC).json()
    response = client.post("/verify", json=record)
    assert response.status_code == 200
    assert response.json()["report"]["passed"]

    record["gamma_sq_bound"] = 1.0
    response = client.post("/verify", json=record)
    assert response.status_code == 400
    assert "psd_bound" in response.json()["detail"]["report"]["failures"]
