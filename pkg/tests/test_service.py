import numpy as np
import pytest
from fastapi.testclient import TestClient

from phasefit.service.app import app

from conftest import EQUIVALENT_A_LAYERS, REFERENCE_LAYERS, REFERENCE_SHIFTS

client = TestClient(app, raise_server_exceptions=False)


def potential_payload(layers):
    radii, values = layers
    return {"radii": list(radii), "values": list(values)}


def test_healthz():
    resp = client.get("/healthz")
    assert resp.status_code == 200
    assert resp.json()["status"] == "ok"


class TestShiftsEndpoint:
    def test_matrix_table(self):
        resp = client.post(
            "/shifts",
            json={"potential": potential_payload(REFERENCE_LAYERS), "k": 3.0, "l_max": 20},
        )
        assert resp.status_code == 200
        body = resp.json()
        delta = np.array(body["delta"])
        assert body["method"] == "matrix"
        assert len(delta) == 21
        rel = np.abs((delta - REFERENCE_SHIFTS) / REFERENCE_SHIFTS)
        assert rel.max() < 1e-4

    def test_ode_discrepancy_footer(self):
        resp = client.post(
            "/shifts",
            json={
                "potential": potential_payload(REFERENCE_LAYERS),
                "k": 3.0,
                "l_max": 8,
                "method": "ode",
                "ode_step_count": 4000,
            },
        )
        assert resp.status_code == 200
        body = resp.json()
        assert body["max_discrepancy"] is not None
        assert body["max_discrepancy"] < 1e-5

    def test_validation_error_maps_to_422(self):
        resp = client.post(
            "/shifts",
            json={"potential": {"radii": [2.0, 1.0], "values": [1.0, 1.0]}, "k": 3.0},
        )
        assert resp.status_code == 422
        assert resp.json()["detail"]["kind"] == "validation"

    def test_solver_error_maps_to_400(self):
        resp = client.post(
            "/shifts",
            json={"potential": {"radii": [1.0], "values": [2.0]}, "k": 1.0},
        )
        assert resp.status_code == 400
        assert resp.json()["detail"]["kind"] == "solver"

    def test_pydantic_schema_error_is_422(self):
        resp = client.post("/shifts", json={"k": 3.0})
        assert resp.status_code == 422


class TestPhiEndpoint:
    def test_candidate_vs_target_potential(self):
        resp = client.post(
            "/phi",
            json={
                "candidate": potential_payload(EQUIVALENT_A_LAYERS),
                "target": potential_payload(REFERENCE_LAYERS),
                "k": 3.0,
                "l_start": 0,
                "l_end": 20,
            },
        )
        assert resp.status_code == 200
        assert resp.json()["phi"] == pytest.approx(9.3586605e-5, rel=0.05)

    def test_candidate_vs_explicit_shifts(self):
        resp = client.post(
            "/phi",
            json={
                "candidate": potential_payload(REFERENCE_LAYERS),
                "target_delta": list(REFERENCE_SHIFTS),
                "k": 3.0,
            },
        )
        assert resp.status_code == 200
        assert resp.json()["phi"] < 1e-4

    def test_self_is_zero(self):
        resp = client.post(
            "/phi",
            json={
                "candidate": potential_payload(REFERENCE_LAYERS),
                "target": potential_payload(REFERENCE_LAYERS),
                "k": 3.0,
            },
        )
        assert resp.json()["phi"] == 0.0

    def test_needs_exactly_one_target(self):
        resp = client.post(
            "/phi", json={"candidate": potential_payload(REFERENCE_LAYERS), "k": 3.0}
        )
        assert resp.status_code == 422
        both = client.post(
            "/phi",
            json={
                "candidate": potential_payload(REFERENCE_LAYERS),
                "target": potential_payload(REFERENCE_LAYERS),
                "target_delta": list(REFERENCE_SHIFTS),
                "k": 3.0,
            },
        )
        assert both.status_code == 422


class TestSearchEndpoint:
    def test_small_deterministic_search(self):
        req = {
            "target": potential_payload(REFERENCE_LAYERS),
            "k": 3.0,
            "l_end": 12,
            "settings": {
                "L": 30,
                "gamma": 0.067,
                "seed": 4242,
                "M_max": 2,
                "R": 2.5,
                "q_high": 8.0,
                "line_tol": 1e-4,
                "f_tol": 1e-7,
                "max_sweeps": 6,
            },
        }
        r1 = client.post("/search", json=req)
        r2 = client.post("/search", json=req)
        assert r1.status_code == 200
        b1, b2 = r1.json(), r2.json()
        assert b1["evaluations"] == b2["evaluations"]
        assert [m["phi"] for m in b1["minima"]] == [m["phi"] for m in b2["minima"]]
        assert [m["radii"] for m in b1["minima"]] == [m["radii"] for m in b2["minima"]]
        assert all(m["phi"] >= 0 for m in b1["minima"])
        phis = [m["phi"] for m in b1["minima"]]
        assert phis == sorted(phis)


class TestCompareEndpoint:
    def test_profiles_and_misfit(self):
        resp = client.post(
            "/compare",
            json={
                "candidate": potential_payload(EQUIVALENT_A_LAYERS),
                "original": potential_payload(REFERENCE_LAYERS),
                "k": 3.0,
                "l_max": 20,
                "l_start": 0,
                "grid_points": 500,
            },
        )
        assert resp.status_code == 200
        body = resp.json()
        assert len(body["r"]) == 500
        assert len(body["q_candidate"]) == 500
        r = np.array(body["r"])
        qc = np.array(body["q_candidate"])
        assert np.all(qc[r < 0.4316] == 8.9991)
        assert body["phi"] == pytest.approx(9.3586605e-5, rel=0.05)
        assert len(body["delta_candidate"]) == 21

    def test_identical_potentials(self):
        resp = client.post(
            "/compare",
            json={
                "candidate": potential_payload(REFERENCE_LAYERS),
                "original": potential_payload(REFERENCE_LAYERS),
                "k": 3.0,
            },
        )
        body = resp.json()
        assert body["phi"] == 0.0
        assert body["q_candidate"] == body["q_original"]

    def test_bad_grid(self):
        resp = client.post(
            "/compare",
            json={
                "candidate": potential_payload(REFERENCE_LAYERS),
                "original": potential_payload(REFERENCE_LAYERS),
                "grid_points": 1,
            },
        )
        assert resp.status_code == 422
