"""HTTP API: endpoint behavior, error codes, persistence across instances."""

import json
from pathlib import Path

import pytest
from fastapi.testclient import TestClient

from ltilab.config import Config
from ltilab.server import create_app


@pytest.fixture()
def client(tmp_path):
    app = create_app(Config(data_dir=tmp_path / "sessions"))
    with TestClient(app) as c:
        yield c


@pytest.fixture()
def sid(client):
    return client.post("/api/v1/sessions").json()["session_id"]


class TestSessions:
    def test_create_has_defaults(self, client):
        r = client.post("/api/v1/sessions")
        assert r.status_code == 201
        body = r.json()
        assert len(body["systems"]) == 4
        assert body["input_kind"] == "step"
        assert body["selected_id"] == body["systems"][0]["id"]

    def test_get_unknown(self, client):
        assert client.get("/api/v1/sessions/nope").status_code == 404

    def test_patch_input_kind(self, client, sid):
        r = client.patch(f"/api/v1/sessions/{sid}", json={"input_kind": "impulse"})
        assert r.status_code == 200
        assert r.json()["session"]["input_kind"] == "impulse"
        assert "impulse-curious" in [u["id"] for u in r.json()["unlocked"]]

    def test_select_system(self, client, sid):
        r = client.patch(f"/api/v1/sessions/{sid}", json={"selected_id": "sys-3"})
        assert r.json()["session"]["selected_id"] == "sys-3"

    def test_persisted_across_app_instances(self, client, sid, tmp_path):
        client.patch(f"/api/v1/sessions/{sid}/systems/sys-1/params",
                     json={"symbol": "T_1", "value": 2.5})
        app2 = create_app(Config(data_dir=tmp_path / "sessions"))
        with TestClient(app2) as c2:
            r = c2.get(f"/api/v1/sessions/{sid}")
            assert r.status_code == 200
            sys1 = next(s for s in r.json()["systems"] if s["id"] == "sys-1")
            assert sys1["template"]["params"]["T_1"] == 2.5


class TestSystems:
    def test_add_template(self, client, sid):
        r = client.post(f"/api/v1/sessions/{sid}/systems", json={"template": "G6"})
        assert r.status_code == 201
        assert r.json()["system"]["template"]["id"] == "G6"

    def test_add_expression_with_env(self, client, sid):
        r = client.post(
            f"/api/v1/sessions/{sid}/systems",
            json={"expression": "k/(1+T*s)", "env": {"k": 2.0, "T": 0.5}},
        )
        assert r.status_code == 201
        assert r.json()["system"]["tf"]["den"] == [1.0, 0.5]

    def test_parse_error_carries_offset(self, client, sid):
        r = client.post(f"/api/v1/sessions/{sid}/systems", json={"expression": "1/(1+"})
        assert r.status_code == 400
        assert r.json()["detail"]["offset"] == 5

    def test_capacity_conflict(self, client, sid):
        for _ in range(12):
            assert (
                client.post(f"/api/v1/sessions/{sid}/systems", json={"template": "G1"}).status_code
                == 201
            )
        r = client.post(f"/api/v1/sessions/{sid}/systems", json={"template": "G1"})
        assert r.status_code == 409

    def test_delete(self, client, sid):
        r = client.delete(f"/api/v1/sessions/{sid}/systems/sys-2")
        assert r.status_code == 200
        ids = [s["id"] for s in r.json()["session"]["systems"]]
        assert "sys-2" not in ids

    def test_param_range_rejected(self, client, sid):
        r = client.patch(
            f"/api/v1/sessions/{sid}/systems/sys-1/params",
            json={"symbol": "T_1", "value": -3.0},
        )
        assert r.status_code == 400

    def test_pole_move_representability(self, client, sid):
        r = client.post(
            f"/api/v1/sessions/{sid}/systems/sys-1/pole-move",
            json={"index": 0, "re": -1.0, "im": 0.4},
        )
        assert r.status_code == 400
        r = client.post(
            f"/api/v1/sessions/{sid}/systems/sys-1/pole-move",
            json={"index": 0, "re": -2.0, "im": 0.0},
        )
        assert r.status_code == 200
        assert r.json()["system"]["template"]["params"]["T_1"] == pytest.approx(0.5)


class TestViews:
    def test_bode_payload_columns(self, client, sid):
        r = client.get(f"/api/v1/sessions/{sid}/systems/sys-1/bode", params={"points": 50})
        body = r.json()
        assert set(body) == {"omega", "re", "im", "mag_db", "phase_deg"}
        assert len(body["omega"]) == 50

    def test_nyquist(self, client, sid):
        r = client.get(f"/api/v1/sessions/{sid}/systems/sys-1/nyquist", params={"points": 40})
        body = r.json()
        assert set(body) == {"omega", "re", "im"}

    def test_step_metadata(self, client, sid):
        r = client.get(f"/api/v1/sessions/{sid}/systems/sys-2/step")
        assert r.json()["method"] == "analytic"

    def test_margins(self, client, sid):
        r = client.get(f"/api/v1/sessions/{sid}/systems/sys-1/margins")
        assert r.json()["gain_margin"] is None

    def test_pzmap(self, client, sid):
        r = client.get(f"/api/v1/sessions/{sid}/systems/sys-3/pzmap")
        assert len(r.json()["poles"]) == 2

    def test_unknown_view(self, client, sid):
        assert client.get(f"/api/v1/sessions/{sid}/systems/sys-1/heatmap").status_code == 404

    def test_export_with_disposition(self, client, sid):
        r = client.get(
            f"/api/v1/sessions/{sid}/systems/sys-1/export", params={"target": "matlab"}
        )
        assert r.status_code == 200
        assert 'filename="system.m"' in r.headers["content-disposition"]
        assert "tf(num, den" in r.text

    def test_export_requires_valid_target(self, client, sid):
        r = client.get(f"/api/v1/sessions/{sid}/systems/sys-1/export")
        assert r.status_code == 400


class TestGamificationEndpoints:
    def test_event_unlocks(self, client, sid):
        r = client.post(f"/api/v1/sessions/{sid}/events", json={"kind": "nyquist_hovered"})
        assert [u["id"] for u in r.json()["unlocked"]] == ["nyquist-navigator"]
        assert r.json()["progress"]["points"]["achievements"] == 10

    def test_unknown_event_kind(self, client, sid):
        r = client.post(f"/api/v1/sessions/{sid}/events", json={"kind": "levitated"})
        assert r.status_code == 400

    def test_quiz_flow(self, client, sid):
        r = client.post(
            f"/api/v1/sessions/{sid}/quiz/next",
            json={"category": "click_frequency", "seed": 11},
        )
        q = r.json()["question"]
        assert q["category"] == "click_frequency"
        r = client.post(
            f"/api/v1/sessions/{sid}/quiz/answer",
            json={"answer": {"omega": q["target"]["omega"]}},
        )
        body = r.json()
        assert body["correct"] is True
        assert body["quiz"]["click_frequency"]["streak"] == 1
        assert body["progress"]["points"]["quiz"] == 1

    def test_answer_without_question(self, client, sid):
        r = client.post(f"/api/v1/sessions/{sid}/quiz/answer", json={"answer": {"omega": 1.0}})
        assert r.status_code == 409

    def test_wrong_answer_drops_difficulty(self, client, sid):
        for _ in range(4):  # climb first
            q = client.post(
                f"/api/v1/sessions/{sid}/quiz/next",
                json={"category": "click_time", "seed": 3},
            ).json()["question"]
            client.post(
                f"/api/v1/sessions/{sid}/quiz/answer",
                json={"answer": {"time": q["target"]["time"]}},
            )
        state = client.get(f"/api/v1/sessions/{sid}").json()["quiz"]["click_time"]
        assert state["difficulty"] == 3
        q = client.post(
            f"/api/v1/sessions/{sid}/quiz/next",
            json={"category": "click_time", "seed": 4},
        ).json()["question"]
        r = client.post(
            f"/api/v1/sessions/{sid}/quiz/answer",
            json={"answer": {"time": q["target"]["time"] + 100.0}},
        )
        assert r.json()["correct"] is False
        assert r.json()["quiz"]["click_time"] == {"difficulty": 2, "streak": 0}

    def test_assignments_listing_and_check(self, client, sid):
        r = client.get(f"/api/v1/sessions/{sid}/assignments")
        items = r.json()["assignments"]
        assert len(items) >= 12
        assert not any(a["completed"] for a in items)
        client.patch(
            f"/api/v1/sessions/{sid}/systems/sys-1/params",
            json={"symbol": "T_1", "value": 2.0},
        )
        r = client.post(
            f"/api/v1/sessions/{sid}/assignments/g1-pole-at-minus-half/check",
            json={"system_id": "sys-1"},
        )
        body = r.json()
        assert body["passed"] is True
        assert body["explanation"]
        assert body["progress"]["points"]["assignments"] == 10
        r = client.get(f"/api/v1/sessions/{sid}/assignments")
        assert any(a["completed"] for a in r.json()["assignments"])

    def test_assignment_group_mismatch(self, client, sid):
        r = client.post(
            f"/api/v1/sessions/{sid}/assignments/g1-pole-at-minus-half/check",
            json={"system_id": "sys-2"},
        )
        assert r.status_code == 409


class TestCatalogs:
    def test_templates(self, client):
        r = client.get("/api/v1/catalog/templates")
        body = r.json()["templates"]
        assert [t["id"] for t in body] == ["G1", "G2", "G3", "G4", "G5", "G6"]
        g3 = next(t for t in body if t["id"] == "G3")
        names = [p["name"] for p in g3["params"]]
        assert names == ["k_3", "omega_0", "zeta"]

    def test_question_topics(self, client):
        r = client.get("/api/v1/catalog/questions")
        assert "gain margin readout" in r.json()["topics"]
        r = client.get("/api/v1/catalog/questions/gain margin readout")
        assert list(r.json()["layers"]) == ["summary", "expanded", "mathematical"]

    def test_hover_endpoint(self, client, sid):
        r = client.post(
            f"/api/v1/sessions/{sid}/hover",
            json={"plot": "bode_mag", "coordinate": {"mag_db": 20.0}},
        )
        assert r.json()["nyquist_circle"]["radius"] == pytest.approx(10.0)
