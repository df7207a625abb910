"""Service surface: session workflow, validation, status-code mapping,
thin-shell contract against the engine."""

import random
from datetime import datetime, timezone
from pathlib import Path

import pytest
from fastapi.testclient import TestClient

from smart_assess.questionnaire import load_pack
from smart_assess.scoring import assess
from smart_assess.serialize import canonical_json, response_set_from_dict
from smart_assess.service.app import create_app
from smart_assess.service.config import ServiceConfig

from helpers import minimal_pack

STARTER = Path(__file__).resolve().parents[1] / "src/smart_assess/packs/handbook-seed.smartpack.json"

TOA_BODY = {
    "id": "t1",
    "name": "Widget",
    "purpose": "frob the encabulator",
    "environment": "on-prem cluster",
    "software_type": "newly_developed",
    "dependency": "independent",
    "security_criticality": "low",
}


def fixed_clock():
    return datetime(2026, 8, 1, 12, 0, tzinfo=timezone.utc)


@pytest.fixture
def client(tmp_path) -> TestClient:
    config = ServiceConfig(data_dir=str(tmp_path / "data"), pack=str(STARTER))
    app = create_app(config, clock=fixed_clock)
    return TestClient(app)


def open_session(client, toa_id="t1", body=None):
    response = client.post(f"/toas/{toa_id}/sessions", json=body or {"created_by": "alice"})
    assert response.status_code == 201, response.text
    return response.json()["session_id"]


def answer_everything(client, session_id, answers=None, default="yes"):
    questions = client.get(f"/sessions/{session_id}/questions").json()["questions"]
    for question in questions:
        answer = (answers or {}).get(question["id"], default)
        body = {"answer": answer, "justification": "", "evidence": []}
        if answer == "yes" and question["evidence_required"]:
            body["evidence"] = [{
                "id": f"ev-{question['id']}",
                "kind": "document",
                "content_digest": "feedbeef",
                "recorded_at": "2026-08-01T00:00:00+00:00",
            }]
        if answer == "not_applicable":
            body["justification"] = "not relevant here"
        response = client.put(f"/sessions/{session_id}/responses/{question['id']}", json=body)
        assert response.status_code == 200, response.text
    return questions


class TestToAEndpoints:
    def test_create_and_get(self, client):
        created = client.post("/toas", json=TOA_BODY)
        assert created.status_code == 201
        assert created.json()["current_level"] == "idea"
        fetched = client.get("/toas/t1")
        assert fetched.status_code == 200
        assert fetched.json() == created.json()

    def test_duplicate_conflict(self, client):
        assert client.post("/toas", json=TOA_BODY).status_code == 201
        assert client.post("/toas", json=TOA_BODY).status_code == 409

    def test_empty_purpose_rejected(self, client):
        body = dict(TOA_BODY, purpose="  ")
        assert client.post("/toas", json=body).status_code == 400

    def test_bad_enum_rejected(self, client):
        body = dict(TOA_BODY, software_type="shareware")
        assert client.post("/toas", json=body).status_code == 400

    def test_unknown_toa_404(self, client):
        assert client.get("/toas/ghost").status_code == 404

    def test_list(self, client):
        client.post("/toas", json=TOA_BODY)
        client.post("/toas", json=dict(TOA_BODY, id="t2"))
        listed = client.get("/toas").json()["toas"]
        assert [t["id"] for t in listed] == ["t1", "t2"]


class TestPackEndpoints:
    def test_upload_list_get(self, client):
        doc = canonical_json(minimal_pack(pack_id="uploaded", version="2.0.0").to_dict())
        uploaded = client.post("/packs", content=doc)
        assert uploaded.status_code == 201
        digest = uploaded.json()["digest"]
        assert len(digest) == 64
        listed = client.get("/packs").json()["packs"]
        assert any(p["pack_id"] == "uploaded" for p in listed)
        fetched = client.get("/packs/uploaded/2.0.0")
        assert fetched.status_code == 200
        assert fetched.json()["pack_id"] == "uploaded"

    def test_invalid_pack_rejected_with_report(self, client):
        bad = minimal_pack(t_negative=90.0, t_positive=10.0)
        response = client.post("/packs", content=canonical_json(bad.to_dict()))
        assert response.status_code == 400
        report = response.json()["details"]["report"]
        assert any("out of order" in d["message"] for d in report["diagnostics"])

    def test_malformed_pack_400(self, client):
        assert client.post("/packs", content=b"{nope").status_code == 400

    def test_unknown_pack_404(self, client):
        assert client.get("/packs/ghost/0.0.1").status_code == 404


class TestSessions:
    def test_open_and_single_session_invariant(self, client):
        client.post("/toas", json=TOA_BODY)
        sid = open_session(client)
        second = client.post("/toas/t1/sessions", json={"created_by": "bob"})
        assert second.status_code == 409
        assert second.json()["details"]["open_session_id"] == sid

    def test_open_unknown_toa(self, client):
        assert client.post("/toas/ghost/sessions", json={}).status_code == 404

    def test_outdated_toa_record_only(self, client):
        client.post("/toas", json=dict(TOA_BODY, id="old", current_level="outdated"))
        assert client.post("/toas/old/sessions", json={}).status_code == 422

    def test_questions_applicable_and_unanswered_first(self, client):
        client.post("/toas", json=TOA_BODY)  # low security
        sid = open_session(client)
        data = client.get(f"/sessions/{sid}/questions").json()
        ids = [q["id"] for q in data["questions"]]
        assert "sec-pg-03" not in ids  # gated on high criticality
        assert "idea-01" in ids and "trial-01" not in ids  # only current level axis
        # answer the first question: it moves to the back partition
        first = data["questions"][0]["id"]
        client.put(f"/sessions/{sid}/responses/{first}",
                   json={"answer": "no", "justification": "", "evidence": []})
        after = client.get(f"/sessions/{sid}/questions").json()["questions"]
        assert after[-1]["id"] == first and after[-1]["answered"]
        assert all(not q["answered"] for q in after[:-1])

    def test_progress_counts(self, client):
        client.post("/toas", json=TOA_BODY)
        sid = open_session(client)
        data = client.get(f"/sessions/{sid}/questions").json()
        total = sum(axis["applicable"] for axis in data["progress"])
        assert total == len(data["questions"])
        assert all(axis["answered"] == 0 for axis in data["progress"])


class TestResponses:
    def test_evidence_rule_enforced(self, client):
        client.post("/toas", json=TOA_BODY)
        sid = open_session(client)
        response = client.put(
            f"/sessions/{sid}/responses/idea-01",
            json={"answer": "yes", "justification": "", "evidence": []},
        )
        assert response.status_code == 400
        assert response.json()["error"] == "evidence_missing"

    def test_na_needs_justification(self, client):
        client.post("/toas", json=TOA_BODY)
        sid = open_session(client)
        response = client.put(
            f"/sessions/{sid}/responses/idea-03",
            json={"answer": "not_applicable", "justification": "", "evidence": []},
        )
        assert response.status_code == 400

    def test_unknown_question_404(self, client):
        client.post("/toas", json=TOA_BODY)
        sid = open_session(client)
        response = client.put(
            f"/sessions/{sid}/responses/ghost-99",
            json={"answer": "yes", "justification": "", "evidence": []},
        )
        assert response.status_code == 404

    def test_inapplicable_question_400(self, client):
        client.post("/toas", json=TOA_BODY)  # idea level: trial questions inapplicable
        sid = open_session(client)
        response = client.put(
            f"/sessions/{sid}/responses/trial-03",
            json={"answer": "yes", "justification": "", "evidence": []},
        )
        assert response.status_code == 400

    def test_upsert_is_idempotent(self, client):
        client.post("/toas", json=TOA_BODY)
        sid = open_session(client)
        body = {"answer": "no", "justification": "", "evidence": []}
        first = client.put(f"/sessions/{sid}/responses/idea-03", json=body)
        state_after_first = client.get(f"/sessions/{sid}").json()
        second = client.put(f"/sessions/{sid}/responses/idea-03", json=body)
        state_after_second = client.get(f"/sessions/{sid}").json()
        assert first.status_code == second.status_code == 200
        state_after_first.pop("expires_at")
        state_after_second.pop("expires_at")
        assert state_after_first == state_after_second


class TestFinalize:
    def test_incomplete_422_with_missing_list(self, client):
        client.post("/toas", json=TOA_BODY)
        sid = open_session(client)
        response = client.post(f"/sessions/{sid}/finalize")
        assert response.status_code == 422
        assert response.json()["details"]["missing"]

    def test_all_yes_advances(self, client):
        client.post("/toas", json=TOA_BODY)
        sid = open_session(client)
        answer_everything(client, sid)
        response = client.post(f"/sessions/{sid}/finalize")
        assert response.status_code == 200
        data = response.json()
        assert data["notation"] == "I+"
        assert data["transition"]["decision"] == "advance"
        assert client.get("/toas/t1").json()["current_level"] == "research"
        assert client.get(f"/sessions/{sid}").json()["state"] == "finalized"

    def test_finalize_matches_direct_engine_call(self, client):
        client.post("/toas", json=TOA_BODY)
        sid = open_session(client)
        answer_everything(client, sid, {"idea-03": "no"})
        finalize = client.post(f"/sessions/{sid}/finalize")
        assert finalize.status_code == 200
        session = client.get(f"/sessions/{sid}").json()
        pack = load_pack(STARTER.read_bytes())
        response_set = response_set_from_dict({
            "profile_id": "t1",
            "pack_id": pack.pack_id,
            "pack_version": pack.version,
            "assessor": session["created_by"],
            "assessed_at": "2026-08-01T12:00:00+00:00",
            "responses": session["responses"],
            "evidence": session["evidence"],
        })
        from smart_assess.serialize import profile_from_dict

        profile = profile_from_dict(dict(TOA_BODY, lifecycle_note="", current_level="idea"))
        vector = assess(pack, profile, response_set)
        assert finalize.json()["vector"] == vector.to_dict()

    def test_finalized_session_is_immutable(self, client):
        client.post("/toas", json=TOA_BODY)
        sid = open_session(client)
        answer_everything(client, sid)
        client.post(f"/sessions/{sid}/finalize")
        put = client.put(f"/sessions/{sid}/responses/idea-03",
                         json={"answer": "no", "justification": "", "evidence": []})
        assert put.status_code == 409
        again = client.post(f"/sessions/{sid}/finalize")
        assert again.status_code == 409

    def test_fuzz_no_mutation_after_finalize(self, client):
        client.post("/toas", json=TOA_BODY)
        sid = open_session(client)
        answer_everything(client, sid)
        client.post(f"/sessions/{sid}/finalize")
        frozen = client.get(f"/sessions/{sid}").json()
        rng = random.Random(13)
        calls = [
            lambda: client.put(f"/sessions/{sid}/responses/idea-03",
                               json={"answer": "no", "justification": "", "evidence": []}),
            lambda: client.post(f"/sessions/{sid}/finalize"),
            lambda: client.post(f"/sessions/{sid}/decision",
                                json={"choice": "advance", "justification": "x"}),
        ]
        for _ in range(50):
            response = rng.choice(calls)()
            assert response.status_code in (400, 409)
            assert client.get(f"/sessions/{sid}").json() == frozen


class TestDecisionFlow:
    def _to_awaiting(self, client):
        client.post("/toas", json=TOA_BODY)
        sid = open_session(client)
        answer_everything(client, sid, {"idea-03": "no"})  # 2/3 -> neutral
        finalize = client.post(f"/sessions/{sid}/finalize")
        assert finalize.json()["transition"]["decision"] == "needs_assessor_decision"
        assert finalize.json()["transition"]["options"] == ["hold", "advance"]
        assert client.get(f"/sessions/{sid}").json()["state"] == "awaiting_decision"
        return sid

    def test_advance_decision(self, client):
        sid = self._to_awaiting(client)
        decision = client.post(
            f"/sessions/{sid}/decision",
            json={"choice": "advance", "justification": "research base exists",
                  "assessor": "bob"},
        )
        assert decision.status_code == 200
        assert decision.json()["current_level"] == "research"
        assert client.get("/toas/t1").json()["current_level"] == "research"
        assert client.get(f"/sessions/{sid}").json()["state"] == "finalized"
        rows = client.get("/toas/t1/history").json()["rows"]
        assert len(rows) == 2  # assessment + decision record

    def test_hold_decision(self, client):
        sid = self._to_awaiting(client)
        decision = client.post(
            f"/sessions/{sid}/decision",
            json={"choice": "hold", "justification": "needs more source material"},
        )
        assert decision.status_code == 200
        assert client.get("/toas/t1").json()["current_level"] == "idea"

    def test_empty_justification_rejected(self, client):
        sid = self._to_awaiting(client)
        decision = client.post(
            f"/sessions/{sid}/decision", json={"choice": "hold", "justification": "  "}
        )
        assert decision.status_code == 400

    def test_decision_without_pending_409(self, client):
        client.post("/toas", json=TOA_BODY)
        sid = open_session(client)
        response = client.post(
            f"/sessions/{sid}/decision", json={"choice": "hold", "justification": "x"}
        )
        assert response.status_code == 409

    def test_session_released_after_decision(self, client):
        sid = self._to_awaiting(client)
        # still locked while awaiting
        assert client.post("/toas/t1/sessions", json={}).status_code == 409
        client.post(f"/sessions/{sid}/decision",
                    json={"choice": "hold", "justification": "wait for studies"})
        assert client.post("/toas/t1/sessions", json={}).status_code == 201


class TestReportsAndHistory:
    def _finalized(self, client):
        client.post("/toas", json=TOA_BODY)
        sid = open_session(client)
        answer_everything(client, sid, {"idea-01": "no", "idea-02": "no", "idea-03": "no"})
        return client.post(f"/sessions/{sid}/finalize").json()

    def test_history_rows(self, client):
        self._finalized(client)
        rows = client.get("/toas/t1/history").json()["rows"]
        assert len(rows) == 1
        assert rows[0]["notation"] == "I-"

    def test_report_formats(self, client):
        self._finalized(client)
        plain = client.get("/toas/t1/report?format=plain")
        assert plain.status_code == 200
        assert plain.headers["content-type"].startswith("text/plain")
        assert "Maturity:  I-" in plain.text
        report = client.get("/toas/t1/report?format=json")
        assert report.headers["content-type"] == "application/json"
        assert report.json()["header"]["notation"] == "I-"
        html = client.get("/toas/t1/report?format=html")
        assert html.headers["content-type"].startswith("text/html")
        assert client.get("/toas/t1/report?format=pdf").status_code == 400

    def test_report_of_missing_history_404(self, client):
        client.post("/toas", json=TOA_BODY)
        assert client.get("/toas/t1/report").status_code == 404

    def test_history_report_mode(self, client):
        self._finalized(client)
        response = client.get("/toas/t1/report?format=json&history=true")
        assert response.json()["kind"] == "history_report"

    def test_action_plan_endpoint(self, client):
        finalized = self._finalized(client)
        assert finalized["transition"]["decision"] == "remediate"
        plan = client.get("/toas/t1/action-plan").json()
        open_ids = {item["question_id"] for item in plan["open_items"]}
        assert open_ids == {"idea-01", "idea-02", "idea-03"}
        assert plan["latest_plan"]["items"]


class TestSessionExpiry:
    def test_expired_session_releases_the_toa_lock(self, tmp_path):
        from datetime import timedelta

        class MovableClock:
            def __init__(self):
                self.now = datetime(2026, 8, 1, 12, 0, tzinfo=timezone.utc)

            def __call__(self):
                return self.now

        clock = MovableClock()
        config = ServiceConfig(data_dir=str(tmp_path / "data"), pack=str(STARTER),
                               session_idle_days=30)
        client = TestClient(create_app(config, clock=clock))
        client.post("/toas", json=TOA_BODY)
        first = open_session(client)
        assert client.post("/toas/t1/sessions", json={}).status_code == 409
        clock.now += timedelta(days=31)
        second = client.post("/toas/t1/sessions", json={"created_by": "bob"})
        assert second.status_code == 201
        assert client.get(f"/sessions/{first}").json()["state"] == "expired"

    def test_activity_refreshes_expiry(self, tmp_path):
        from datetime import timedelta

        class MovableClock:
            def __init__(self):
                self.now = datetime(2026, 8, 1, 12, 0, tzinfo=timezone.utc)

            def __call__(self):
                return self.now

        clock = MovableClock()
        config = ServiceConfig(data_dir=str(tmp_path / "data"), pack=str(STARTER),
                               session_idle_days=30)
        client = TestClient(create_app(config, clock=clock))
        client.post("/toas", json=TOA_BODY)
        sid = open_session(client)
        clock.now += timedelta(days=20)
        client.put(f"/sessions/{sid}/responses/idea-03",
                   json={"answer": "no", "justification": "", "evidence": []})
        clock.now += timedelta(days=20)  # 40 days after open, 20 after activity
        assert client.get(f"/sessions/{sid}").json()["state"] == "draft"


class TestActionPlanCsv:
    def test_csv_export(self, client):
        client.post("/toas", json=TOA_BODY)
        sid = open_session(client)
        answer_everything(client, sid, {"idea-01": "no", "idea-02": "no", "idea-03": "no"})
        client.post(f"/sessions/{sid}/finalize")
        response = client.get("/toas/t1/action-plan?format=csv")
        assert response.status_code == 200
        assert response.headers["content-type"].startswith("text/csv")
        lines = response.text.strip().splitlines()
        assert lines[0].startswith("question_id,")
        assert len(lines) == 4  # header + three items

    def test_csv_without_plan_404(self, client):
        client.post("/toas", json=TOA_BODY)
        assert client.get("/toas/t1/action-plan?format=csv").status_code == 404

    def test_unknown_format_400(self, client):
        client.post("/toas", json=TOA_BODY)
        assert client.get("/toas/t1/action-plan?format=yaml").status_code == 400


class TestAuth:
    def test_token_required_when_configured(self, tmp_path):
        config = ServiceConfig(data_dir=str(tmp_path / "data"), token="sekrit", pack=str(STARTER))
        client = TestClient(create_app(config, clock=fixed_clock))
        assert client.get("/toas").status_code == 401
        assert client.get("/toas", headers={"Authorization": "Bearer wrong"}).status_code == 401
        ok = client.get("/toas", headers={"Authorization": "Bearer sekrit"})
        assert ok.status_code == 200

    def test_root_is_public(self, tmp_path):
        config = ServiceConfig(data_dir=str(tmp_path / "data"), token="sekrit")
        client = TestClient(create_app(config))
        assert client.get("/").status_code == 200
