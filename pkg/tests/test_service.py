from __future__ import annotations

import pytest
from fastapi.testclient import TestClient

from conftest import SESSION_HYPOTHESES, SESSION_SOURCE
from helpers import ScriptedScorer
from segimt.corpus_io import read_session_logs
from segimt.decoder import DecoderConfig
from segimt.service import create_app


@pytest.fixture
def scripted_client(tmp_path):
    scorer = ScriptedScorer(SESSION_HYPOTHESES)
    persist = tmp_path / "accepted.jsonl"
    app = create_app(scorer, DecoderConfig(max_gap_len=5), persist_path=str(persist))
    with TestClient(app) as client:
        yield client, persist


def create_session(client, text=SESSION_SOURCE):
    resp = client.post("/api/sessions", json={"text": text})
    assert resp.status_code == 201
    return resp.json()


class TestLifecycle:
    def test_health(self, scripted_client):
        client, _ = scripted_client
        assert client.get("/api/health").json() == {"status": "ok"}

    def test_create_returns_initial_hypothesis(self, scripted_client):
        client, _ = scripted_client
        view = create_session(client)
        assert view["hypothesis"] == SESSION_HYPOTHESES[0].split()
        assert view["totals"] == {"ws": 0, "ks": 0, "ma": 0}
        assert view["state"] == "open"

    def test_empty_source_is_400(self, scripted_client):
        client, _ = scripted_client
        assert client.post("/api/sessions", json={"text": "   "}).status_code == 400
        assert client.post("/api/sessions", json={}).status_code == 400

    def test_same_source_gives_distinct_ids_same_hypothesis(self, scripted_client):
        client, _ = scripted_client
        first = create_session(client)
        second = create_session(client)
        assert first["id"] != second["id"]
        assert first["hypothesis"] == second["hypothesis"]

    def test_get_is_idempotent(self, scripted_client):
        client, _ = scripted_client
        view = create_session(client)
        for _ in range(3):
            fetched = client.get(f"/api/sessions/{view['id']}").json()
            assert fetched["totals"] == {"ws": 0, "ks": 0, "ma": 0}

    def test_unknown_session_is_404(self, scripted_client):
        client, _ = scripted_client
        assert client.get("/api/sessions/nope").status_code == 404
        assert client.post("/api/sessions/nope/accept").status_code == 404
        assert (
            client.post("/api/sessions/nope/feedback", json={"spans": [[0, 0]]}).status_code
            == 404
        )


class TestFeedback:
    def test_worked_example_first_turn_charges_4_mouse_3_keys(self, scripted_client):
        client, _ = scripted_client
        view = create_session(client)
        resp = client.post(
            f"/api/sessions/{view['id']}/feedback",
            json={
                "spans": [[0, 0], [4, 6]],
                "correction": {"after_segment_rank": 0, "word": "was"},
            },
        )
        assert resp.status_code == 200
        body = resp.json()
        assert body["delta"] == {"ws": 1, "ks": 3, "ma": 4}
        assert body["totals"] == {"ws": 1, "ks": 3, "ma": 4}
        assert body["hypothesis"] == SESSION_HYPOTHESES[1].split()

    def test_submitted_segments_appear_in_order(self, scripted_client):
        client, _ = scripted_client
        view = create_session(client)
        resp = client.post(
            f"/api/sessions/{view['id']}/feedback", json={"spans": [[0, 0], [4, 6]]}
        )
        hyp = resp.json()["hypothesis"]
        assert hyp[:1] == ["Indiana"]
        joined = " ".join(hyp)
        assert "State to impose" in joined
        assert joined.index("Indiana") < joined.index("State to impose")

    def test_out_of_range_span_is_422(self, scripted_client):
        client, _ = scripted_client
        view = create_session(client)
        resp = client.post(
            f"/api/sessions/{view['id']}/feedback", json={"spans": [[0, 99]]}
        )
        assert resp.status_code == 422

    def test_overlapping_spans_are_422(self, scripted_client):
        client, _ = scripted_client
        view = create_session(client)
        resp = client.post(
            f"/api/sessions/{view['id']}/feedback", json={"spans": [[0, 2], [2, 3]]}
        )
        assert resp.status_code == 422

    def test_empty_turn_is_422(self, scripted_client):
        client, _ = scripted_client
        view = create_session(client)
        resp = client.post(f"/api/sessions/{view['id']}/feedback", json={"spans": []})
        assert resp.status_code == 422

    def test_bad_correction_rank_is_422(self, scripted_client):
        client, _ = scripted_client
        view = create_session(client)
        resp = client.post(
            f"/api/sessions/{view['id']}/feedback",
            json={"spans": [[0, 0]], "correction": {"after_segment_rank": 5, "word": "x"}},
        )
        assert resp.status_code == 422


class TestAccept:
    def test_accept_fresh_session_costs_one_action(self, scripted_client):
        client, persist = scripted_client
        view = create_session(client)
        resp = client.post(f"/api/sessions/{view['id']}/accept")
        assert resp.status_code == 200
        assert resp.json()["totals"] == {"ws": 0, "ks": 0, "ma": 1}
        assert resp.json()["state"] == "accepted"

    def test_accept_reports_server_side_effort_ratios(self, scripted_client):
        client, _ = scripted_client
        view = create_session(client)
        final = client.post(f"/api/sessions/{view['id']}/accept").json()
        hyp = final["hypothesis"]
        chars = sum(len(t) for t in hyp) + len(hyp) - 1
        assert final["ratios"]["wsr"] == 0.0
        assert final["ratios"]["ksr"] == 0.0
        assert final["ratios"]["mar"] == pytest.approx(100.0 * 1 / chars)

    def test_double_accept_is_409(self, scripted_client):
        client, _ = scripted_client
        view = create_session(client)
        client.post(f"/api/sessions/{view['id']}/accept")
        assert client.post(f"/api/sessions/{view['id']}/accept").status_code == 409

    def test_feedback_after_accept_is_409(self, scripted_client):
        client, _ = scripted_client
        view = create_session(client)
        client.post(f"/api/sessions/{view['id']}/accept")
        resp = client.post(
            f"/api/sessions/{view['id']}/feedback", json={"spans": [[0, 0]]}
        )
        assert resp.status_code == 409

    def test_totals_equal_sum_of_deltas_plus_accept(self, scripted_client):
        client, _ = scripted_client
        view = create_session(client)
        deltas = []
        turns = [
            {"spans": [[0, 0], [4, 6]], "correction": {"after_segment_rank": 0, "word": "was"}},
            {"spans": [[2, 2], [7, 8]], "correction": {"after_segment_rank": 0, "word": "first"}},
        ]
        for turn in turns:
            resp = client.post(f"/api/sessions/{view['id']}/feedback", json=turn)
            assert resp.status_code == 200
            deltas.append(resp.json()["delta"])
        final = client.post(f"/api/sessions/{view['id']}/accept").json()
        for key in ("ws", "ks"):
            assert final["totals"][key] == sum(d[key] for d in deltas)
        assert final["totals"]["ma"] == sum(d["ma"] for d in deltas) + 1

    def test_accepted_session_is_persisted_and_readable(self, scripted_client):
        client, persist = scripted_client
        view = create_session(client)
        client.post(
            f"/api/sessions/{view['id']}/feedback",
            json={
                "spans": [[0, 0], [4, 6]],
                "correction": {"after_segment_rank": 0, "word": "was"},
            },
        )
        client.post(f"/api/sessions/{view['id']}/accept")
        logs = read_session_logs(persist)
        assert len(logs) == 1
        log = logs[0]
        assert log.final_hypothesis.tokens == tuple(SESSION_HYPOTHESES[1].split())
        assert log.reference.tokens == log.final_hypothesis.tokens
        assert log.totals.as_dict() == {"ws": 1, "ks": 3, "ma": 5}
