import json
import threading

import pytest
import requests

from priorscrub.detector import detect
from priorscrub.models import make_report
from priorscrub.review import (
    ACCEPT,
    CorruptSession,
    Decision,
    PENDING,
    REJECT,
    REPLACED,
    ReviewSession,
    color_for_head,
    create_server,
    export_ground_truth,
    span_key,
)
from priorscrub.scrubber import scrub


@pytest.fixture
def session(tmp_path):
    return ReviewSession(str(tmp_path / "session.jsonl"), annotator="tester")


@pytest.fixture
def server(tmp_path, lexicon, corpus_records):
    session = ReviewSession(str(tmp_path / "session.jsonl"), annotator="tester")
    httpd, service = create_server(
        corpus_records, lexicon, session, bind_address="127.0.0.1:0",
        export_path=str(tmp_path / "export.jsonl"),
    )
    thread = threading.Thread(target=httpd.serve_forever, daemon=True)
    thread.start()
    base = "http://%s:%d" % httpd.server_address
    yield base, service, session
    httpd.shutdown()
    httpd.server_close()


class TestReviewSession:
    def test_decisions_persist_across_restart(self, tmp_path):
        path = str(tmp_path / "s.jsonl")
        first = ReviewSession(path)
        first.record("r1", "0:1:2", ACCEPT)
        first.record("r1", "0:3:4", REPLACED, "new text")
        # simulate crash-restart: a fresh object reads the same log
        second = ReviewSession(path)
        assert second.decision_for("r1", "0:1:2").state == ACCEPT
        assert second.decision_for("r1", "0:3:4") == Decision(REPLACED, "new text")

    def test_latest_decision_wins(self, session):
        session.record("r1", "0:1:2", ACCEPT)
        session.record("r1", "0:1:2", REJECT)
        assert session.decision_for("r1", "0:1:2").state == REJECT

    def test_unknown_span_is_pending(self, session):
        assert session.decision_for("r9", "0:0:1").state == PENDING

    def test_corrupt_log_refuses_to_start(self, tmp_path):
        path = tmp_path / "bad.jsonl"
        path.write_text('{"report_id": "r", "span_key": "0:0:1", "decision": "ACCEPT"}\ngarbage\n')
        with pytest.raises(CorruptSession) as err:
            ReviewSession(str(path))
        assert "line 2" in str(err.value)


class TestExport:
    def _spans(self, record, lexicon):
        labeled = detect(make_report(record["id"], record["text"]), lexicon)
        return labeled, [span_key(s) for s in labeled.spans]

    def test_empty_session_is_identity(self, lexicon, corpus_records, session):
        records, pending = export_ground_truth(corpus_records, lexicon, session)
        assert [r["text"] for r in records] == [r["text"] for r in corpus_records]
        assert pending > 0

    def test_all_reject_is_identity(self, lexicon, corpus_records, session):
        for record in corpus_records:
            _, keys = self._spans(record, lexicon)
            for key in keys:
                session.record(record["id"], key, REJECT)
        records, pending = export_ground_truth(corpus_records, lexicon, session)
        assert pending == 0
        assert [r["text"] for r in records] == [r["text"] for r in corpus_records]

    def test_all_accept_equals_scrub(self, lexicon, corpus_records, session):
        for record in corpus_records:
            _, keys = self._spans(record, lexicon)
            for key in keys:
                session.record(record["id"], key, ACCEPT)
        records, pending = export_ground_truth(corpus_records, lexicon, session)
        assert pending == 0
        for record, original in zip(records, corpus_records):
            expected = scrub(detect(make_report(original["id"], original["text"]), lexicon))
            assert record["text"] == expected.text, original["id"]

    def test_replacement_substitutes_text(self, lexicon, session):
        corpus = [{"id": "r1", "text": "Heart size is stable."}]
        labeled, keys = self._spans(corpus[0], lexicon)
        assert len(keys) == 1
        session.record("r1", keys[0], REPLACED, "heart size is abnormal")
        records, _ = export_ground_truth(corpus, lexicon, session)
        assert "abnormal" in records[0]["text"]
        assert "stable" not in records[0]["text"]

    def test_export_determinism(self, lexicon, corpus_records, tmp_path):
        paths = [str(tmp_path / f"s{i}.jsonl") for i in (1, 2)]
        outputs = []
        for path in paths:
            session = ReviewSession(path)
            for record in corpus_records:
                _, keys = self._spans(record, lexicon)
                for i, key in enumerate(keys):
                    session.record(record["id"], key, ACCEPT if i % 2 == 0 else REJECT)
            records, _ = export_ground_truth(corpus_records, lexicon, session)
            outputs.append(json.dumps(records))
        assert outputs[0] == outputs[1]


class TestColors:
    def test_stable_assignment(self, lexicon):
        heads = lexicon.head_names()
        assert color_for_head("change", heads) == color_for_head("change", heads)
        assert color_for_head("change", heads) != color_for_head("prior", heads)


class TestHttpApi:
    def test_corpus_listing(self, server, corpus_records):
        base, _, _ = server
        payload = requests.get(base + "/api/v1/corpus").json()
        assert [r["id"] for r in payload] == [r["id"] for r in corpus_records]
        by_id = {r["id"]: r for r in payload}
        assert by_id["r002"]["span_count"] >= 1
        assert by_id["r013"]["span_count"] == 0

    def test_report_payload_has_colored_spans(self, server):
        base, _, _ = server
        payload = requests.get(base + "/api/v1/reports/r003").json()
        assert payload["id"] == "r003"
        assert payload["spans"], "expected detected spans"
        for span in payload["spans"]:
            assert span["color"].startswith("#")
            assert span["decision"]["state"] == PENDING
            assert span["keyword"]

    def test_unknown_report_404(self, server):
        base, _, _ = server
        assert requests.get(base + "/api/v1/reports/nope").status_code == 404

    def test_decision_roundtrip_and_idempotence(self, server):
        base, _, session = server
        payload = requests.get(base + "/api/v1/reports/r003").json()
        key = payload["spans"][0]["key"]
        url = base + f"/api/v1/reports/r003/spans/{key}/decision"
        for _ in range(2):  # repeating the POST leaves state unchanged
            response = requests.post(url, json={"decision": "accept"})
            assert response.status_code == 204
        assert session.decision_for("r003", key).state == ACCEPT
        refreshed = requests.get(base + "/api/v1/reports/r003").json()
        by_key = {s["key"]: s for s in refreshed["spans"]}
        assert by_key[key]["decision"]["state"] == ACCEPT

    def test_decision_survives_restart(self, server, tmp_path):
        base, _, session = server
        payload = requests.get(base + "/api/v1/reports/r004").json()
        key = payload["spans"][0]["key"]
        requests.post(base + f"/api/v1/reports/r004/spans/{key}/decision",
                      json={"decision": "replace", "replacement": "effusions noted"})
        reloaded = ReviewSession(session.path)
        assert reloaded.decision_for("r004", key) == Decision(REPLACED, "effusions noted")

    def test_unknown_span_404(self, server):
        base, _, _ = server
        response = requests.post(
            base + "/api/v1/reports/r003/spans/9:9:9/decision", json={"decision": "accept"}
        )
        assert response.status_code == 404

    def test_invalid_decision_400(self, server):
        base, _, _ = server
        payload = requests.get(base + "/api/v1/reports/r003").json()
        key = payload["spans"][0]["key"]
        response = requests.post(
            base + f"/api/v1/reports/r003/spans/{key}/decision", json={"decision": "replace"}
        )
        assert response.status_code == 400

    def test_export_endpoint(self, server, corpus_records, lexicon, tmp_path):
        base, service, _ = server
        payload = requests.post(base + "/api/v1/export").json()
        assert payload["pending_spans"] > 0
        lines = [json.loads(l) for l in payload["content"].splitlines()]
        assert [r["id"] for r in lines] == [r["id"] for r in corpus_records]
        # written file matches the response content byte for byte
        assert open(payload["path"], encoding="utf-8").read() == payload["content"]

    def test_stats_endpoint(self, server):
        base, _, _ = server
        payload = requests.get(base + "/api/v1/stats").json()
        assert payload["reports_read"] == 20
        keywords = {r["keyword"] for r in payload["rows"]}
        assert "change" in keywords and len(keywords) == 18
