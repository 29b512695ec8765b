"""Span-review workflow: a persistent decision log and the HTTP service
behind the annotation UI.

Annotators accept, reject, or replace each detected span; decisions are
appended to a line-delimited log before the request is acknowledged, so
a crash never loses acknowledged work.  Export applies the decisions
and produces a ground-truth corpus.
"""

from __future__ import annotations

import json
import os
import threading
import time
from dataclasses import dataclass
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer
from pathlib import Path
from urllib.parse import unquote

from priorscrub.detector import detect
from priorscrub.lexicon import Lexicon
from priorscrub.models import LabeledReport, Span, Token, TokenKind, make_report, tokenize
from priorscrub.scrubber import cleanup_sentence, _join_token_texts
from priorscrub import stats as corpus_stats

PENDING = "PENDING"
ACCEPT = "ACCEPT"
REJECT = "REJECT"
REPLACED = "REPLACED"

# one color per lexicon head, stable across sessions
_PALETTE = [
    "#e6194b", "#3cb44b", "#ffe119", "#4363d8", "#f58231", "#911eb4",
    "#46f0f0", "#f032e6", "#bcf60c", "#fabebe", "#008080", "#e6beff",
    "#9a6324", "#fffac8", "#800000", "#aaffc3", "#808000", "#ffd8b1",
]


def color_for_head(head: str, heads: list[str]) -> str:
    try:
        return _PALETTE[heads.index(head) % len(_PALETTE)]
    except ValueError:
        return "#cccccc"


class CorruptSession(RuntimeError):
    pass


class BindError(OSError):
    pass


def span_key(span: Span) -> str:
    return "%d:%d:%d" % (span.sentence_index, span.token_start, span.token_end)


@dataclass
class Decision:
    state: str
    replacement: str | None = None

    def as_dict(self) -> dict:
        return {"state": self.state, "replacement": self.replacement}


class ReviewSession:
    """Append-only decision log; the latest entry per span wins."""

    def __init__(self, path: str, annotator: str = "annotator"):
        self.path = path
        self.annotator = annotator
        self.decisions: dict[tuple[str, str], Decision] = {}
        self._lock = threading.Lock()
        self._load()

    def _load(self) -> None:
        if not os.path.exists(self.path):
            return
        with open(self.path, encoding="utf-8") as f:
            for line_no, line in enumerate(f, start=1):
                if not line.strip():
                    continue
                try:
                    entry = json.loads(line)
                    key = (entry["report_id"], entry["span_key"])
                    state = entry["decision"]
                    if state not in (ACCEPT, REJECT, REPLACED):
                        raise ValueError("unknown decision %r" % state)
                    self.decisions[key] = Decision(state, entry.get("replacement"))
                except (json.JSONDecodeError, KeyError, ValueError) as exc:
                    raise CorruptSession(
                        "session log %s is corrupt at line %d (%s); "
                        "remove or repair that line and restart" % (self.path, line_no, exc)
                    ) from exc

    def record(self, report_id: str, key: str, state: str, replacement: str | None = None) -> None:
        entry = {
            "ts": time.strftime("%Y-%m-%dT%H:%M:%S"),
            "annotator": self.annotator,
            "report_id": report_id,
            "span_key": key,
            "decision": state,
            "replacement": replacement,
        }
        # append and flush to disk before the in-memory state changes, so
        # an acknowledged decision is always durable
        with self._lock:
            with open(self.path, "a", encoding="utf-8") as f:
                f.write(json.dumps(entry) + "\n")
                f.flush()
                os.fsync(f.fileno())
            self.decisions[(report_id, key)] = Decision(state, replacement)

    def decision_for(self, report_id: str, key: str) -> Decision:
        return self.decisions.get((report_id, key), Decision(PENDING))


def _apply_decisions_sentence(
    tokens: list[Token],
    spans: list[tuple[Span, Decision]],
) -> tuple[str | None, bool]:
    """Resolve one sentence's spans; returns (text, modified)."""
    drop: set[int] = set()
    replacements: dict[int, str] = {}  # span start token -> replacement text
    modified = False
    for span, decision in spans:
        if decision.state == ACCEPT:
            drop.update(range(span.token_start, span.token_end))
            modified = True
        elif decision.state == REPLACED:
            drop.update(range(span.token_start, span.token_end))
            replacements[span.token_start] = decision.replacement or ""
            modified = True
    if not modified:
        return None, False
    pieces: list[str] = []
    for i, tok in enumerate(tokens):
        if i in replacements and replacements[i]:
            pieces.append(replacements[i])
        if i not in drop:
            pieces.append(tok.text)
    rebuilt = _join_token_texts(pieces) if pieces else ""
    return cleanup_sentence(tokenize(rebuilt)), True


def export_ground_truth(
    records: list[dict],
    lexicon: Lexicon,
    session: ReviewSession,
    labeled_cache: dict[str, LabeledReport] | None = None,
) -> tuple[list[dict], int]:
    """Apply session decisions to the corpus.

    ACCEPT removes the span, REJECT keeps it, REPLACED substitutes the
    typed text (re-tokenized).  Pending spans are kept and counted in
    the returned summary.
    """
    pending = 0
    out = []
    for record in records:
        labeled = (labeled_cache or {}).get(record["id"]) or detect(
            make_report(record["id"], record["text"]), lexicon
        )
        by_sentence: dict[int, list[tuple[Span, Decision]]] = {}
        for span in labeled.spans:
            decision = session.decision_for(record["id"], span_key(span))
            if decision.state == PENDING:
                pending += 1
            by_sentence.setdefault(span.sentence_index, []).append((span, decision))
        texts: list[str] = []
        for sentence in labeled.report.sentences:
            spans = by_sentence.get(sentence.index, [])
            text, modified = _apply_decisions_sentence(sentence.tokens, spans)
            if not modified:
                texts.append(sentence.text)
            elif text is not None:
                texts.append(text)
        out.append({"id": record["id"], "text": " ".join(texts)})
    return out, pending


# ---------------------------------------------------------------------------
# HTTP service
# ---------------------------------------------------------------------------

_CONTENT_TYPES = {
    ".html": "text/html; charset=utf-8",
    ".js": "text/javascript; charset=utf-8",
    ".css": "text/css; charset=utf-8",
    ".json": "application/json",
    ".png": "image/png",
    ".svg": "image/svg+xml",
    ".ico": "image/x-icon",
    ".map": "application/json",
}


class ReviewService:
    """Shared state behind the request handler; read-only over the
    corpus, all mutation goes through the session log."""

    def __init__(
        self,
        records: list[dict],
        lexicon: Lexicon,
        session: ReviewSession,
        static_dir: str | None = None,
        export_path: str | None = None,
    ):
        self.records = records
        self.by_id = {r["id"]: r for r in records}
        self.lexicon = lexicon
        self.session = session
        self.static_dir = static_dir
        self.export_path = export_path
        self._cache: dict[str, LabeledReport] = {}
        self._cache_lock = threading.Lock()

    def labeled(self, report_id: str) -> LabeledReport:
        with self._cache_lock:
            if report_id not in self._cache:
                record = self.by_id[report_id]
                self._cache[report_id] = detect(
                    make_report(record["id"], record["text"]), self.lexicon
                )
            return self._cache[report_id]

    def corpus_summary(self) -> list[dict]:
        out = []
        for record in self.records:
            labeled = self.labeled(record["id"])
            pending = sum(
                1
                for s in labeled.spans
                if self.session.decision_for(record["id"], span_key(s)).state == PENDING
            )
            out.append(
                {
                    "id": record["id"],
                    "span_count": len(labeled.spans),
                    "pending_count": pending,
                    "decided_count": len(labeled.spans) - pending,
                }
            )
        return out

    def report_payload(self, report_id: str) -> dict:
        labeled = self.labeled(report_id)
        heads = self.lexicon.head_names()
        spans = []
        for span in labeled.spans:
            key = span_key(span)
            spans.append(
                {
                    "key": key,
                    "sentence": span.sentence_index,
                    "start": span.token_start,
                    "end": span.token_end,
                    "keyword": span.keyword,
                    "rule_id": span.rule_id,
                    "color": color_for_head(span.keyword, heads),
                    "decision": self.session.decision_for(report_id, key).as_dict(),
                }
            )
        return {
            "id": report_id,
            "sentences": [
                {
                    "index": s.index,
                    "text": s.text,
                    "tokens": [
                        {
                            "text": t.text,
                            "kind": t.kind.value,
                            "char_start": t.char_start,
                            "char_end": t.char_end,
                        }
                        for t in s.tokens
                    ],
                }
                for s in labeled.report.sentences
            ],
            "spans": spans,
        }

    def decide(self, report_id: str, key: str, decision: str, replacement: str | None) -> None:
        labeled = self.labeled(report_id)
        if key not in {span_key(s) for s in labeled.spans}:
            raise KeyError(key)
        state = {"accept": ACCEPT, "reject": REJECT, "replace": REPLACED}[decision]
        if state == REPLACED and replacement is None:
            raise ValueError("replace requires a replacement string")
        self.session.record(report_id, key, state, replacement)

    def export(self) -> dict:
        for record in self.records:
            self.labeled(record["id"])  # warm cache so export sees every span
        records, pending = export_ground_truth(
            self.records, self.lexicon, self.session, labeled_cache=self._cache
        )
        content = "".join(json.dumps(r) + "\n" for r in records)
        payload = {"pending_spans": pending, "content": content}
        if self.export_path:
            with open(self.export_path, "w", encoding="utf-8") as f:
                f.write(content)
            payload["path"] = self.export_path
        return payload

    def stats_payload(self) -> dict:
        return corpus_stats.keyword_counts(self.records, self.lexicon)


def _make_handler(service: ReviewService):
    class Handler(BaseHTTPRequestHandler):
        def log_message(self, fmt, *args):  # quiet by default
            pass

        def _send_json(self, payload, status: int = 200) -> None:
            body = json.dumps(payload).encode("utf-8")
            self.send_response(status)
            self.send_header("Content-Type", "application/json")
            self.send_header("Content-Length", str(len(body)))
            self.end_headers()
            self.wfile.write(body)

        def _send_error_json(self, status: int, message: str) -> None:
            self._send_json({"error": message}, status=status)

        def _read_body(self) -> dict:
            length = int(self.headers.get("Content-Length") or 0)
            if not length:
                return {}
            return json.loads(self.rfile.read(length).decode("utf-8"))

        def do_GET(self):
            parts = [unquote(p) for p in self.path.split("?")[0].split("/") if p]
            if parts[:2] == ["api", "v1"]:
                rest = parts[2:]
                if rest == ["corpus"]:
                    return self._send_json(service.corpus_summary())
                if rest == ["stats"]:
                    return self._send_json(service.stats_payload())
                if len(rest) == 2 and rest[0] == "reports":
                    if rest[1] not in service.by_id:
                        return self._send_error_json(404, "unknown report %r" % rest[1])
                    return self._send_json(service.report_payload(rest[1]))
                return self._send_error_json(404, "unknown endpoint")
            return self._serve_static(parts)

        def do_POST(self):
            parts = [unquote(p) for p in self.path.split("?")[0].split("/") if p]
            if parts[:2] != ["api", "v1"]:
                return self._send_error_json(404, "unknown endpoint")
            rest = parts[2:]
            if rest == ["export"]:
                return self._send_json(service.export())
            if len(rest) == 5 and rest[0] == "reports" and rest[2] == "spans" and rest[4] == "decision":
                report_id, key = rest[1], rest[3]
                if report_id not in service.by_id:
                    return self._send_error_json(404, "unknown report %r" % report_id)
                try:
                    body = self._read_body()
                    service.decide(report_id, key, body["decision"], body.get("replacement"))
                except KeyError as exc:
                    return self._send_error_json(404, "unknown span or field: %s" % exc)
                except (ValueError, json.JSONDecodeError) as exc:
                    return self._send_error_json(400, str(exc))
                self.send_response(204)
                self.end_headers()
                return
            return self._send_error_json(404, "unknown endpoint")

        def _serve_static(self, parts: list[str]):
            if not service.static_dir:
                return self._send_error_json(404, "no static dir configured")
            root = Path(service.static_dir).resolve()
            target = (root / ("/".join(parts) if parts else "index.html")).resolve()
            if root not in target.parents and target != root:
                return self._send_error_json(403, "forbidden")
            if target.is_dir():
                target = target / "index.html"
            if not target.is_file():
                return self._send_error_json(404, "not found")
            body = target.read_bytes()
            self.send_response(200)
            self.send_header("Content-Type", _CONTENT_TYPES.get(target.suffix, "application/octet-stream"))
            self.send_header("Content-Length", str(len(body)))
            self.end_headers()
            self.wfile.write(body)

    return Handler


def create_server(
    records: list[dict],
    lexicon: Lexicon,
    session: ReviewSession,
    bind_address: str = "127.0.0.1:8077",
    static_dir: str | None = None,
    export_path: str | None = None,
) -> tuple[ThreadingHTTPServer, ReviewService]:
    service = ReviewService(records, lexicon, session, static_dir=static_dir, export_path=export_path)
    host, _, port = bind_address.rpartition(":")
    try:
        httpd = ThreadingHTTPServer((host or "127.0.0.1", int(port)), _make_handler(service))
    except OSError as exc:
        raise BindError("cannot bind %s: %s" % (bind_address, exc)) from exc
    return httpd, service


def serve(
    records: list[dict],
    lexicon: Lexicon,
    session_path: str,
    bind_address: str,
    static_dir: str | None = None,
    export_path: str | None = None,
    annotator: str = "annotator",
) -> None:
    session = ReviewSession(session_path, annotator=annotator)
    httpd, _ = create_server(
        records, lexicon, session, bind_address, static_dir=static_dir, export_path=export_path
    )
    print("review service listening on http://%s:%d" % httpd.server_address)
    try:
        httpd.serve_forever()
    except KeyboardInterrupt:
        pass
    finally:
        httpd.server_close()
