"""Apply KEEP/REMOVE labels and clean up the surface text.

Dropping tokens from prose leaves artifacts (dangling commas, doubled
punctuation, lowercase sentence starts); the cleanup passes here keep
the output readable without attempting grammar repair.  Verbless
fragments are left alone on purpose.
"""

from __future__ import annotations

import json
import logging
from dataclasses import dataclass, field
from importlib import resources
from typing import IO, Iterable

from priorscrub.detector import detect
from priorscrub.lexicon import Lexicon
from priorscrub.models import Label, LabeledReport, Report, Token, TokenKind, make_report

logger = logging.getLogger(__name__)

_CLAUSE_PUNCT = {",", ";", ":"}
_TERMINAL_PUNCT = {".", "!", "?"}
_NO_SPACE_BEFORE = set(".,;:!?)]}'")
_NO_SPACE_AFTER = set("([{")

_STOPWORDS: frozenset[str] | None = None


def stopwords() -> frozenset[str]:
    """The bundled stop-word list used to drop contentless sentences."""
    global _STOPWORDS
    if _STOPWORDS is None:
        text = resources.files("priorscrub.data").joinpath("stopwords.txt").read_text("utf-8")
        _STOPWORDS = frozenset(
            line.strip().lower()
            for line in text.splitlines()
            if line.strip() and not line.startswith("#")
        )
    return _STOPWORDS


@dataclass
class ScrubStats:
    reports_in: int = 0
    reports_out: int = 0
    tokens_removed: int = 0
    sentences_dropped: int = 0
    lines_skipped: int = 0

    def as_dict(self) -> dict:
        return {
            "reports_in": self.reports_in,
            "reports_out": self.reports_out,
            "tokens_removed": self.tokens_removed,
            "sentences_dropped": self.sentences_dropped,
            "lines_skipped": self.lines_skipped,
        }


def _join_token_texts(texts: list[str]) -> str:
    parts: list[str] = []
    for text in texts:
        if parts and (text[0] in _NO_SPACE_BEFORE or parts[-1][-1] in _NO_SPACE_AFTER):
            parts[-1] += text
        else:
            parts.append(text)
    return " ".join(parts)


def cleanup_sentence(kept: list[Token]) -> str | None:
    """Rebuild a sentence from surviving tokens; None drops the sentence."""
    toks = list(kept)

    # strip leading clause punctuation left behind by a removed opener
    while toks and toks[0].kind is TokenKind.PUNCT and toks[0].text in _CLAUSE_PUNCT:
        toks.pop(0)

    # collapse punctuation that became adjacent: ", ." -> "." and ", ," -> ","
    collapsed: list[Token] = []
    for tok in toks:
        if collapsed and collapsed[-1].kind is TokenKind.PUNCT and tok.kind is TokenKind.PUNCT:
            if collapsed[-1].text in _CLAUSE_PUNCT:
                collapsed[-1] = tok
                continue
            if tok.text == collapsed[-1].text:
                continue
        collapsed.append(tok)
    toks = collapsed

    words = [t for t in toks if t.kind in (TokenKind.WORD, TokenKind.NUMBER)]
    if not words:
        return None
    if all(t.text.lower() in stopwords() for t in words):
        return None

    # a dangling comma at the end gives way to the terminator
    while toks and toks[-1].kind is TokenKind.PUNCT and toks[-1].text in _CLAUSE_PUNCT:
        toks.pop()

    text = _join_token_texts([t.text for t in toks])
    for i, c in enumerate(text):
        if c.isalpha():
            text = text[:i] + c.upper() + text[i + 1:]
            break
    if text[-1] not in _TERMINAL_PUNCT:
        text += "."
    return text


def _scrub_texts(labeled: LabeledReport) -> tuple[list[str], int, int]:
    removed = 0
    dropped = 0
    sentence_texts: list[str] = []
    for sentence in labeled.report.sentences:
        sent_labels = labeled.labels[sentence.index]
        kept = [t for t, l in zip(sentence.tokens, sent_labels) if l is Label.KEEP]
        removed += len(sentence.tokens) - len(kept)
        text = cleanup_sentence(kept)
        if text is None:
            dropped += 1
        else:
            sentence_texts.append(text)
    return sentence_texts, removed, dropped


def scrub(labeled: LabeledReport) -> Report:
    """Drop REMOVE tokens and return the cleaned report.

    Sentences left without content words (or with stop-words only) are
    dropped entirely; fully scrubbed reports come back with empty text.
    """
    texts, _, _ = _scrub_texts(labeled)
    return make_report(labeled.report.id, " ".join(texts))


def scrub_corpus(input_stream: IO[str], lexicon: Lexicon, output_stream: IO[str]) -> ScrubStats:
    """Stream detect+scrub over line-delimited ``{"id","text"}`` records.

    Unparseable lines are logged with their line number and skipped;
    reports that scrub to nothing are still emitted with empty text so
    downstream id pairing survives.
    """
    stats = ScrubStats()
    for line_no, line in enumerate(input_stream, start=1):
        if not line.strip():
            continue
        try:
            record = json.loads(line)
            report_id = record["id"]
            text = record["text"]
        except (json.JSONDecodeError, KeyError, TypeError) as exc:
            logger.warning("skipping line %d: %s", line_no, exc)
            stats.lines_skipped += 1
            continue
        stats.reports_in += 1
        labeled = detect(make_report(report_id, text), lexicon)
        texts, removed, dropped = _scrub_texts(labeled)
        stats.tokens_removed += removed
        stats.sentences_dropped += dropped
        output_stream.write(json.dumps({"id": report_id, "text": " ".join(texts)}) + "\n")
        stats.reports_out += 1
    return stats
