"""Core report data types and deterministic segmentation.

A report is segmented into sentences, each sentence into tokens, and
word tokens optionally into subword units.  All segmentation is
rule-based and deterministic so results are reproducible across runs
and machines.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from enum import Enum
from importlib import resources
from typing import NamedTuple


class TokenKind(str, Enum):
    WORD = "WORD"
    NUMBER = "NUMBER"
    PUNCT = "PUNCT"
    BLANK = "BLANK"  # the de-identification placeholder ___


class Label(str, Enum):
    KEEP = "KEEP"
    REMOVE = "REMOVE"


class Token(NamedTuple):
    text: str
    char_start: int
    char_end: int
    kind: TokenKind


@dataclass
class Sentence:
    index: int
    text: str
    tokens: list[Token]


@dataclass
class Report:
    id: str
    text: str
    sentences: list[Sentence]

    def all_tokens(self) -> list[Token]:
        return [t for s in self.sentences for t in s.tokens]


@dataclass(frozen=True)
class Span:
    """A contiguous run of REMOVE tokens within one sentence.

    ``keyword`` is the lexicon head the span is attributed to;
    ``rule_id`` names the detection rule that produced it.
    """

    sentence_index: int
    token_start: int
    token_end: int  # half-open
    keyword: str
    rule_id: str


@dataclass
class LabeledReport:
    report: Report
    labels: list[list[Label]]  # one list per sentence, one label per token
    spans: list[Span]

    def sentence_labels(self, index: int) -> list[Label]:
        return self.labels[index]


# ---------------------------------------------------------------------------
# Sentence segmentation
# ---------------------------------------------------------------------------

def _load_data_lines(name: str) -> list[str]:
    text = resources.files("priorscrub.data").joinpath(name).read_text("utf-8")
    return [line.strip() for line in text.splitlines() if line.strip() and not line.startswith("#")]


_ABBREVIATIONS: list[str] | None = None


def _abbreviations() -> list[str]:
    global _ABBREVIATIONS
    if _ABBREVIATIONS is None:
        _ABBREVIATIONS = _load_data_lines("abbreviations.txt")
    return _ABBREVIATIONS


def _protected_dot_positions(text: str) -> set[int]:
    """Character offsets of '.' that never terminate a sentence."""
    protected: set[int] = set()
    # decimal numbers: the dot in 3.5 etc.
    for m in re.finditer(r"\d\.\d", text):
        protected.add(m.start() + 1)
    abbrevs = _abbreviations()
    pattern = "|".join(re.escape(a) for a in abbrevs)
    for m in re.finditer(r"(?<![A-Za-z])(?:%s)" % pattern, text, re.IGNORECASE):
        for i in range(m.start(), m.end()):
            if text[i] == ".":
                protected.add(i)
    return protected


_BOUNDARY_RE = re.compile(r"[.!?]|\n[ \t]*\n")


def segment_sentences(text: str) -> list[Sentence]:
    """Split text into sentences at ., !, ? and blank lines.

    Terminators stay attached to their sentence.  Dots inside known
    abbreviations and decimal numbers do not split.  Empty or
    whitespace-only input yields an empty list.
    """
    if not text.strip():
        return []
    protected = _protected_dot_positions(text)
    pieces: list[str] = []
    start = 0
    for m in _BOUNDARY_RE.finditer(text):
        if m.group(0).startswith("\n"):
            piece = text[start:m.start()]
            if piece.strip():
                pieces.append(piece)
            start = m.end()
            continue
        if m.start() in protected:
            continue
        piece = text[start:m.end()]
        if piece.strip():
            pieces.append(piece)
        start = m.end()
    tail = text[start:]
    if tail.strip():
        pieces.append(tail)
    sentences = []
    for i, piece in enumerate(pieces):
        stripped = piece.strip()
        sentences.append(Sentence(index=i, text=stripped, tokens=tokenize(stripped)))
    return sentences


# ---------------------------------------------------------------------------
# Tokenization
# ---------------------------------------------------------------------------

# Order matters: blanks first, then dotted abbreviations (kept whole so
# scrub output re-segments identically), then decimal numbers, then words
# with internal hyphens/apostrophes, then any single non-space character.
_TOKEN_RE: re.Pattern | None = None


def _token_re() -> re.Pattern:
    global _TOKEN_RE
    if _TOKEN_RE is None:
        abbrev = "|".join(re.escape(a) for a in _abbreviations())
        _TOKEN_RE = re.compile(
            r"_{3,}"
            r"|(?<![A-Za-z])(?:%s)" % abbrev
            + r"|\d+\.\d+"
            r"|[A-Za-z0-9]+(?:[-'’][A-Za-z0-9]+)*"
            r"|\S",
            re.IGNORECASE,
        )
    return _TOKEN_RE


_NUMBER_RE = re.compile(r"\d+(?:\.\d+)?")


def _classify(text: str) -> TokenKind:
    c0 = text[0]
    if c0 == "_":
        return TokenKind.BLANK
    if c0.isalpha():
        return TokenKind.WORD
    if c0.isdigit():
        return TokenKind.NUMBER if _NUMBER_RE.fullmatch(text) else TokenKind.WORD
    return TokenKind.WORD if any(c.isalnum() for c in text) else TokenKind.PUNCT


def tokenize(sentence_text: str) -> list[Token]:
    """Whitespace/punctuation tokenization of one sentence.

    Punctuation becomes separate PUNCT tokens except intra-word hyphens
    and apostrophes; runs of 3+ underscores collapse to one BLANK token.
    """
    return [
        Token(m.group(0), m.start(), m.end(), _classify(m.group(0)))
        for m in _token_re().finditer(sentence_text)
    ]


def make_report(report_id: str, text: str) -> Report:
    return Report(id=report_id, text=text, sentences=segment_sentences(text))


# ---------------------------------------------------------------------------
# Subword segmentation with label propagation
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SubwordUnit:
    text: str
    continuation: bool
    parent_token_index: int


@dataclass
class SubwordSequence:
    units: list[SubwordUnit]
    labels: list[Label]


class SubwordVocab:
    """Subword vocabulary: one unit per line, continuations prefixed ##.

    Matching is case-insensitive; emitted unit texts preserve the
    original casing of the parent token.
    """

    CONTINUATION_MARKER = "##"

    def __init__(self, units: list[str]):
        self.initial: set[str] = set()
        self.continuation: set[str] = set()
        for u in units:
            if u.startswith(self.CONTINUATION_MARKER):
                self.continuation.add(u[len(self.CONTINUATION_MARKER):].lower())
            else:
                self.initial.add(u.lower())

    @classmethod
    def from_file(cls, path: str) -> "SubwordVocab":
        with open(path, encoding="utf-8") as f:
            units = [line.rstrip("\n") for line in f if line.strip()]
        return cls(units)

    def segment(self, word: str) -> list[tuple[str, bool]]:
        """Greedy longest-match-first split; single chars as fallback."""
        lower = word.lower()
        out: list[tuple[str, bool]] = []
        start = 0
        while start < len(word):
            table = self.initial if start == 0 else self.continuation
            end = len(word)
            while end > start + 1 and lower[start:end] not in table:
                end -= 1
            # At end == start + 1 the single character is taken whether or
            # not it is in the vocab, which guarantees totality.
            out.append((word[start:end], start > 0))
            start = end
        return out


def subword_split(labeled: LabeledReport, vocab: SubwordVocab) -> SubwordSequence:
    """Split WORD tokens into subword units; each unit inherits its
    parent token's label.  Non-WORD tokens pass through as single units."""
    units: list[SubwordUnit] = []
    labels: list[Label] = []
    flat_index = 0
    for s_idx, sentence in enumerate(labeled.report.sentences):
        sent_labels = labeled.labels[s_idx]
        for t_idx, token in enumerate(sentence.tokens):
            label = sent_labels[t_idx]
            if token.kind is TokenKind.WORD:
                parts = vocab.segment(token.text)
            else:
                parts = [(token.text, False)]
            for text, cont in parts:
                units.append(SubwordUnit(text=text, continuation=cont, parent_token_index=flat_index))
                labels.append(label)
            flat_index += 1
    return SubwordSequence(units=units, labels=labels)
