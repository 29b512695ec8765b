"""Keyword lexicon for prior-reference detection.

The lexicon is a plain JSON document so annotators can edit it: 18
keyword heads with explicit surface variants, the qualifier list that
neutralizes "change", and the word sets / toggles driving the phrase
expansion rules.  The bundled default ships with the package.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from importlib import resources

EXPECTED_HEADS = [
    "change",
    "unchanged",
    "prior",
    "stable",
    "interval",
    "previous",
    "again",
    "increased",
    "improve",
    "remain",
    "worse",
    "persistent",
    "removal",
    "similar",
    "earlier",
    "decreased",
    "recurrence",
    "redemonstrate",
]


@dataclass(frozen=True)
class PhrasePattern:
    rule_id: str
    trigger_head: str
    expansion: str


@dataclass
class LexiconHead:
    head: str
    variants: list[str]
    always_prior: bool


class Lexicon:
    """Immutable after construction; shareable across workers."""

    def __init__(self, payload: dict):
        self.heads: list[LexiconHead] = [
            LexiconHead(head=h["head"], variants=[v.lower() for v in h["variants"]],
                        always_prior=bool(h["always_prior"]))
            for h in payload["heads"]
        ]
        self.change_qualifiers: list[str] = [q.lower() for q in payload.get("change_qualifiers", [])]
        self.qualifier_window: int = int(payload.get("qualifier_window", 2))
        self.phrase_heads: frozenset[str] = frozenset(payload.get("phrase_heads", []))
        self.leading_joiners: frozenset[str] = frozenset(payload.get("leading_joiners", []))
        self.trailing_conjunctions: frozenset[str] = frozenset(payload.get("trailing_conjunctions", []))
        self.copulas: frozenset[str] = frozenset(payload.get("copulas", []))
        self.perfect_auxiliaries: frozenset[str] = frozenset(payload.get("perfect_auxiliaries", []))
        self.degree_adverbs: frozenset[str] = frozenset(payload.get("degree_adverbs", []))
        self.comparative_words: frozenset[str] = frozenset(payload.get("comparative_words", []))
        self.relative_pronouns: frozenset[str] = frozenset(payload.get("relative_pronouns", []))
        self.patterns: dict[str, bool] = dict(payload.get("patterns", {}))
        # variant -> head lookup, lowercase
        self.variant_to_head: dict[str, LexiconHead] = {}
        for h in self.heads:
            for v in h.variants:
                self.variant_to_head[v] = h

    def pattern_enabled(self, name: str) -> bool:
        return bool(self.patterns.get(name, True))

    def head_names(self) -> list[str]:
        return [h.head for h in self.heads]

    def phrase_patterns(self) -> list[PhrasePattern]:
        """Descriptions of the enabled span-expansion rules, for UI/display."""
        out = []
        if self.pattern_enabled("comparative_phrase"):
            for trigger in sorted(self.phrase_heads):
                out.append(PhrasePattern(
                    rule_id="comparative_phrase", trigger_head=trigger,
                    expansion="span runs from the trigger word to the end of the "
                              "phrase (next comma, clause boundary, conjunction, or "
                              "sentence end), trailing blank included"))
        if self.pattern_enabled("change_clause"):
            out.append(PhrasePattern(
                rule_id="change_clause", trigger_head="change",
                expansion="a prior-referring change/changes/changed takes its whole "
                          "containing clause"))
        if self.pattern_enabled("relative_clause"):
            for trigger in sorted(self.relative_pronouns):
                out.append(PhrasePattern(
                    rule_id="relative_clause", trigger_head=trigger,
                    expansion="a relative clause containing a removed token is "
                              "removed whole, leading comma included"))
        if self.pattern_enabled("degree_pair"):
            out.append(PhrasePattern(
                rule_id="degree_pair", trigger_head="slightly",
                expansion="degree adverb + comparative word (e.g. slightly more) is "
                          "removed in sentences that already contain a keyword hit"))
        return out

    def validate(self) -> list[str]:
        """Return a list of invariant violations (empty when valid)."""
        problems = []
        names = self.head_names()
        if names != EXPECTED_HEADS:
            problems.append(
                "lexicon must contain exactly the 18 canonical heads in order; got %r" % (names,)
            )
        for h in self.heads:
            if h.head == "change":
                if h.always_prior:
                    problems.append("head 'change' must have always_prior = false")
            elif not h.always_prior:
                problems.append("head %r must have always_prior = true" % h.head)
            if not h.variants:
                problems.append("head %r has no variants" % h.head)
        return problems


def load_lexicon(path: str) -> Lexicon:
    with open(path, encoding="utf-8") as f:
        return Lexicon(json.load(f))


def default_lexicon() -> Lexicon:
    payload = json.loads(resources.files("priorscrub.data").joinpath("lexicon.json").read_text("utf-8"))
    return Lexicon(payload)
