"""Rule-based detection of prior-reference tokens.

``detect`` labels every token KEEP or REMOVE and groups REMOVE tokens
into spans.  The rules are deliberately small and surface-level:

* keyword variants are matched per token, with the qualifier window
  that keeps "emphysematous changes" and friends
* a handful of span-expansion rules grow keyword hits into the full
  comparative phrase (phrase triggers, relative clauses, whole-clause
  removal for "change", copula/auxiliary/joiner absorption)

``flag_sentences`` exposes the sentence-level flagging contract used by
the rewrite pathway; the rule engine scores 0/1 but the contract admits
any scorer producing a probability.
"""

from __future__ import annotations

from dataclasses import dataclass

from priorscrub.lexicon import Lexicon
from priorscrub.models import Label, LabeledReport, Report, Sentence, Span, TokenKind

_CLAUSE_PUNCT = {",", ";", ":"}
_TERMINAL_PUNCT = {".", "!", "?"}
_BOUNDARY_PUNCT = _CLAUSE_PUNCT | _TERMINAL_PUNCT


class LexiconInvalid(ValueError):
    pass


@dataclass(frozen=True)
class SentenceFlag:
    sentence_index: int
    flagged: bool
    score: float


@dataclass
class _WorkSpan:
    start: int
    end: int  # half-open
    head: str
    rule_id: str
    has_keyword: bool


def _is_boundary(sentence: Sentence, i: int) -> bool:
    t = sentence.tokens[i]
    return t.kind is TokenKind.PUNCT and t.text in _BOUNDARY_PUNCT


def _clause_bounds(sentence: Sentence, i: int) -> tuple[int, int]:
    """Token range of the clause containing token i (boundaries excluded)."""
    lo = i
    while lo > 0 and not _is_boundary(sentence, lo - 1):
        lo -= 1
    hi = i + 1
    n = len(sentence.tokens)
    while hi < n and not _is_boundary(sentence, hi):
        hi += 1
    return lo, hi


def keyword_hits(sentence: Sentence, lower: list[str], lexicon: Lexicon) -> dict[int, str]:
    """index -> head name for every prior-referring keyword token."""
    hits: dict[int, str] = {}
    for i, tok in enumerate(sentence.tokens):
        if tok.kind is not TokenKind.WORD:
            continue
        head = lexicon.variant_to_head.get(lower[i])
        if head is None:
            continue
        if head.always_prior:
            hits[i] = head.head
            continue
        # the "change" rule: a qualifier among the preceding WORD tokens
        # marks a qualitative finding, not a prior reference
        seen = 0
        qualified = False
        j = i - 1
        while j >= 0 and seen < lexicon.qualifier_window:
            if sentence.tokens[j].kind is TokenKind.WORD:
                seen += 1
                if lower[j] in lexicon.change_qualifiers:
                    qualified = True
                    break
            j -= 1
        if not qualified:
            hits[i] = head.head
    return hits


def _forward_phrase_end(sentence: Sentence, lower: list[str], start: int, lexicon: Lexicon) -> int:
    """Extend to the end of the phrase: stop at clause punctuation,
    sentence end, or a coordinating conjunction."""
    n = len(sentence.tokens)
    k = start + 1
    while k < n:
        if _is_boundary(sentence, k) or lower[k] in lexicon.trailing_conjunctions:
            break
        k += 1
    return k


def _merge(spans: list[_WorkSpan]) -> list[_WorkSpan]:
    if not spans:
        return []
    spans = sorted(spans, key=lambda s: (s.start, -s.end))
    merged = [spans[0]]
    for s in spans[1:]:
        last = merged[-1]
        if s.start <= last.end:  # overlapping or adjacent
            last.end = max(last.end, s.end)
            last.has_keyword = last.has_keyword or s.has_keyword
            if last.head == "" and s.head:
                last.head = s.head
        else:
            merged.append(s)
    return merged


def _nearest_head(hits: dict[int, str], position: int) -> str:
    best = min(hits.keys(), key=lambda i: (abs(i - position), i))
    return hits[best]


def _detect_sentence(sentence: Sentence, lexicon: Lexicon) -> list[_WorkSpan]:
    tokens = sentence.tokens
    n = len(tokens)
    lower = [t.text.lower() for t in tokens]

    hits = keyword_hits(sentence, lower, lexicon)
    spans = [_WorkSpan(i, i + 1, head, "bare_keyword", True) for i, head in sorted(hits.items())]

    # degree adverb + comparative word, only in sentences with a keyword hit
    if hits and lexicon.pattern_enabled("degree_pair"):
        for i in range(n - 1):
            if (
                lower[i] in lexicon.degree_adverbs
                and lower[i + 1] in lexicon.comparative_words
                and tokens[i].kind is TokenKind.WORD
                and tokens[i + 1].kind is TokenKind.WORD
            ):
                spans.append(_WorkSpan(i, i + 2, _nearest_head(hits, i), "degree_pair", False))

    # comparative phrase trigger to the left of a keyword, same clause
    if lexicon.pattern_enabled("comparative_phrase"):
        for i in sorted(hits):
            lo, _ = _clause_bounds(sentence, i)
            for j in range(i - 1, lo - 1, -1):
                if lower[j] in lexicon.phrase_heads and tokens[j].kind is TokenKind.WORD:
                    end = _forward_phrase_end(sentence, lower, i, lexicon)
                    spans.append(_WorkSpan(j, end, hits[i], "comparative_phrase", True))
                    break

    # a prior-referring "change" takes its whole clause
    if lexicon.pattern_enabled("change_clause"):
        for i in sorted(hits):
            if hits[i] == "change":
                lo, hi = _clause_bounds(sentence, i)
                spans.append(_WorkSpan(lo, hi, "change", "change_clause", True))

    # a relative clause containing any removed token is removed whole
    if lexicon.pattern_enabled("relative_clause"):
        current = _merge(spans)
        for w in range(n):
            if lower[w] not in lexicon.relative_pronouns or tokens[w].kind is not TokenKind.WORD:
                continue
            hi = w + 1
            while hi < n and not _is_boundary(sentence, hi):
                hi += 1
            inside = [s for s in current if s.start < hi and s.end > w]
            if inside:
                head = next((s.head for s in inside if s.head), inside[0].head)
                spans.append(_WorkSpan(w, hi, head, "relative_clause",
                                       any(s.has_keyword for s in inside)))

    spans = _merge(spans)

    # absorption loop: grow spans over neighbouring function words until
    # nothing changes
    def clause_final(s: _WorkSpan) -> bool:
        return s.end >= n or _is_boundary(sentence, s.end)

    changed = True
    while changed:
        changed = False
        for s in spans:
            p = s.start - 1
            if p >= 0 and s.has_keyword and tokens[p].kind is TokenKind.WORD:
                w = lower[p]
                if (
                    (lexicon.pattern_enabled("modifier_join") and w in lexicon.degree_adverbs)
                    or (lexicon.pattern_enabled("aux_join") and w in lexicon.perfect_auxiliaries)
                    or (lexicon.pattern_enabled("joiner_absorb") and w in lexicon.leading_joiners)
                    or (
                        lexicon.pattern_enabled("copula_join")
                        and w in lexicon.copulas
                        and clause_final(s)
                    )
                ):
                    s.start = p
                    changed = True
                    continue
            if (
                p >= 0
                and s.has_keyword
                and lexicon.pattern_enabled("comma_absorb")
                and tokens[p].kind is TokenKind.PUNCT
                and tokens[p].text == ","
                and clause_final(s)
            ):
                s.start = p
                changed = True
                continue
            if (
                s.end < n
                and s.has_keyword
                and lexicon.pattern_enabled("conjunction_absorb")
                and tokens[s.end].kind is TokenKind.WORD
                and lower[s.end] in lexicon.trailing_conjunctions
            ):
                s.end += 1
                changed = True
        if changed:
            spans = _merge(spans)

    # whole-sentence collapse: once no content token survives, punctuation
    # goes too and the scrubber drops the sentence
    if spans and lexicon.pattern_enabled("sentence_collapse"):
        covered = set()
        for s in spans:
            covered.update(range(s.start, s.end))
        content = [
            i for i, t in enumerate(tokens)
            if t.kind in (TokenKind.WORD, TokenKind.NUMBER, TokenKind.BLANK)
        ]
        if content and all(i in covered for i in content):
            head = next((s.head for s in spans if s.head), spans[0].head)
            spans = [_WorkSpan(0, n, head, "sentence_collapse", True)]

    return spans


def detect(report: Report, lexicon: Lexicon) -> LabeledReport:
    """Label every token KEEP/REMOVE and group REMOVE runs into spans."""
    problems = lexicon.validate()
    if problems:
        raise LexiconInvalid("; ".join(problems))

    labels: list[list[Label]] = []
    spans: list[Span] = []
    for sentence in report.sentences:
        work = _detect_sentence(sentence, lexicon)
        sent_labels = [Label.KEEP] * len(sentence.tokens)
        for s in work:
            for i in range(s.start, s.end):
                sent_labels[i] = Label.REMOVE
            spans.append(
                Span(
                    sentence_index=sentence.index,
                    token_start=s.start,
                    token_end=s.end,
                    keyword=s.head,
                    rule_id=s.rule_id,
                )
            )
        labels.append(sent_labels)
    return LabeledReport(report=report, labels=labels, spans=spans)


def flag_sentences(report: Report, lexicon: Lexicon, threshold: float = 0.5) -> list[SentenceFlag]:
    """Flag sentences containing at least one REMOVE token.

    The rule engine scores a hard 0.0/1.0; the threshold is exposed so a
    learned scorer can sit behind the same contract.
    """
    labeled = detect(report, lexicon)
    flags = []
    for sentence in report.sentences:
        score = 1.0 if any(l is Label.REMOVE for l in labeled.labels[sentence.index]) else 0.0
        flags.append(SentenceFlag(sentence_index=sentence.index, flagged=score >= threshold, score=score))
    return flags
