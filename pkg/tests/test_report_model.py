import random
import re

import pytest
from hypothesis import given, strategies as st

from priorscrub.models import (
    Label,
    LabeledReport,
    SubwordVocab,
    TokenKind,
    make_report,
    segment_sentences,
    subword_split,
    tokenize,
)
from tests.conftest import SAFE_WORDS, synthetic_clean_report


class TestSegmentSentences:
    def test_two_terminated_clauses(self):
        sentences = segment_sentences("No pneumothorax. No effusion.")
        assert [s.text for s in sentences] == ["No pneumothorax.", "No effusion."]

    def test_empty_input(self):
        assert segment_sentences("") == []
        assert segment_sentences("   \n ") == []

    def test_blank_placeholder_sentence(self):
        sentences = segment_sentences("Comparison made to prior study from ___.")
        assert len(sentences) == 1
        kinds = [t.kind for t in sentences[0].tokens]
        assert kinds[-2] == TokenKind.BLANK  # final token is the period
        assert sentences[0].tokens[-1].text == "."

    def test_abbreviations_do_not_split(self):
        sentences = segment_sentences("Dr. Example was notified at 3 p.m. of these findings.")
        assert len(sentences) == 1

    def test_decimal_does_not_split(self):
        sentences = segment_sentences("The tube lies 4.2 cm above the carina.")
        assert len(sentences) == 1
        assert any(t.text == "4.2" and t.kind == TokenKind.NUMBER for t in sentences[0].tokens)

    def test_paragraph_break_splits(self):
        sentences = segment_sentences("Heart size normal\n\nLungs are clear.")
        assert [s.text for s in sentences] == ["Heart size normal", "Lungs are clear."]

    def test_terminators_stay_attached(self):
        sentences = segment_sentences("Any effusion? No! Stop.")
        assert [s.text for s in sentences] == ["Any effusion?", "No!", "Stop."]


class TestTokenize:
    def test_whitespace_split(self):
        assert [t.text for t in tokenize("heart size is stable.")] == [
            "heart", "size", "is", "stable", "."
        ]

    def test_intra_word_hyphen_kept(self):
        assert [t.text for t in tokenize("right-sided effusion")] == ["right-sided", "effusion"]

    def test_blank_token(self):
        tokens = tokenize("from ___.")
        assert [t.text for t in tokens] == ["from", "___", "."]
        assert [t.kind for t in tokens] == [TokenKind.WORD, TokenKind.BLANK, TokenKind.PUNCT]

    def test_long_blank_is_single_token(self):
        tokens = tokenize("from ______.")
        assert [t.kind for t in tokens] == [TokenKind.WORD, TokenKind.BLANK, TokenKind.PUNCT]

    def test_offsets_match_text(self):
        text = "The heart, lungs (and pleura) are clear."
        for tok in tokenize(text):
            assert text[tok.char_start:tok.char_end] == tok.text

    def test_round_trip_covers_non_whitespace(self):
        rng = random.Random(7)
        texts = [synthetic_clean_report(rng) for _ in range(25)]
        texts.append("Weird  spacing ,and. (punct)! from ___ 3.5cm")
        for text in texts:
            for sentence in segment_sentences(text):
                covered = []
                for tok in sentence.tokens:
                    covered.extend(range(tok.char_start, tok.char_end))
                expected = [i for i, c in enumerate(sentence.text) if not c.isspace()]
                assert covered == expected


class TestReportInvariants:
    def _collapse(self, text):
        return re.sub(r"\s+", " ", text).strip()

    def test_sentence_concat_equals_text(self):
        rng = random.Random(11)
        for _ in range(20):
            text = synthetic_clean_report(rng)
            report = make_report("r", text)
            joined = " ".join(s.text for s in report.sentences)
            assert self._collapse(joined) == self._collapse(text)

    def test_sentences_empty_iff_blank_text(self):
        assert make_report("r", "  \n ").sentences == []
        assert make_report("r", "x").sentences != []

    def test_determinism(self):
        text = "Comparison made to prior study from ___. No change."
        assert make_report("r", text) == make_report("r", text)


def _label_all(report, label):
    return LabeledReport(
        report=report,
        labels=[[label] * len(s.tokens) for s in report.sentences],
        spans=[],
    )


class TestSubwordSplit:
    def test_propagation_remove(self):
        report = make_report("r", "unchanged")
        labeled = _label_all(report, Label.REMOVE)
        seq = subword_split(labeled, SubwordVocab(["un", "##changed"]))
        assert [(u.text, u.continuation) for u in seq.units] == [("un", False), ("changed", True)]
        assert seq.labels == [Label.REMOVE, Label.REMOVE]

    def test_whole_word_hit(self):
        report = make_report("r", "clear")
        labeled = _label_all(report, Label.KEEP)
        seq = subword_split(labeled, SubwordVocab(["clear"]))
        assert [(u.text, u.continuation) for u in seq.units] == [("clear", False)]
        assert seq.labels == [Label.KEEP]

    def test_greedy_two_units(self):
        report = make_report("r", "cardiomegaly")
        labeled = _label_all(report, Label.KEEP)
        seq = subword_split(labeled, SubwordVocab(["cardio", "##megaly"]))
        assert [(u.text, u.continuation) for u in seq.units] == [("cardio", False), ("megaly", True)]
        assert seq.labels == [Label.KEEP, Label.KEEP]

    def test_character_fallback_totality(self):
        report = make_report("r", "xyzzy")
        labeled = _label_all(report, Label.KEEP)
        seq = subword_split(labeled, SubwordVocab([]))
        assert "".join(u.text for u in seq.units) == "xyzzy"

    @given(
        words=st.lists(st.sampled_from(SAFE_WORDS), min_size=1, max_size=8),
        vocab_words=st.lists(st.sampled_from(SAFE_WORDS), max_size=6),
        prefix_len=st.integers(min_value=1, max_value=4),
        seed=st.integers(min_value=0, max_value=2**16),
    )
    def test_propagation_property(self, words, vocab_words, prefix_len, seed):
        rng = random.Random(seed)
        text = " ".join(words) + "."
        report = make_report("r", text)
        labels = [
            [rng.choice([Label.KEEP, Label.REMOVE]) for _ in s.tokens]
            for s in report.sentences
        ]
        labeled = LabeledReport(report=report, labels=labels, spans=[])
        units = [w[:prefix_len] for w in vocab_words] + ["##" + w[prefix_len:] for w in vocab_words if len(w) > prefix_len]
        seq = subword_split(labeled, SubwordVocab(units))

        flat_tokens = report.all_tokens()
        flat_labels = [l for sent in labels for l in sent]
        # every unit label equals its parent token label
        for unit, label in zip(seq.units, seq.labels):
            assert label == flat_labels[unit.parent_token_index]
        # concatenating a parent's units reproduces its text
        by_parent = {}
        for unit in seq.units:
            by_parent.setdefault(unit.parent_token_index, []).append(unit.text)
        for parent_idx, pieces in by_parent.items():
            assert "".join(pieces) == flat_tokens[parent_idx].text
