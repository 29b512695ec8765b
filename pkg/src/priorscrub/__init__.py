"""Toolkit for removing references to prior studies from radiology reports.

The package provides:

* deterministic sentence/token/subword segmentation of report text
* a rule-based detector that labels tokens KEEP/REMOVE and groups them
  into spans with a keyword category
* a scrubber that applies the labels and cleans up the surface text
* a few-shot rewrite client for an external completion endpoint, with a
  deterministic offline mock
* evaluation utilities: three-way token-diff F1, corpus keyword
  statistics, exact dot-product retrieval, and embedding/entity metrics
* an HTTP review service for building human ground-truth corpora
"""

from priorscrub.models import (
    Report,
    Sentence,
    Token,
    TokenKind,
    Label,
    LabeledReport,
    Span,
    SubwordSequence,
    SubwordVocab,
    make_report,
    segment_sentences,
    tokenize,
    subword_split,
)
from priorscrub.lexicon import Lexicon, PhrasePattern, load_lexicon, default_lexicon
from priorscrub.detector import detect, flag_sentences, SentenceFlag, LexiconInvalid
from priorscrub.scrubber import scrub, scrub_corpus, ScrubStats

__all__ = [
    "Report",
    "Sentence",
    "Token",
    "TokenKind",
    "Label",
    "LabeledReport",
    "Span",
    "SubwordSequence",
    "SubwordVocab",
    "make_report",
    "segment_sentences",
    "tokenize",
    "subword_split",
    "Lexicon",
    "PhrasePattern",
    "load_lexicon",
    "default_lexicon",
    "detect",
    "flag_sentences",
    "SentenceFlag",
    "LexiconInvalid",
    "scrub",
    "scrub_corpus",
    "ScrubStats",
]

__version__ = "0.1.0"
