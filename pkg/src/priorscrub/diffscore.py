"""Three-way token-diff F1 between original, modified, and ground truth.

Removal quality is scored on the original report's tokens: a token
counts as removed when the longest common subsequence between the
original and a variant leaves it unmatched.  LCS ties are broken by
preferring the leftmost match in both sequences, which makes the
removed set deterministic.  Tokens inserted by a variant are ignored.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Iterable, Sequence


class IdMismatch(ValueError):
    def __init__(self, missing: dict[str, list[str]]):
        self.missing = missing
        super().__init__("corpora ids do not align: %s" % json.dumps(missing, sort_keys=True))


@dataclass(frozen=True)
class DiffScore:
    tp: int
    fp: int
    fn: int

    @property
    def precision(self) -> float:
        return self.tp / (self.tp + self.fp) if (self.tp + self.fp) > 0 else 1.0

    @property
    def recall(self) -> float:
        return self.tp / (self.tp + self.fn) if (self.tp + self.fn) > 0 else 1.0

    @property
    def f1(self) -> float:
        denom = 2 * self.tp + self.fp + self.fn
        # nothing removed anywhere means perfect agreement on "remove nothing"
        return 2 * self.tp / denom if denom > 0 else 1.0

    def as_dict(self) -> dict:
        return {
            "tp": self.tp,
            "fp": self.fp,
            "fn": self.fn,
            "precision": self.precision,
            "recall": self.recall,
            "f1": self.f1,
        }


def lcs_pairs(a: Sequence[str], b: Sequence[str]) -> list[tuple[int, int]]:
    """Match pairs of one longest common subsequence of a and b.

    Among all maximum-length alignments this returns the one whose
    (a_index, b_index) pair sequence is lexicographically smallest, i.e.
    matches are made as early as possible in both sequences.
    """
    n, m = len(a), len(b)
    # L[i][j] = LCS length of a[i:], b[j:]
    L = [[0] * (m + 1) for _ in range(n + 1)]
    for i in range(n - 1, -1, -1):
        row = L[i]
        nxt = L[i + 1]
        ai = a[i]
        for j in range(m - 1, -1, -1):
            if ai == b[j]:
                row[j] = nxt[j + 1] + 1
            else:
                down = nxt[j]
                right = row[j + 1]
                row[j] = down if down >= right else right
    pairs: list[tuple[int, int]] = []
    i = j = 0
    while i < n and j < m and L[i][j] > 0:
        if a[i] == b[j]:
            # matching an equal pair never shortens the LCS
            pairs.append((i, j))
            i += 1
            j += 1
            continue
        # smallest j' where matching a[i] still achieves the optimum; if
        # none exists, a[i] is in no optimal alignment and is skipped
        target = L[i][j]
        found = -1
        for jp in range(j + 1, m):
            if a[i] == b[jp] and 1 + L[i + 1][jp + 1] == target:
                found = jp
                break
        if found >= 0:
            pairs.append((i, found))
            i += 1
            j = found + 1
        else:
            i += 1
    return pairs


def removed_set(original: Sequence[str], variant: Sequence[str]) -> set[int]:
    """Indices of original tokens not matched by the LCS with variant."""
    matched = {i for i, _ in lcs_pairs(original, variant)}
    return set(range(len(original))) - matched


def _normalize(tokens: Sequence[str]) -> list[str]:
    return [t.lower() for t in tokens]


def score(
    original: Sequence[str],
    modified: Sequence[str],
    ground_truth: Sequence[str],
) -> DiffScore:
    """Score modified removals against ground-truth removals.

    All three sequences pass through the same lowercasing normalization
    before diffing.
    """
    orig = _normalize(original)
    m_removed = removed_set(orig, _normalize(modified))
    g_removed = removed_set(orig, _normalize(ground_truth))
    return DiffScore(
        tp=len(m_removed & g_removed),
        fp=len(m_removed - g_removed),
        fn=len(g_removed - m_removed),
    )


def score_corpus(
    triples: Iterable[tuple[str, Sequence[str], Sequence[str], Sequence[str]]],
) -> dict:
    """Aggregate scores over (id, original, modified, ground_truth) triples.

    Returns micro (summed counts) and macro (mean per-report f1) blocks.
    """
    tp = fp = fn = 0
    per_report: list[dict] = []
    for report_id, original, modified, truth in triples:
        s = score(original, modified, truth)
        tp += s.tp
        fp += s.fp
        fn += s.fn
        per_report.append({"id": report_id, **s.as_dict()})
    micro = DiffScore(tp=tp, fp=fp, fn=fn)
    macro = sum(r["f1"] for r in per_report) / len(per_report) if per_report else 1.0
    return {
        "micro": micro.as_dict(),
        "macro_f1": macro,
        "reports": per_report,
        "note": "insertions in modified/ground-truth are ignored; scores cover deletions only",
    }


def align_corpora(
    originals: dict[str, Sequence[str]],
    modifieds: dict[str, Sequence[str]],
    truths: dict[str, Sequence[str]],
) -> list[tuple[str, Sequence[str], Sequence[str], Sequence[str]]]:
    """Pair up three id-keyed corpora; raise IdMismatch when ids differ."""
    common = set(originals) & set(modifieds) & set(truths)
    missing = {
        "original_only": sorted(set(originals) - common),
        "modified_only": sorted(set(modifieds) - common),
        "ground_truth_only": sorted(set(truths) - common),
    }
    if any(missing.values()):
        raise IdMismatch(missing)
    return [(i, originals[i], modifieds[i], truths[i]) for i in sorted(common)]
