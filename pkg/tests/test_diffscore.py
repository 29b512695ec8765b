import random
from functools import lru_cache

import pytest

from priorscrub.diffscore import (
    DiffScore,
    IdMismatch,
    align_corpora,
    lcs_pairs,
    removed_set,
    score,
    score_corpus,
)


def brute_force_leftmost_alignment(a, b):
    """Enumerate every maximum-length common-subsequence alignment and
    return the lexicographically smallest pair sequence."""

    @lru_cache(maxsize=None)
    def suffix_len(i, j):
        if i >= len(a) or j >= len(b):
            return 0
        if a[i] == b[j]:
            return 1 + suffix_len(i + 1, j + 1)
        return max(suffix_len(i + 1, j), suffix_len(i, j + 1))

    best_len = suffix_len(0, 0)
    alignments = []

    def rec(i, j, acc):
        if len(acc) == best_len:
            alignments.append(tuple(acc))
            return
        if len(acc) + suffix_len(i, j) < best_len:
            return
        for ii in range(i, len(a)):
            for jj in range(j, len(b)):
                if a[ii] == b[jj] and len(acc) + 1 + suffix_len(ii + 1, jj + 1) == best_len:
                    acc.append((ii, jj))
                    rec(ii + 1, jj + 1, acc)
                    acc.pop()

    rec(0, 0, [])
    suffix_len.cache_clear()
    return min(alignments) if alignments else ()


class TestRemovedSet:
    def test_identity(self):
        assert removed_set(list("abc"), list("abc")) == set()

    def test_single_deletion(self):
        assert removed_set(["a", "b", "c"], ["a", "c"]) == {1}

    def test_leftmost_tie_break(self):
        # variant "a" can match original index 0 or 2; leftmost wins
        assert removed_set(["a", "b", "a"], ["a"]) == {1, 2}

    def test_empty_variant(self):
        assert removed_set(["a", "b"], []) == {0, 1}

    def test_matches_brute_force_oracle(self):
        rng = random.Random(99)
        alphabet = list("abcde")
        for _ in range(300):
            a = [rng.choice(alphabet) for _ in range(rng.randint(0, 8))]
            b = [rng.choice(alphabet) for _ in range(rng.randint(0, 8))]
            expected_pairs = brute_force_leftmost_alignment(a, b)
            assert tuple(lcs_pairs(a, b)) == expected_pairs
            expected_removed = set(range(len(a))) - {i for i, _ in expected_pairs}
            assert removed_set(a, b) == expected_removed


class TestScore:
    def test_perfect_agreement(self):
        s = score(list("abcd"), list("ad"), list("ad"))
        assert s.f1 == 1.0

    def test_mixed_counts(self):
        # ground truth removes {b, c}; modified removes {b, d}
        s = score(list("abcd"), ["a", "c"], ["a", "d"])
        assert (s.tp, s.fp, s.fn) == (1, 1, 1)
        assert s.f1 == 0.5

    def test_nothing_removed_anywhere(self):
        s = score(list("ab"), list("ab"), list("ab"))
        assert (s.tp, s.fp, s.fn) == (0, 0, 0)
        assert s.f1 == 1.0 and s.precision == 1.0 and s.recall == 1.0

    def test_disjoint_removals_score_zero(self):
        s = score(list("abcd"), ["a", "b"], ["c", "d"])
        assert s.f1 == 0.0

    def test_insertions_ignored(self):
        s = score(list("abc"), ["a", "b", "c", "x", "y"], list("abc"))
        assert (s.tp, s.fp, s.fn) == (0, 0, 0)

    def test_case_normalization_shared(self):
        s = score(["The", "heart"], ["the", "heart"], ["THE", "HEART"])
        assert s.f1 == 1.0

    def test_symmetry_of_perfection_random(self):
        rng = random.Random(5)
        for _ in range(50):
            o = [rng.choice("abc") for _ in range(rng.randint(0, 8))]
            g = [rng.choice("abc") for _ in range(rng.randint(0, 8))]
            assert score(o, g, g).f1 == 1.0


class TestScoreCorpus:
    def test_single_report_micro_equals_macro(self):
        result = score_corpus([("r1", list("abcd"), ["a", "c"], ["a", "d"])])
        assert result["micro"]["f1"] == result["macro_f1"]

    def test_macro_mean(self):
        triples = [
            ("r1", list("abcd"), ["a", "b"], ["a", "b"]),   # f1 = 1.0
            ("r2", list("efgh"), ["e", "f"], ["g", "h"]),   # f1 = 0.0
        ]
        result = score_corpus(triples)
        assert result["macro_f1"] == 0.5

    def test_micro_equals_summed_counts(self):
        rng = random.Random(17)
        triples = []
        tp = fp = fn = 0
        for n in range(40):
            o = [rng.choice("abcde") for _ in range(rng.randint(0, 9))]
            m = [rng.choice("abcde") for _ in range(rng.randint(0, 9))]
            g = [rng.choice("abcde") for _ in range(rng.randint(0, 9))]
            s = score(o, m, g)
            tp, fp, fn = tp + s.tp, fp + s.fp, fn + s.fn
            triples.append((f"r{n}", o, m, g))
        result = score_corpus(triples)
        expected = DiffScore(tp=tp, fp=fp, fn=fn)
        assert result["micro"]["tp"] == tp
        assert result["micro"]["f1"] == pytest.approx(expected.f1)

    def test_id_mismatch_lists_offenders(self):
        with pytest.raises(IdMismatch) as err:
            align_corpora({"a": [], "b": []}, {"a": []}, {"a": [], "c": []})
        assert "b" in str(err.value) and "c" in str(err.value)
