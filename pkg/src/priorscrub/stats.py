"""Corpus keyword statistics and dataset split utilities."""

from __future__ import annotations

import random
from decimal import ROUND_HALF_UP, Decimal
from typing import Iterable, Sequence

from priorscrub.detector import keyword_hits
from priorscrub.lexicon import Lexicon
from priorscrub.models import TokenKind, make_report

# Row order used by the before/after table; keyword_counts reports in
# lexicon (frequency) order instead.
BEFORE_AFTER_ORDER = [
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
    "decreased",
    "similar",
    "earlier",
    "recurrence",
    "redemonstrate",
]


def _round3(value: float) -> float:
    return float(Decimal(str(value)).quantize(Decimal("0.001"), rounding=ROUND_HALF_UP))


def _instances(text: str, lexicon: Lexicon, raw_surface: bool) -> dict[str, int]:
    """Per-head keyword instance counts for one report text.

    Default counting applies the change-qualifier rule so the table
    measures exactly what the scrubber acts on; raw counting matches
    every surface variant regardless.
    """
    counts: dict[str, int] = {}
    report = make_report("", text)
    for sentence in report.sentences:
        if raw_surface:
            for tok in sentence.tokens:
                if tok.kind is not TokenKind.WORD:
                    continue
                head = lexicon.variant_to_head.get(tok.text.lower())
                if head is not None:
                    counts[head.head] = counts.get(head.head, 0) + 1
        else:
            lower = [t.text.lower() for t in sentence.tokens]
            for _, head in keyword_hits(sentence, lower, lexicon).items():
                counts[head] = counts.get(head, 0) + 1
    return counts


def keyword_counts(
    records: Iterable[dict],
    lexicon: Lexicon,
    denominator: int | None = None,
    raw_surface: bool = False,
) -> dict:
    """Per-keyword instance/report counts with relative frequencies.

    ``relative`` is report_count over ``denominator`` (defaults to the
    number of reports read), rounded half-up to 3 decimals.  The Total
    row counts reports containing at least one keyword of any head.
    """
    heads = lexicon.head_names()
    instance_count = {h: 0 for h in heads}
    report_count = {h: 0 for h in heads}
    reports_read = 0
    total_reports_with_hit = 0
    for record in records:
        reports_read += 1
        counts = _instances(record["text"], lexicon, raw_surface)
        if counts:
            total_reports_with_hit += 1
        for head, c in counts.items():
            instance_count[head] += c
            report_count[head] += 1
    denom = denominator if denominator is not None else reports_read
    rows = []
    for head in heads:
        rows.append(
            {
                "keyword": head,
                "instance_count": instance_count[head],
                "report_count": report_count[head],
                "relative": _round3(report_count[head] / denom) if denom else None,
            }
        )
    return {
        "reports_read": reports_read,
        "denominator": denom,
        "total": {
            "report_count": total_reports_with_hit,
            "relative": _round3(total_reports_with_hit / denom) if denom else None,
        },
        "rows": rows,
    }


def before_after(
    records_a: Iterable[dict],
    records_b: Iterable[dict],
    lexicon: Lexicon,
    raw_surface: bool = False,
) -> dict:
    """Per-keyword instance counts for two corpora plus the reduction."""
    counts_a = {h: 0 for h in BEFORE_AFTER_ORDER}
    counts_b = {h: 0 for h in BEFORE_AFTER_ORDER}
    for record in records_a:
        for head, c in _instances(record["text"], lexicon, raw_surface).items():
            counts_a[head] += c
    for record in records_b:
        for head, c in _instances(record["text"], lexicon, raw_surface).items():
            counts_b[head] += c
    total_a = sum(counts_a.values())
    total_b = sum(counts_b.values())
    rows = [
        {"keyword": h, "before": counts_a[h], "after": counts_b[h]}
        for h in BEFORE_AFTER_ORDER
    ]
    return {
        "total_before": total_a,
        "total_after": total_b,
        "reduction": (1.0 - total_b / total_a) if total_a > 0 else None,
        "rows": rows,
    }


def split(
    records: Sequence[dict],
    train_fraction: float = 0.8,
    seed: int = 0,
) -> tuple[list[dict], list[dict]]:
    """Deterministic shuffled split with patient grouping.

    Records sharing a ``patient_id`` always land on the same side, so
    there is no patient leakage between train and test.  Records without
    a patient_id are their own group.
    """
    if not (0.0 < train_fraction < 1.0):
        raise ValueError("train_fraction must be in (0, 1)")
    groups: dict[object, list[int]] = {}
    for idx, record in enumerate(records):
        key = record.get("patient_id")
        groups.setdefault(key if key is not None else ("__solo__", idx), []).append(idx)
    keys = sorted(groups.keys(), key=str)
    random.Random(seed).shuffle(keys)
    target = train_fraction * len(records)
    train_idx: set[int] = set()
    taken = 0
    for key in keys:
        size = len(groups[key])
        if taken + size <= target + 1e-9:
            train_idx.update(groups[key])
            taken += size
    train = [records[i] for i in range(len(records)) if i in train_idx]
    test = [records[i] for i in range(len(records)) if i not in train_idx]
    return train, test


def leakage(train: Iterable[dict], test: Iterable[dict]) -> set[str]:
    """Patient ids present on both sides (empty when the split is clean)."""
    a = {r["patient_id"] for r in train if r.get("patient_id") is not None}
    b = {r["patient_id"] for r in test if r.get("patient_id") is not None}
    return a & b


def format_table(rows: list[dict], columns: list[str]) -> str:
    """Render rows as an aligned text table."""
    widths = {c: max(len(c), *(len(str(r.get(c, ""))) for r in rows)) if rows else len(c) for c in columns}
    lines = ["  ".join(c.ljust(widths[c]) for c in columns)]
    for r in rows:
        lines.append("  ".join(str(r.get(c, "")).ljust(widths[c]) for c in columns))
    return "\n".join(lines)
