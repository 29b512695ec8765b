"""Semantic evaluation metrics over externally supplied embeddings and
entity annotations.

No model inference happens here: report vectors, per-token embedding
matrices, and entity sets are produced upstream and fed in through the
store/sidecar formats.  The embedding score is the raw greedy-matching
token similarity (no importance weighting, no baseline rescaling).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


class ZeroVector(ValueError):
    pass


class DimMismatch(ValueError):
    pass


class EmptyInput(ValueError):
    pass


class IdMismatch(ValueError):
    pass


def cosine(u, v) -> float:
    u = np.asarray(u, dtype=np.float64).reshape(-1)
    v = np.asarray(v, dtype=np.float64).reshape(-1)
    if u.shape != v.shape:
        raise DimMismatch("vectors have dims %d and %d" % (u.shape[0], v.shape[0]))
    nu = np.linalg.norm(u)
    nv = np.linalg.norm(v)
    if nu == 0.0 or nv == 0.0:
        raise ZeroVector("cosine undefined for zero vectors")
    return float(np.dot(u, v) / (nu * nv))


@dataclass(frozen=True)
class EntitySet:
    """Clinical entities as (surface, label) pairs; surfaces lowercase."""

    entities: frozenset[tuple[str, str]]

    @classmethod
    def from_records(cls, records: list[dict]) -> "EntitySet":
        return cls(frozenset((e["surface"].lower(), e["label"]) for e in records))


def entity_f1(pred: EntitySet, truth: EntitySet) -> dict:
    """Set-overlap precision/recall/F1 with exact (surface, label) matching."""
    p, t = pred.entities, truth.entities
    if not p and not t:
        return {"precision": 1.0, "recall": 1.0, "f1": 1.0}
    overlap = len(p & t)
    precision = overlap / len(p) if p else 0.0
    recall = overlap / len(t) if t else 0.0
    f1 = 2 * precision * recall / (precision + recall) if (precision + recall) > 0 else 0.0
    return {"precision": precision, "recall": recall, "f1": f1}


@dataclass
class TokenEmbeddings:
    tokens: list[str]
    matrix: np.ndarray  # len(tokens) x d

    def validate(self) -> None:
        if self.matrix.ndim != 2 or self.matrix.shape[0] != len(self.tokens):
            raise DimMismatch("matrix rows do not match token count")
        if self.matrix.shape[1] < 1:
            raise DimMismatch("embedding dimension must be >= 1")


def greedy_embed_score(candidate: TokenEmbeddings, reference: TokenEmbeddings) -> dict:
    """Greedy token-matching similarity from contextual embeddings.

    recall: mean over reference tokens of the max cosine to any candidate
    token; precision symmetric; f1 the harmonic mean.
    """
    if not candidate.tokens or not reference.tokens:
        raise EmptyInput("both sides need at least one token")
    candidate.validate()
    reference.validate()
    if candidate.matrix.shape[1] != reference.matrix.shape[1]:
        raise DimMismatch("embedding dims differ")
    c = np.asarray(candidate.matrix, dtype=np.float64)
    r = np.asarray(reference.matrix, dtype=np.float64)
    c_norm = np.linalg.norm(c, axis=1, keepdims=True)
    r_norm = np.linalg.norm(r, axis=1, keepdims=True)
    if np.any(c_norm == 0) or np.any(r_norm == 0):
        raise ZeroVector("zero token embedding")
    sim = (c / c_norm) @ (r / r_norm).T  # candidate x reference cosines
    precision = float(sim.max(axis=1).mean())
    recall = float(sim.max(axis=0).mean())
    f1 = 2 * precision * recall / (precision + recall) if (precision + recall) > 0 else 0.0
    return {"precision": precision, "recall": recall, "f1": f1}


def evaluate_run(
    predictions: dict[str, str],
    ground_truths: dict[str, str],
    report_vectors: dict[str, tuple[np.ndarray, np.ndarray]] | None = None,
    token_embeddings: dict[str, tuple[TokenEmbeddings, TokenEmbeddings]] | None = None,
    entities: dict[str, tuple[EntitySet, EntitySet]] | None = None,
) -> dict:
    """Per-pair metric rows plus unweighted means.

    Sidecars map report id to a (prediction-side, truth-side) pair.
    Missing sidecar entries produce null cells, not failures.  Means are
    unweighted per-pair averages.
    """
    pred_ids, truth_ids = set(predictions), set(ground_truths)
    if pred_ids != truth_ids:
        raise IdMismatch(
            "prediction/ground-truth ids differ: only-pred=%s only-truth=%s"
            % (sorted(pred_ids - truth_ids), sorted(truth_ids - pred_ids))
        )
    rows = []
    for report_id in sorted(pred_ids):
        row: dict = {"id": report_id, "embed_f1": None, "semb": None, "entity_f1": None}
        if token_embeddings and report_id in token_embeddings:
            cand, ref = token_embeddings[report_id]
            row["embed_f1"] = greedy_embed_score(cand, ref)["f1"]
        if report_vectors and report_id in report_vectors:
            u, v = report_vectors[report_id]
            row["semb"] = cosine(u, v)
        if entities and report_id in entities:
            pred_set, truth_set = entities[report_id]
            row["entity_f1"] = entity_f1(pred_set, truth_set)["f1"]
        rows.append(row)

    def mean_of(key: str) -> float | None:
        values = [r[key] for r in rows if r[key] is not None]
        return sum(values) / len(values) if values else None

    return {
        "rows": rows,
        "means": {
            "embed_f1": mean_of("embed_f1"),
            "semb": mean_of("semb"),
            "entity_f1": mean_of("entity_f1"),
        },
        "mean_kind": "unweighted per-pair mean",
    }
