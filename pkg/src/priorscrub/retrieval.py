"""Exact maximum-inner-product retrieval over a dense embedding store.

The store is a little-endian binary file (magic ``EMBS``) holding a
count x dim float32 matrix, with ids and texts in a ``.ids.jsonl``
sidecar.  Search is an exact full scan: corpora at the scale this tool
targets fit in memory and exactness keeps oracle testing trivial.
"""

from __future__ import annotations

import json
import struct
from dataclasses import dataclass
from enum import Enum

import numpy as np

MAGIC = b"EMBS"
VERSION = 1
_HEADER = struct.Struct("<4sIIQI")  # magic, version, dim, count, flags
_FLAG_NORMALIZED = 1
_CHUNK_ROWS = 262144


class FormatError(ValueError):
    pass


class LengthMismatch(ValueError):
    pass


class NormError(ValueError):
    pass


class DimMismatch(ValueError):
    pass


class EmptyStore(ValueError):
    pass


class KOutOfRange(ValueError):
    pass


class RetrievalMode(str, Enum):
    REPORT = "REPORT"
    SENTENCES = "SENTENCES"


@dataclass
class EmbeddingStore:
    dim: int
    count: int
    vectors: np.ndarray  # count x dim float32
    ids: list[str]
    texts: list[str]
    normalized: bool

    def validate(self) -> None:
        if len(self.ids) != self.count or len(self.texts) != self.count:
            raise LengthMismatch(
                "sidecar has %d/%d entries for %d vectors"
                % (len(self.ids), len(self.texts), self.count)
            )
        if self.vectors.shape != (self.count, self.dim):
            raise FormatError("vector matrix shape %r does not match header" % (self.vectors.shape,))
        if self.normalized and self.count:
            norms = np.linalg.norm(self.vectors.astype(np.float64), axis=1)
            if not np.all(np.abs(norms - 1.0) <= 1e-4):
                raise NormError("normalized flag set but some rows are not unit length")


@dataclass
class RetrievalResult:
    mode: RetrievalMode
    k: int
    items: list[tuple[str, str, float]]  # (id, text, score), descending score

    @property
    def composite_text(self) -> str:
        return " ".join(text for _, text, _ in self.items)

    def as_dict(self) -> dict:
        return {
            "mode": self.mode.value,
            "k": self.k,
            "items": [{"id": i, "text": t, "score": s} for i, t, s in self.items],
            "composite_text": self.composite_text,
        }


def save_store(store: EmbeddingStore, path: str) -> None:
    store.validate()
    flags = _FLAG_NORMALIZED if store.normalized else 0
    with open(path, "wb") as f:
        f.write(_HEADER.pack(MAGIC, VERSION, store.dim, store.count, flags))
        f.write(np.ascontiguousarray(store.vectors, dtype="<f4").tobytes())
    with open(path + ".ids.jsonl", "w", encoding="utf-8") as f:
        for i, t in zip(store.ids, store.texts):
            f.write(json.dumps({"id": i, "text": t}) + "\n")


def load_store(path: str, mmap: bool = False) -> EmbeddingStore:
    with open(path, "rb") as f:
        header = f.read(_HEADER.size)
        if len(header) < _HEADER.size:
            raise FormatError("file too short for header")
        magic, version, dim, count, flags = _HEADER.unpack(header)
        if magic != MAGIC:
            raise FormatError("bad magic %r" % magic)
        if version != VERSION:
            raise FormatError("unsupported version %d" % version)
        if mmap:
            vectors = np.memmap(path, dtype="<f4", mode="r", offset=_HEADER.size, shape=(count, dim))
        else:
            vectors = np.fromfile(f, dtype="<f4", count=count * dim)
            if vectors.size != count * dim:
                raise FormatError("truncated vector data")
            vectors = vectors.reshape(count, dim)
    ids: list[str] = []
    texts: list[str] = []
    with open(path + ".ids.jsonl", encoding="utf-8") as f:
        for line in f:
            if line.strip():
                record = json.loads(line)
                ids.append(record["id"])
                texts.append(record["text"])
    store = EmbeddingStore(
        dim=dim, count=count, vectors=vectors, ids=ids, texts=texts,
        normalized=bool(flags & _FLAG_NORMALIZED),
    )
    store.validate()
    return store


def _scores(store: EmbeddingStore, query: np.ndarray) -> np.ndarray:
    """Dot products of every row with the query, float64, chunked."""
    q = np.asarray(query, dtype=np.float64).reshape(-1)
    if q.shape[0] != store.dim:
        raise DimMismatch("query has dim %d, store has dim %d" % (q.shape[0], store.dim))
    out = np.empty(store.count, dtype=np.float64)
    for start in range(0, store.count, _CHUNK_ROWS):
        stop = min(start + _CHUNK_ROWS, store.count)
        out[start:stop] = store.vectors[start:stop].astype(np.float64) @ q
    return out


def retrieve_report(query: np.ndarray, store: EmbeddingStore) -> RetrievalResult:
    """The single report maximizing the dot product; ties go to the
    lowest row index."""
    if store.count < 1:
        raise EmptyStore("store has no vectors")
    scores = _scores(store, query)
    best = int(np.argmax(scores))  # argmax returns the first maximum
    return RetrievalResult(
        mode=RetrievalMode.REPORT,
        k=1,
        items=[(store.ids[best], store.texts[best], float(scores[best]))],
    )


def retrieve_sentences(query: np.ndarray, store: EmbeddingStore, k: int) -> RetrievalResult:
    """Top-k rows by dot product, descending, composing one report.

    Duplicate sentence texts are deduplicated before selection (first
    occurrence kept) so the composite never repeats itself.
    """
    if not (1 <= k <= store.count):
        raise KOutOfRange("k=%d outside [1, %d]" % (k, store.count))
    scores = _scores(store, query)
    seen: set[str] = set()
    candidates = []
    for i, text in enumerate(store.texts):
        if text not in seen:
            seen.add(text)
            candidates.append(i)
    if k > len(candidates):
        raise KOutOfRange("k=%d exceeds %d unique sentences" % (k, len(candidates)))
    idx = np.array(candidates)
    cand_scores = scores[idx]
    order = np.lexsort((idx, -cand_scores))[:k]
    chosen = idx[order]
    return RetrievalResult(
        mode=RetrievalMode.SENTENCES,
        k=k,
        items=[(store.ids[i], store.texts[i], float(scores[i])) for i in chosen],
    )


def batch_retrieve(
    queries: np.ndarray,
    store: EmbeddingStore,
    mode: RetrievalMode,
    k: int = 1,
) -> list[RetrievalResult]:
    """Per-query retrieval over a batch; identical to sequential calls."""
    results = []
    for q in np.atleast_2d(np.asarray(queries)) if len(queries) else []:
        if mode is RetrievalMode.REPORT:
            results.append(retrieve_report(q, store))
        else:
            results.append(retrieve_sentences(q, store, k))
    return results
