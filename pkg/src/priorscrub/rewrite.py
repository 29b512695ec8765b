"""Few-shot rewrite pathway: flag sentences, prompt an external
completion endpoint, merge rewrites back into the report.

The endpoint is a pluggable port.  ``HttpCompletion`` is a minimal JSON
reference client; ``MockCompletion`` is a deterministic offline stand-in
that scrubs the target chunk with the rule detector, so the whole
pathway can be exercised without network access.
"""

from __future__ import annotations

import json
import math
import os
import urllib.request
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from enum import Enum
from importlib import resources
from typing import Callable, Protocol

from priorscrub.detector import SentenceFlag, detect
from priorscrub.lexicon import Lexicon
from priorscrub.models import Report, make_report
from priorscrub.scrubber import scrub

# Prompt labels are fixed; the endpoint learns the task from them.
ORIGINAL_LABEL = "Original medical report:"
EDITED_LABEL = "Edited medical report to remove references to prior medical reports:"


class EmptyInput(ValueError):
    pass


class TransportError(RuntimeError):
    pass


class RewriteSource(str, Enum):
    EXTERNAL = "EXTERNAL"
    MOCK = "MOCK"
    UNFLAGGED_PASSTHROUGH = "UNFLAGGED_PASSTHROUGH"


@dataclass
class RewriteConfig:
    temperature: float = 0.3
    chunk_sentences: int = 1
    context_examples: list[tuple[str, str]] = field(default_factory=list)
    endpoint_url: str = ""
    model_name: str = "davinci"
    max_retries: int = 2
    per_1k_token_cost: float = 0.02
    api_key_env: str = ""
    in_flight_limit: int = 1
    # completion budget: rewrites are never longer than their input, so
    # twice the input token count is safe headroom
    completion_budget_factor: float = 2.0

    def __post_init__(self):
        if self.chunk_sentences < 1:
            raise ValueError("chunk_sentences must be >= 1")
        if self.temperature < 0:
            raise ValueError("temperature must be >= 0")

    @classmethod
    def from_file(cls, path: str) -> "RewriteConfig":
        with open(path, encoding="utf-8") as f:
            payload = json.load(f)
        payload.pop("note", None)
        examples = [tuple(p) if isinstance(p, list) else (p["original"], p["edited"])
                    for p in payload.pop("context_examples", [])]
        return cls(context_examples=examples, **payload)


def default_context_examples() -> list[tuple[str, str]]:
    payload = json.loads(
        resources.files("priorscrub.data").joinpath("context_pairs.json").read_text("utf-8")
    )
    return [(p["original"], p["edited"]) for p in payload["context_examples"]]


@dataclass(frozen=True)
class RewriteResult:
    report_id: str
    sentence_index: int
    original: str
    rewritten: str
    source: RewriteSource
    error: str | None = None


class CompletionPort(Protocol):
    """Anything that maps a prompt to a completion string."""

    source: RewriteSource

    def complete(self, prompt: str, config: RewriteConfig) -> str: ...


class HttpCompletion:
    """Reference JSON client: POST {prompt, temperature, model, max_tokens}
    and read {"completion": ...} back.  The API key, when configured, is
    read from the environment variable named in the config."""

    source = RewriteSource.EXTERNAL

    def complete(self, prompt: str, config: RewriteConfig) -> str:
        chunk_tokens = len(prompt.split())
        body = json.dumps(
            {
                "prompt": prompt,
                "temperature": config.temperature,
                "model": config.model_name,
                "max_tokens": int(config.completion_budget_factor * chunk_tokens),
            }
        ).encode("utf-8")
        headers = {"Content-Type": "application/json"}
        if config.api_key_env:
            key = os.environ.get(config.api_key_env, "")
            if key:
                headers["Authorization"] = "Bearer " + key
        request = urllib.request.Request(config.endpoint_url, data=body, headers=headers)
        try:
            with urllib.request.urlopen(request, timeout=60) as response:
                payload = json.loads(response.read().decode("utf-8"))
        except Exception as exc:
            raise TransportError(str(exc)) from exc
        try:
            return payload["completion"]
        except (KeyError, TypeError) as exc:
            raise TransportError("malformed completion response") from exc


class MockCompletion:
    """Offline mock: scrub the target chunk with the rule detector."""

    source = RewriteSource.MOCK

    def __init__(self, lexicon: Lexicon):
        self.lexicon = lexicon

    def complete(self, prompt: str, config: RewriteConfig) -> str:
        target = prompt.rsplit(ORIGINAL_LABEL, 1)[1]
        target = target.rsplit(EDITED_LABEL, 1)[0].strip()
        return scrub(detect(make_report("", target), self.lexicon)).text


def build_prompt(flagged_sentences: list[str], config: RewriteConfig) -> str:
    """Assemble the few-shot prompt for one chunk of flagged sentences."""
    if not flagged_sentences:
        raise EmptyInput("no sentences to rewrite")
    blocks = []
    for original, edited in config.context_examples:
        blocks.append(f"{ORIGINAL_LABEL} {original}\n{EDITED_LABEL} {edited}")
    target = " ".join(flagged_sentences)
    blocks.append(f"{ORIGINAL_LABEL} {target}\n{EDITED_LABEL}")
    return "\n\n".join(blocks)


def _chunks(items: list, size: int) -> list[list]:
    return [items[i : i + size] for i in range(0, len(items), size)]


def _split_completion(completion: str, count: int) -> list[str]:
    """Map one chunk completion back onto its input sentences."""
    if count == 1:
        return [completion.strip()]
    parts = [s.text for s in make_report("", completion).sentences]
    if len(parts) == count:
        return parts
    # sentence counts diverged; attribute everything to the first slot
    return [completion.strip()] + [""] * (count - 1)


def rewrite_report(
    report: Report,
    flags: list[SentenceFlag],
    config: RewriteConfig,
    transport: CompletionPort,
) -> list[RewriteResult]:
    """Rewrite flagged sentences through the transport; pass the rest through.

    Transport failures are retried up to ``max_retries``; a chunk that
    still fails keeps its original sentences and carries the error.
    """
    if len(flags) != len(report.sentences):
        raise ValueError("flags do not align with report sentences")
    by_index = {f.sentence_index: f for f in flags}
    results: dict[int, RewriteResult] = {}
    flagged_indices = []
    for sentence in report.sentences:
        if by_index[sentence.index].flagged:
            flagged_indices.append(sentence.index)
        else:
            results[sentence.index] = RewriteResult(
                report_id=report.id,
                sentence_index=sentence.index,
                original=sentence.text,
                rewritten=sentence.text,
                source=RewriteSource.UNFLAGGED_PASSTHROUGH,
            )

    def run_chunk(indices: list[int]) -> list[RewriteResult]:
        texts = [report.sentences[i].text for i in indices]
        prompt = build_prompt(texts, config)
        error: str | None = None
        for _ in range(config.max_retries + 1):
            try:
                completion = transport.complete(prompt, config)
                rewritten = _split_completion(completion, len(indices))
                return [
                    RewriteResult(
                        report_id=report.id,
                        sentence_index=i,
                        original=t,
                        rewritten=r,
                        source=transport.source,
                    )
                    for i, t, r in zip(indices, texts, rewritten)
                ]
            except TransportError as exc:
                error = str(exc)
        return [
            RewriteResult(
                report_id=report.id,
                sentence_index=i,
                original=t,
                rewritten=t,
                source=transport.source,
                error=error,
            )
            for i, t in zip(indices, texts)
        ]

    chunk_list = _chunks(flagged_indices, config.chunk_sentences)
    if config.in_flight_limit > 1 and len(chunk_list) > 1:
        with ThreadPoolExecutor(max_workers=config.in_flight_limit) as pool:
            chunk_results = list(pool.map(run_chunk, chunk_list))
    else:
        chunk_results = [run_chunk(c) for c in chunk_list]
    for batch in chunk_results:
        for r in batch:
            results[r.sentence_index] = r
    return [results[i] for i in sorted(results)]


def merged_text(results: list[RewriteResult]) -> str:
    """Assemble the rewritten report text, skipping emptied sentences."""
    return " ".join(r.rewritten for r in sorted(results, key=lambda r: r.sentence_index) if r.rewritten)


def estimate_cost(
    corpus_stats: dict,
    config: RewriteConfig,
) -> dict:
    """Projected endpoint cost with and without sentence filtering.

    cost = sentences x (avg prompt tokens + avg completion tokens)
    x per-1k-token cost / 1000, where the prompt includes the fixed
    few-shot context.
    """
    total = corpus_stats["total_sentences"]
    flagged = corpus_stats["flagged_sentences"]
    avg_tokens = corpus_stats["avg_tokens_per_sentence"]
    if total < 0 or flagged < 0 or avg_tokens < 0:
        raise ValueError("counts must be >= 0")
    context_tokens = sum(
        len(o.split()) + len(e.split()) + len(ORIGINAL_LABEL.split()) + len(EDITED_LABEL.split())
        for o, e in config.context_examples
    )
    per_sentence_tokens = (
        context_tokens
        + avg_tokens
        + config.completion_budget_factor * avg_tokens
    )
    per_sentence_cost = per_sentence_tokens * config.per_1k_token_cost / 1000.0
    return {
        "unfiltered_cost": total * per_sentence_cost,
        "filtered_cost": flagged * per_sentence_cost,
        "ratio": (total / flagged) if flagged else math.inf if total else None,
    }
