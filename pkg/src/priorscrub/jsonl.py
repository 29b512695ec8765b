"""Line-delimited JSON helpers for report corpora."""

from __future__ import annotations

import json
from typing import IO, Iterable, Iterator


def read_records(stream: IO[str]) -> Iterator[dict]:
    for line in stream:
        if line.strip():
            yield json.loads(line)


def read_records_path(path: str) -> list[dict]:
    with open(path, encoding="utf-8") as f:
        return list(read_records(f))


def write_records(records: Iterable[dict], stream: IO[str]) -> None:
    for record in records:
        stream.write(json.dumps(record) + "\n")


def write_records_path(records: Iterable[dict], path: str) -> None:
    with open(path, "w", encoding="utf-8") as f:
        write_records(records, f)
