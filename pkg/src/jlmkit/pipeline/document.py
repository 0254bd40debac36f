"""Corpus records, per-stage outcomes, and JSONL input/output."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, TextIO

STAGES = ("normalize", "pii", "exact_dedup", "near_dedup", "heuristics",
          "classifier")

VERDICTS = ("kept", "dropped", "modified")


@dataclass
class Document:
    doc_id: str
    text: str
    meta: dict = field(default_factory=dict)


@dataclass(frozen=True)
class StageOutcome:
    doc_id: str
    stage: str
    verdict: str
    reason: str = ""
    detail: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.stage not in STAGES:
            raise ValueError(f"unknown stage {self.stage!r}")
        if self.verdict not in VERDICTS:
            raise ValueError(f"unknown verdict {self.verdict!r}")
        if self.verdict == "dropped" and not self.reason:
            raise ValueError("dropped outcomes need a reason")


def parse_document_line(line: str) -> Document:
    """Parse one JSONL record; raises ValueError on malformed input."""
    row = json.loads(line)
    if not isinstance(row, dict):
        raise ValueError("record is not an object")
    doc_id = row.get("id")
    text = row.get("text")
    if not isinstance(doc_id, str) or not doc_id:
        raise ValueError("missing or empty 'id'")
    if not isinstance(text, str):
        raise ValueError("missing 'text'")
    meta = row.get("meta", {})
    if not isinstance(meta, dict):
        raise ValueError("'meta' is not an object")
    return Document(doc_id=doc_id, text=text, meta=meta)


def read_documents(path: str | Path) -> tuple[list[Document], list[tuple[int, str]]]:
    """Read a JSONL corpus. Returns (documents, errors) where each error is
    (line_number, message); unreadable records never abort the read."""
    documents: list[Document] = []
    errors: list[tuple[int, str]] = []
    with open(path, encoding="utf-8", errors="replace") as handle:
        for line_no, line in enumerate(handle, start=1):
            if not line.strip():
                continue
            try:
                documents.append(parse_document_line(line))
            except (ValueError, json.JSONDecodeError) as exc:
                errors.append((line_no, str(exc)))
    return documents, errors


def document_to_json(doc: Document) -> str:
    row: dict = {"id": doc.doc_id, "text": doc.text}
    if doc.meta:
        row["meta"] = doc.meta
    return json.dumps(row, ensure_ascii=False, sort_keys=True,
                      separators=(",", ":"))


def write_documents(docs: Iterable[Document], handle: TextIO) -> int:
    count = 0
    for doc in docs:
        handle.write(document_to_json(doc) + "\n")
        count += 1
    return count
