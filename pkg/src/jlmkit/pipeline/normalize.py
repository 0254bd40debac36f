"""Text normalization stage: NFKC, line endings, whitespace, controls."""

from __future__ import annotations

import unicodedata

from .document import Document, StageOutcome

_KEEP_CONTROLS = {"\t", "\n"}


def normalize_text(text: str) -> str:
    """NFKC; CR/CRLF to LF; strip other control characters; strip each
    line; collapse runs of three or more blank lines down to two.

    The function is a fixpoint: normalizing twice equals normalizing once.
    """
    text = unicodedata.normalize("NFKC", text)
    text = text.replace("\r\n", "\n").replace("\r", "\n")
    text = "".join(
        ch for ch in text
        if ch in _KEEP_CONTROLS or unicodedata.category(ch) != "Cc"
    )
    lines = [line.strip() for line in text.split("\n")]

    out: list[str] = []
    blank_run = 0
    for line in lines:
        if line == "":
            blank_run += 1
            if blank_run <= 2:
                out.append(line)
        else:
            blank_run = 0
            out.append(line)
    return "\n".join(out)


def normalize_document(doc: Document) -> tuple[Document, StageOutcome]:
    new_text = normalize_text(doc.text)
    if new_text == doc.text:
        outcome = StageOutcome(doc_id=doc.doc_id, stage="normalize",
                               verdict="kept")
        return doc, outcome
    outcome = StageOutcome(
        doc_id=doc.doc_id, stage="normalize", verdict="modified",
        reason="text normalized",
        detail={"chars_before": len(doc.text), "chars_after": len(new_text)},
    )
    return Document(doc_id=doc.doc_id, text=new_text, meta=doc.meta), outcome
