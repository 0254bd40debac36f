"""PII redaction: email addresses and phone numbers.

Only the attested categories ship; the category table is the extension
point if a deployment needs more. Patterns are deliberately conservative:
digit lookarounds keep postal codes, dates, and prices untouched.
"""

from __future__ import annotations

import re

from .document import Document, StageOutcome

EMAIL_RE = re.compile(
    r"[A-Za-z0-9][A-Za-z0-9._%+-]*@"
    r"[A-Za-z0-9](?:[A-Za-z0-9-]*[A-Za-z0-9])?"
    r"(?:\.[A-Za-z0-9](?:[A-Za-z0-9-]*[A-Za-z0-9])?)*"
    r"\.[A-Za-z]{2,}"
)

# Japanese mobile 0X0-XXXX-XXXX, Japanese fixed 0X-XXXX-XXXX, and
# international +CC forms; separators are '-', space, or nothing.
PHONE_RE = re.compile(
    r"(?<![\d+-])"
    r"(?:"
    r"0\d0[-\s]?\d{4}[-\s]?\d{4}"          # mobile, 11 digits
    r"|0\d[-\s]?\d{4}[-\s]?\d{4}"          # fixed line, 10 digits
    r"|\+\d{1,3}(?:[-\s]?\d{1,4}){2,4}"    # international
    r")"
    r"(?!\d)"
)

# category name -> (pattern, replacement), applied in order
CATEGORIES: tuple[tuple[str, re.Pattern, str], ...] = (
    ("email", EMAIL_RE, "[EMAIL]"),
    ("phone", PHONE_RE, "[PHONE]"),
)


def redact_text(text: str) -> tuple[str, dict[str, int]]:
    counts: dict[str, int] = {}
    for name, pattern, replacement in CATEGORIES:
        text, n = pattern.subn(replacement, text)
        counts[name] = n
    return text, counts


def redact_pii(doc: Document) -> tuple[Document, StageOutcome]:
    new_text, counts = redact_text(doc.text)
    total = sum(counts.values())
    if total == 0:
        outcome = StageOutcome(doc_id=doc.doc_id, stage="pii",
                               verdict="kept", detail=counts)
        return doc, outcome
    outcome = StageOutcome(
        doc_id=doc.doc_id, stage="pii", verdict="modified",
        reason=f"redacted {total} span(s)", detail=counts,
    )
    return Document(doc_id=doc.doc_id, text=new_text, meta=doc.meta), outcome
