"""Answer normalization, exact match, and ROUGE-2."""

from __future__ import annotations

import re
import unicodedata
from collections import Counter
from functools import lru_cache

from .._textutils import lower_latin

_EMOJI_RANGES = ((0x1F300, 0x1FAFF), (0x2600, 0x27BF))
_WS_RUN = re.compile(r"\s+")


@lru_cache(maxsize=8192)
def _is_stripped(ch: str) -> bool:
    cp = ord(ch)
    if any(lo <= cp <= hi for lo, hi in _EMOJI_RANGES):
        return True
    return unicodedata.category(ch).startswith(("P", "S"))


def normalize_answer(text: str) -> str:
    """NFKC, drop punctuation/symbols/emoticons, collapse whitespace,
    strip, lowercase Latin. Idempotent."""
    text = unicodedata.normalize("NFKC", text)
    text = "".join(ch for ch in text if not _is_stripped(ch))
    text = _WS_RUN.sub(" ", text).strip()
    return lower_latin(text)


def exact_match(prediction: str, references: list[str]) -> bool:
    if not references:
        raise ValueError("references must be non-empty")
    normalized = normalize_answer(prediction)
    return any(normalize_answer(ref) == normalized for ref in references)


def rouge2(hypothesis: str, reference: str, segmenter: str = "char") -> float:
    """Bigram-overlap F1 with clipped multiset counting.

    ``char`` segmentation treats every Unicode scalar value as a unit
    (the Japanese mode); ``whitespace`` splits on whitespace tokens.
    Returns 0.0 when either side has fewer than two units.
    """
    if segmenter == "char":
        hyp_units: list[str] = list(hypothesis)
        ref_units: list[str] = list(reference)
    elif segmenter == "whitespace":
        hyp_units = hypothesis.split()
        ref_units = reference.split()
    else:
        raise ValueError(f"unknown segmenter {segmenter!r}")

    hyp_bigrams = Counter(zip(hyp_units, hyp_units[1:]))
    ref_bigrams = Counter(zip(ref_units, ref_units[1:]))
    if not hyp_bigrams or not ref_bigrams:
        return 0.0
    overlap = sum(min(count, ref_bigrams[gram])
                  for gram, count in hyp_bigrams.items())
    precision = overlap / sum(hyp_bigrams.values())
    recall = overlap / sum(ref_bigrams.values())
    if precision + recall == 0.0:
        return 0.0
    return 2 * precision * recall / (precision + recall)
