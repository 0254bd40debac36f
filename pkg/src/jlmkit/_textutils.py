"""Shared text helpers: segmentation, normalization, character classes."""

from __future__ import annotations

import unicodedata
from functools import lru_cache


def nfkc(text: str) -> str:
    return unicodedata.normalize("NFKC", text)


def segment_words(text: str) -> list[str]:
    """Split text at whitespace boundaries, attaching each whitespace run
    to the word that follows it as a prefix.

    The segments partition the input exactly: ``"".join(segments) == text``.
    A trailing whitespace run with no word after it forms its own segment.
    CJK runs contain no whitespace and therefore stay intact.
    """
    segments: list[str] = []
    i, n = 0, len(text)
    while i < n:
        j = i
        while j < n and text[j].isspace():
            j += 1
        if j == n:
            segments.append(text[i:n])
            break
        k = j
        while k < n and not text[k].isspace():
            k += 1
        segments.append(text[i:k])
        i = k
    return segments


_KANA_RANGES = (
    (0x3041, 0x309F),  # hiragana
    (0x30A0, 0x30FF),  # katakana
    (0x31F0, 0x31FF),  # katakana phonetic extensions
    (0xFF66, 0xFF9D),  # half-width katakana
)

_KANJI_RANGES = (
    (0x4E00, 0x9FFF),   # CJK unified ideographs
    (0x3400, 0x4DBF),   # extension A
    (0x20000, 0x2A6DF),  # extension B
    (0xF900, 0xFAFF),   # compatibility ideographs
)

# Punctuation commonly found in clean Japanese/English prose. Characters in
# this set do not count toward the symbol ratio.
_COMMON_PUNCT = set(
    ".,!?;:'\"()[]{}<>-_/\\|@#%&*+=~^`・ー〜…‥「」『』（）【】〈〉《》、。！？：；　"
    "“”‘’—–‐©®™§±×÷°"
)


def is_kana(ch: str) -> bool:
    cp = ord(ch)
    return any(lo <= cp <= hi for lo, hi in _KANA_RANGES)


def is_kanji(ch: str) -> bool:
    cp = ord(ch)
    return any(lo <= cp <= hi for lo, hi in _KANJI_RANGES)


@lru_cache(maxsize=4096)
def is_symbol_char(ch: str) -> bool:
    """True for characters that count toward the symbol-ratio heuristic:
    neither letters, digits, CJK, kana, whitespace, nor common punctuation."""
    if ch.isspace() or ch in _COMMON_PUNCT:
        return False
    cat = unicodedata.category(ch)
    if cat.startswith(("L", "N")):
        return False
    return True


def symbol_ratio(text: str) -> float:
    if not text:
        return 0.0
    return sum(1 for ch in text if is_symbol_char(ch)) / len(text)


def repetition_ratio(text: str, n: int = 4) -> float:
    """1 - distinct n-grams / total n-grams; 0.0 when the text is too short
    to have any n-gram."""
    total = len(text) - n + 1
    if total <= 0:
        return 0.0
    grams = {text[i : i + n] for i in range(total)}
    return 1.0 - len(grams) / total


def digit_ratio(text: str) -> float:
    if not text:
        return 0.0
    return sum(1 for ch in text if ch.isdigit()) / len(text)


def kana_kanji_ratio(text: str) -> float:
    """Fraction of CJK characters that are kana; 0.0 when no CJK present."""
    kana = sum(1 for ch in text if is_kana(ch))
    kanji = sum(1 for ch in text if is_kanji(ch))
    if kana + kanji == 0:
        return 0.0
    return kana / (kana + kanji)


@lru_cache(maxsize=4096)
def _lower_latin_char(ch: str) -> str:
    if ch.isascii():
        return ch.lower()
    if "LATIN" in unicodedata.name(ch, ""):
        return ch.lower()
    return ch


def lower_latin(text: str) -> str:
    """Lowercase Latin-script letters only, leaving other scripts alone."""
    return "".join(_lower_latin_char(ch) for ch in text)
