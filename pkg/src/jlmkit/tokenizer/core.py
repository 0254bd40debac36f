"""Byte-fallback subword tokenizer: encode, decode, CPT measurement.

Encoding walks whitespace-attached segments, applies merge rules greedily
by ascending rank, then covers the remaining symbols by greedy longest
match against the vocabulary; anything no piece covers expands into its
UTF-8 byte tokens. Byte fallback makes encode total: every valid Unicode
string round-trips exactly (modulo the configured normalization, which is
applied before encoding).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable

from .._textutils import nfkc, segment_words
from ..errors import (
    EmptyCorpusError,
    InvalidByteSequenceError,
    UnknownTokenIdError,
)
from .vocab import (
    BYTE_ID_OFFSET,
    MergeTable,
    Vocabulary,
    read_artifact,
    write_artifact,
)


@dataclass(frozen=True)
class Encoding:
    """Token ids plus byte offsets into the UTF-8 form of the encoded text.

    Offsets are contiguous, non-overlapping, and partition the byte range
    exactly; decode of ``ids`` reproduces the encoded text.
    """

    ids: tuple[int, ...]
    offsets: tuple[tuple[int, int], ...]

    def __len__(self) -> int:
        return len(self.ids)


@dataclass(frozen=True)
class CptReport:
    """Character-per-token measurement over a corpus."""

    char_count: int
    token_count: int

    @property
    def rate(self) -> float:
        return self.char_count / self.token_count

    def as_dict(self) -> dict:
        return {
            "char_count": self.char_count,
            "token_count": self.token_count,
            "rate": self.rate,
        }


def merge_word(symbols: list, pair: tuple[str, str], joined,
               surface=lambda s: s) -> list:
    """Replace occurrences of ``pair`` left-to-right, non-overlapping."""
    out = []
    i, n = 0, len(symbols)
    left, right = pair
    while i < n:
        if (i < n - 1 and surface(symbols[i]) == left
                and surface(symbols[i + 1]) == right):
            out.append(joined(symbols[i], symbols[i + 1]))
            i += 2
        else:
            out.append(symbols[i])
            i += 1
    return out


@dataclass(frozen=True)
class Tokenizer:
    """Immutable tokenizer; safe for concurrent encode/decode."""

    vocabulary: Vocabulary
    merges: MergeTable
    normalization: str = "nfkc"  # "none" or "nfkc"
    special_markers: tuple[str, ...] = ()
    _rank_map: dict = field(init=False, repr=False, compare=False)
    _max_piece_chars: int = field(init=False, repr=False, compare=False)
    _piece_first_chars: set = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if self.normalization not in ("none", "nfkc"):
            raise ValueError(f"unknown normalization {self.normalization!r}")
        markers = self.special_markers or self.vocabulary.special_markers()
        object.__setattr__(self, "special_markers", tuple(markers))
        object.__setattr__(self, "_rank_map", self.merges.rank_map())
        pieces = [e.piece for e in self.vocabulary.entries
                  if e.kind in ("base", "extension")]
        object.__setattr__(
            self, "_max_piece_chars",
            max((len(p) for p in pieces), default=1),
        )
        object.__setattr__(
            self, "_piece_first_chars", {p[0] for p in pieces if len(p) > 1}
        )

    # -- construction ------------------------------------------------------

    @classmethod
    def load(cls, path: str | Path) -> "Tokenizer":
        vocab, merges, normalization = read_artifact(path)
        return cls(vocabulary=vocab, merges=merges, normalization=normalization)

    def save(self, path: str | Path) -> None:
        write_artifact(path, self.vocabulary, self.merges, self.normalization)

    # -- encoding ----------------------------------------------------------

    def normalize(self, text: str) -> str:
        return nfkc(text) if self.normalization == "nfkc" else text

    def encode(self, text: str) -> Encoding:
        """Encode any valid Unicode string; never fails thanks to byte
        fallback. Offsets refer to the UTF-8 bytes of the normalized text."""
        text = self.normalize(text)
        if not text:
            return Encoding(ids=(), offsets=())

        ids: list[int] = []
        offsets: list[tuple[int, int]] = []
        byte_pos = 0
        for chunk, is_marker in self._split_markers(text):
            chunk_bytes = len(chunk.encode("utf-8"))
            if is_marker:
                ids.append(self.vocabulary.piece_to_id[chunk])
                offsets.append((byte_pos, byte_pos + chunk_bytes))
            else:
                self._encode_plain(chunk, byte_pos, ids, offsets)
            byte_pos += chunk_bytes
        return Encoding(ids=tuple(ids), offsets=tuple(offsets))

    def encode_batch(self, texts: Iterable[str]) -> list[Encoding]:
        return [self.encode(t) for t in texts]

    def transform(self, texts: Iterable[str]) -> list[list[int]]:
        """Estimator-style alias: texts in, id lists out."""
        return [list(self.encode(t).ids) for t in texts]

    def _split_markers(self, text: str):
        """Yield (chunk, is_marker) pieces; markers are matched atomically,
        leftmost occurrence first, longest marker on ties."""
        markers = [m for m in self.special_markers if m in text]
        if not markers:
            yield text, False
            return
        pos = 0
        while pos < len(text):
            best: tuple[int, str] | None = None
            for m in markers:
                at = text.find(m, pos)
                if at == -1:
                    continue
                if best is None or at < best[0] or (
                    at == best[0] and len(m) > len(best[1])
                ):
                    best = (at, m)
            if best is None:
                yield text[pos:], False
                return
            at, marker = best
            if at > pos:
                yield text[pos:at], False
            yield marker, True
            pos = at + len(marker)

    def _encode_plain(self, text: str, byte_base: int, ids: list[int],
                      offsets: list[tuple[int, int]]) -> None:
        piece_to_id = self.vocabulary.piece_to_id
        rank_map = self._rank_map
        char_pos = byte_base
        for word in segment_words(text):
            # symbols carry (surface, byte_start, byte_end)
            symbols: list[tuple[str, int, int]] = []
            pos = char_pos
            for ch in word:
                width = len(ch.encode("utf-8"))
                symbols.append((ch, pos, pos + width))
                pos += width
            char_pos = pos

            symbols = self._apply_merges(symbols, rank_map)
            self._emit_covered(symbols, ids, offsets, piece_to_id)

    def _emit_covered(self, symbols: list[tuple[str, int, int]],
                      ids: list[int], offsets: list[tuple[int, int]],
                      piece_to_id: dict) -> None:
        """Greedy longest-match of post-merge symbols against the
        vocabulary; symbols no piece covers expand to UTF-8 byte tokens."""
        max_len = self._max_piece_chars
        first_chars = self._piece_first_chars
        i, n = 0, len(symbols)
        while i < n:
            surface = symbols[i][0]
            if surface not in piece_to_id and surface[0] not in first_chars:
                self._emit_bytes(symbols[i], ids, offsets)
                i += 1
                continue
            best = None
            concat = ""
            for j in range(i, n):
                concat += symbols[j][0]
                if len(concat) > max_len:
                    break
                if concat in piece_to_id:
                    best = (j, concat)
            if best is None:
                self._emit_bytes(symbols[i], ids, offsets)
                i += 1
            else:
                j, piece = best
                ids.append(piece_to_id[piece])
                offsets.append((symbols[i][1], symbols[j][2]))
                i = j + 1

    @staticmethod
    def _emit_bytes(symbol: tuple[str, int, int], ids: list[int],
                    offsets: list[tuple[int, int]]) -> None:
        piece, start, _ = symbol
        for k, b in enumerate(piece.encode("utf-8")):
            ids.append(BYTE_ID_OFFSET + b)
            offsets.append((start + k, start + k + 1))

    @staticmethod
    def _apply_merges(symbols: list[tuple[str, int, int]],
                      rank_map: dict) -> list[tuple[str, int, int]]:
        if len(symbols) < 2 or not rank_map:
            return symbols

        def joined(a, b):
            return (a[0] + b[0], a[1], b[2])

        while True:
            best_rank = None
            best_pair = None
            for i in range(len(symbols) - 1):
                rank = rank_map.get((symbols[i][0], symbols[i + 1][0]))
                if rank is not None and (best_rank is None or rank < best_rank):
                    best_rank = rank
                    best_pair = (symbols[i][0], symbols[i + 1][0])
            if best_pair is None:
                return symbols
            symbols = merge_word(symbols, best_pair, joined,
                                 surface=lambda t: t[0])

    # -- decoding ----------------------------------------------------------

    def decode(self, ids: Iterable[int]) -> str:
        """Concatenate piece surfaces, reassembling byte-token runs into
        UTF-8. Raises on out-of-range ids or invalid byte sequences."""
        vocab = self.vocabulary
        total = vocab.total_size
        parts: list[str] = []
        byte_run = bytearray()

        def flush():
            if byte_run:
                try:
                    parts.append(byte_run.decode("utf-8"))
                except UnicodeDecodeError as exc:
                    raise InvalidByteSequenceError(
                        f"byte tokens do not form valid UTF-8: {exc}"
                    ) from exc
                byte_run.clear()

        for token_id in ids:
            if not 0 <= token_id < total:
                raise UnknownTokenIdError(token_id, total)
            entry = vocab.entry(token_id)
            if entry.kind == "byte":
                byte_run.append(token_id - BYTE_ID_OFFSET)
            else:
                flush()
                parts.append(entry.piece)
        flush()
        return "".join(parts)


def char_per_token_rate(tokenizer: Tokenizer,
                        corpus: Iterable[str]) -> CptReport:
    """Unicode scalar values per token across the corpus.

    Characters are counted on the text the tokenizer actually encodes
    (post-normalization), so the two counts stay mutually consistent.
    """
    char_count = 0
    token_count = 0
    for text in corpus:
        normalized = tokenizer.normalize(text)
        char_count += len(normalized)
        token_count += len(tokenizer.encode(text).ids)
    if char_count == 0:
        raise EmptyCorpusError(
            "corpus yielded no non-empty text to measure"
        )
    return CptReport(char_count=char_count, token_count=token_count)
