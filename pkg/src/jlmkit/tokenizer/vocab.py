"""Vocabulary, merge table, and the versioned on-disk artifact format.

The vocabulary is a dense, append-only inventory: ids 0-2 are reserved
special markers, ids 3-258 the 256 byte-fallback tokens, then base pieces,
then extension pieces grafted on without remapping anything below them.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from pathlib import Path

from ..errors import VocabularyFormatError

SPECIAL_PIECES = ("<pad>", "<s>", "</s>")
NUM_SPECIALS = len(SPECIAL_PIECES)
BYTE_ID_OFFSET = NUM_SPECIALS  # byte tokens occupy ids 3..258
CORE_SIZE = NUM_SPECIALS + 256

KINDS = ("special", "byte", "base", "extension")

_BYTE_PIECE_RE = re.compile(r"^<0x[0-9A-F]{2}>$")


def byte_piece(value: int) -> str:
    """Canonical 6-character surface for a byte token, e.g. ``<0x0A>``."""
    return f"<0x{value:02X}>"


def parse_byte_piece(piece: str) -> int | None:
    if _BYTE_PIECE_RE.match(piece):
        return int(piece[3:5], 16)
    return None


@dataclass(frozen=True)
class TokenEntry:
    piece: str
    id: int
    rank: int
    kind: str  # one of KINDS


@dataclass(frozen=True)
class MergeRule:
    left: str
    right: str
    rank: int

    @property
    def result(self) -> str:
        return self.left + self.right


@dataclass(frozen=True)
class MergeTable:
    rules: tuple[MergeRule, ...] = ()

    def __len__(self) -> int:
        return len(self.rules)

    def rank_map(self) -> dict[tuple[str, str], int]:
        return {(r.left, r.right): r.rank for r in self.rules}

    def next_rank(self) -> int:
        return self.rules[-1].rank + 1 if self.rules else 0


@dataclass(frozen=True)
class Vocabulary:
    entries: tuple[TokenEntry, ...]
    piece_to_id: dict[str, int] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(
            self, "piece_to_id", {e.piece: e.id for e in self.entries}
        )

    @property
    def total_size(self) -> int:
        return len(self.entries)

    @property
    def base_size(self) -> int:
        return sum(1 for e in self.entries if e.kind != "extension")

    def __contains__(self, piece: str) -> bool:
        return piece in self.piece_to_id

    def entry(self, token_id: int) -> TokenEntry:
        return self.entries[token_id]

    def special_markers(self) -> tuple[str, ...]:
        return tuple(e.piece for e in self.entries if e.kind == "special")


def core_entries() -> list[TokenEntry]:
    """The fixed prefix every vocabulary shares: specials then 256 bytes."""
    entries = [
        TokenEntry(piece=p, id=i, rank=i, kind="special")
        for i, p in enumerate(SPECIAL_PIECES)
    ]
    entries.extend(
        TokenEntry(piece=byte_piece(b), id=BYTE_ID_OFFSET + b,
                   rank=BYTE_ID_OFFSET + b, kind="byte")
        for b in range(256)
    )
    return entries


def build_vocabulary(pieces: list[str], kind: str = "base",
                     base: Vocabulary | None = None) -> Vocabulary:
    """Append ``pieces`` to ``base`` (or to a fresh core) as ``kind`` entries.

    Ids and ranks continue densely after the existing entries; existing
    entries are reused untouched, so base ids never move.
    """
    entries = list(base.entries) if base is not None else core_entries()
    seen = {e.piece for e in entries}
    for piece in pieces:
        if piece in seen:
            raise VocabularyFormatError(f"duplicate piece {piece!r}")
        next_id = len(entries)
        entries.append(TokenEntry(piece=piece, id=next_id, rank=next_id,
                                  kind=kind))
        seen.add(piece)
    vocab = Vocabulary(entries=tuple(entries))
    validate_vocabulary(vocab)
    return vocab


def validate_vocabulary(vocab: Vocabulary) -> None:
    ids = [e.id for e in vocab.entries]
    if ids != list(range(len(ids))):
        raise VocabularyFormatError("ids are not dense 0..total_size-1")
    pieces = [e.piece for e in vocab.entries]
    if len(set(pieces)) != len(pieces):
        raise VocabularyFormatError("duplicate pieces in vocabulary")
    if any(not e.piece for e in vocab.entries):
        raise VocabularyFormatError("empty piece surface")
    byte_values = sorted(
        v for e in vocab.entries if e.kind == "byte"
        for v in [parse_byte_piece(e.piece)] if v is not None
    )
    if byte_values != list(range(256)):
        raise VocabularyFormatError("byte tokens must cover 0x00-0xFF exactly")
    for e in vocab.entries:
        if (parse_byte_piece(e.piece) is not None) != (e.kind == "byte"):
            raise VocabularyFormatError(
                f"piece {e.piece!r} has byte surface iff kind=byte violated"
            )
        if e.kind not in KINDS:
            raise VocabularyFormatError(f"unknown kind {e.kind!r}")
    base_size = vocab.base_size
    for e in vocab.entries:
        if e.kind == "extension" and e.id < base_size:
            raise VocabularyFormatError(
                f"extension piece {e.piece!r} below base_size {base_size}"
            )


def validate_merges(merges: MergeTable, vocab: Vocabulary) -> None:
    prev_rank = -1
    for rule in merges.rules:
        if rule.rank <= prev_rank:
            raise VocabularyFormatError(
                f"merge ranks not strictly increasing at rank {rule.rank}"
            )
        prev_rank = rule.rank
        for piece in (rule.left, rule.right, rule.result):
            if piece not in vocab:
                raise VocabularyFormatError(
                    f"merge rule references unknown piece {piece!r}"
                )


ARTIFACT_VERSION = 1


def artifact_to_json(vocab: Vocabulary, merges: MergeTable,
                     normalization: str) -> str:
    doc = {
        "version": ARTIFACT_VERSION,
        "normalization": normalization,
        "pieces": [
            {"piece": e.piece, "id": e.id, "rank": e.rank, "kind": e.kind}
            for e in vocab.entries
        ],
        "merges": [
            {"left": r.left, "right": r.right, "rank": r.rank}
            for r in merges.rules
        ],
    }
    # canonical form so identical tokenizers serialize to identical bytes
    return json.dumps(doc, ensure_ascii=False, sort_keys=True,
                      separators=(",", ":")) + "\n"


def artifact_from_json(text: str) -> tuple[Vocabulary, MergeTable, str]:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise VocabularyFormatError(f"not valid JSON: {exc}") from exc
    if not isinstance(doc, dict):
        raise VocabularyFormatError("artifact root must be an object")
    version = doc.get("version")
    if version != ARTIFACT_VERSION:
        raise VocabularyFormatError(
            f"unknown artifact version {version!r} (expected {ARTIFACT_VERSION})"
        )
    normalization = doc.get("normalization")
    if normalization not in ("none", "nfkc"):
        raise VocabularyFormatError(
            f"unknown normalization {normalization!r}"
        )
    try:
        entries = tuple(
            TokenEntry(piece=p["piece"], id=p["id"], rank=p["rank"],
                       kind=p["kind"])
            for p in sorted(doc["pieces"], key=lambda p: p["id"])
        )
        rules = tuple(
            MergeRule(left=m["left"], right=m["right"], rank=m["rank"])
            for m in sorted(doc["merges"], key=lambda m: m["rank"])
        )
    except (KeyError, TypeError) as exc:
        raise VocabularyFormatError(f"malformed artifact field: {exc}") from exc
    vocab = Vocabulary(entries=entries)
    merges = MergeTable(rules=rules)
    validate_vocabulary(vocab)
    validate_merges(merges, vocab)
    return vocab, merges, normalization


def write_artifact(path: str | Path, vocab: Vocabulary, merges: MergeTable,
                   normalization: str) -> None:
    Path(path).write_text(
        artifact_to_json(vocab, merges, normalization), encoding="utf-8"
    )


def read_artifact(path: str | Path) -> tuple[Vocabulary, MergeTable, str]:
    return artifact_from_json(Path(path).read_text(encoding="utf-8"))
