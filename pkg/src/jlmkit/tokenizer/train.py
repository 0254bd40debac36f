"""Merge training and budget-constrained vocabulary extension.

Training is iterative highest-frequency pair merging over whitespace
segments. Pair counts include overlapping occurrences (a plain scan of
adjacent positions), ties break on the lexicographically smallest
(left, right) pair, and learned pieces are capped at MAX_PIECE_CHARS
scalar values. The incremental trainer below is an optimization of the
obvious rescan-everything algorithm and must stay output-identical to it.
"""

from __future__ import annotations

import heapq
from collections import Counter
from typing import Iterable, Iterator

from .._textutils import nfkc, segment_words
from ..errors import EmptyCorpusError
from .core import Tokenizer, merge_word
from .vocab import (
    CORE_SIZE,
    MergeRule,
    MergeTable,
    TokenEntry,
    Vocabulary,
    build_vocabulary,
    parse_byte_piece,
)

MAX_PIECE_CHARS = 16


def _word_frequencies(corpus: Iterable[str], normalization: str,
                      char_counts: Counter) -> Counter:
    """Segment the corpus into whitespace-prefixed words, aggregating
    identical segments. Also tallies per-character frequencies."""
    word_freqs: Counter = Counter()
    for text in corpus:
        if normalization == "nfkc":
            text = nfkc(text)
        if not text:
            continue
        char_counts.update(text)
        word_freqs.update(segment_words(text))
    return word_freqs


class _PairMerger:
    """Incrementally yields the next best merge pair.

    Maintains exact global pair counts (overlapping occurrences included)
    via per-word recounts, and a lazy max-heap keyed on
    (-count, (left, right)) so selection is count-descending with
    lexicographic tie-break.
    """

    def __init__(self, word_freqs: Counter, max_piece_chars: int = MAX_PIECE_CHARS):
        self.max_piece_chars = max_piece_chars
        self.words: list[list[str]] = []
        self.freqs: list[int] = []
        self.pair_counts: dict[tuple[str, str], int] = {}
        self.pair_words: dict[tuple[str, str], set[int]] = {}
        self.heap: list[tuple[int, tuple[str, str]]] = []

        for word, freq in word_freqs.items():
            if len(word) < 2:
                continue
            wi = len(self.words)
            symbols = list(word)
            self.words.append(symbols)
            self.freqs.append(freq)
            for pair in zip(symbols, symbols[1:]):
                self.pair_counts[pair] = self.pair_counts.get(pair, 0) + freq
                self.pair_words.setdefault(pair, set()).add(wi)
        for pair, count in self.pair_counts.items():
            heapq.heappush(self.heap, (-count, pair))

    def __iter__(self) -> Iterator[tuple[str, str]]:
        return self

    def __next__(self) -> tuple[str, str]:
        while self.heap:
            neg_count, pair = heapq.heappop(self.heap)
            current = self.pair_counts.get(pair, 0)
            if current <= 0 or current != -neg_count:
                continue  # stale entry
            if len(pair[0]) + len(pair[1]) > self.max_piece_chars:
                continue  # over the piece-length cap, never eligible
            self._apply(pair)
            return pair
        raise StopIteration

    def _apply(self, pair: tuple[str, str]) -> None:
        joined = "".join
        for wi in sorted(self.pair_words.get(pair, ())):
            word = self.words[wi]
            freq = self.freqs[wi]
            old = Counter(zip(word, word[1:]))
            new_word = merge_word(word, pair, lambda a, b: a + b)
            self.words[wi] = new_word
            new = Counter(zip(new_word, new_word[1:]))
            for p in old.keys() | new.keys():
                delta = new.get(p, 0) - old.get(p, 0)
                if new.get(p, 0) == 0:
                    members = self.pair_words.get(p)
                    if members is not None:
                        members.discard(wi)
                elif old.get(p, 0) == 0:
                    self.pair_words.setdefault(p, set()).add(wi)
                if delta == 0:
                    continue
                count = self.pair_counts.get(p, 0) + delta * freq
                if count <= 0:
                    self.pair_counts.pop(p, None)
                else:
                    self.pair_counts[p] = count
                    heapq.heappush(self.heap, (-count, p))
        self.pair_words.pop(pair, None)


def train_merges(corpus: Iterable[str], num_merges: int,
                 normalization: str = "nfkc") -> tuple[list[TokenEntry], MergeTable]:
    """Learn up to ``num_merges`` merge rules from the corpus.

    Returns candidate vocabulary entries (corpus characters ordered by
    descending frequency, then merge results in learned order) and the
    ordered merge table. Deterministic for a fixed corpus byte stream.
    """
    if num_merges < 0:
        raise ValueError("num_merges must be >= 0")
    char_counts: Counter = Counter()
    word_freqs = _word_frequencies(corpus, normalization, char_counts)
    if not word_freqs and num_merges > 0:
        raise EmptyCorpusError("cannot train merges on an empty corpus")

    rules: list[MergeRule] = []
    if num_merges > 0:
        for pair in _PairMerger(word_freqs):
            rules.append(MergeRule(left=pair[0], right=pair[1],
                                   rank=len(rules)))
            if len(rules) >= num_merges:
                break

    pieces = [ch for ch, _ in sorted(char_counts.items(),
                                     key=lambda kv: (-kv[1], kv[0]))]
    seen = set(pieces)
    for rule in rules:
        if rule.result not in seen:
            pieces.append(rule.result)
            seen.add(rule.result)

    entries = [
        TokenEntry(piece=p, id=CORE_SIZE + i, rank=CORE_SIZE + i, kind="base")
        for i, p in enumerate(pieces)
    ]
    return entries, MergeTable(rules=tuple(rules))


def build_tokenizer(corpus: Iterable[str], num_merges: int,
                    normalization: str = "nfkc") -> Tokenizer:
    """Train a fresh tokenizer: specials + byte fallback + learned pieces."""
    entries, merges = train_merges(corpus, num_merges, normalization)
    usable = [e.piece for e in entries if parse_byte_piece(e.piece) is None]
    vocab = build_vocabulary(usable, kind="base")
    rules = _resolvable_rules(merges.rules, vocab, existing=None)
    return Tokenizer(vocabulary=vocab, merges=MergeTable(rules=tuple(rules)),
                     normalization=normalization)


def _resolvable_rules(candidates: Iterable[MergeRule], vocab: Vocabulary,
                      existing: MergeTable | None) -> list[MergeRule]:
    """Keep rules whose pieces all resolve, renumbering ranks to continue
    after ``existing`` and skipping pairs the existing table already has."""
    rules = list(existing.rules) if existing is not None else []
    known_pairs = {(r.left, r.right) for r in rules}
    next_rank = rules[-1].rank + 1 if rules else 0
    for rule in candidates:
        if (rule.left, rule.right) in known_pairs:
            continue
        if all(p in vocab for p in (rule.left, rule.right, rule.result)):
            rules.append(MergeRule(left=rule.left, right=rule.right,
                                   rank=next_rank))
            known_pairs.add((rule.left, rule.right))
            next_rank += 1
    return rules


def extend_vocabulary(base: Tokenizer, corpus: Iterable[str],
                      budget: int) -> Tokenizer:
    """Graft up to ``budget`` corpus-derived pieces onto a frozen base.

    Candidates are corpus characters by descending frequency, then merge
    results in learned order; pieces already in the base are skipped. Base
    ids, ranks, and merge rules are preserved untouched, so any text whose
    tokenization does not involve the new pieces encodes identically.
    """
    if budget < 0:
        raise ValueError("budget must be >= 0")
    if budget == 0:
        return Tokenizer(vocabulary=base.vocabulary, merges=base.merges,
                         normalization=base.normalization)

    char_counts: Counter = Counter()
    word_freqs = _word_frequencies(corpus, base.normalization, char_counts)
    if not word_freqs:
        raise EmptyCorpusError("cannot extend vocabulary from an empty corpus")

    def is_candidate(piece: str) -> bool:
        return piece not in base.vocabulary and parse_byte_piece(piece) is None

    new_pieces: list[str] = [
        ch for ch, _ in sorted(char_counts.items(), key=lambda kv: (-kv[1], kv[0]))
        if is_candidate(ch)
    ]
    new_pieces = new_pieces[:budget]
    taken = set(new_pieces)

    learned: list[MergeRule] = []
    if len(new_pieces) < budget:
        merger = _PairMerger(word_freqs)
        for pair in merger:
            rule = MergeRule(left=pair[0], right=pair[1], rank=len(learned))
            learned.append(rule)
            result = rule.result
            if result not in taken and is_candidate(result):
                new_pieces.append(result)
                taken.add(result)
                if len(new_pieces) >= budget:
                    break

    vocab = build_vocabulary(new_pieces, kind="extension",
                             base=base.vocabulary)
    rules = _resolvable_rules(learned, vocab, existing=base.merges)
    return Tokenizer(vocabulary=vocab, merges=MergeTable(rules=tuple(rules)),
                     normalization=base.normalization)
