"""Merge training against the brute-force rescan oracle."""

import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from jlmkit.errors import EmptyCorpusError
from jlmkit.tokenizer import train_merges

from oracles import oracle_train_merges


def learned_pairs(corpus, num_merges, normalization="none"):
    _, table = train_merges(corpus, num_merges, normalization)
    return [(r.left, r.right) for r in table.rules]


class TestTrainExamples:
    def test_abab_single_merge(self):
        # (a,b) occurs twice, (b,a) once
        assert learned_pairs(["abab"], 1) == [("a", "b")]

    def test_zero_budget_yields_no_rules(self):
        assert learned_pairs(["abab"], 0) == []

    def test_aaaa_two_merges_recounts_after_first(self):
        pairs = learned_pairs(["aaaa"], 2)
        assert pairs[0] == ("a", "a")
        assert pairs == oracle_train_merges(["aaaa"], 2, "none")

    def test_empty_corpus_raises(self):
        with pytest.raises(EmptyCorpusError):
            train_merges([], 3)
        with pytest.raises(EmptyCorpusError):
            train_merges(["", "   "][:1], 3)

    def test_tie_break_lexicographic(self):
        # "ba" and "ab" pairs occur once each -> (a,b) wins on lex order
        assert learned_pairs(["ab", "ba"], 1) == [("a", "b")]

    def test_merges_do_not_cross_whitespace(self):
        pairs = learned_pairs(["a b a b a b"], 3)
        assert ("a", "b") not in pairs

    def test_alphabet_ordered_by_frequency(self):
        entries, _ = train_merges(["bbba"], 0, "none")
        assert [e.piece for e in entries][:2] == ["b", "a"]


class TestTrainerOracleEquivalence:
    ALPHABETS = ["ab", "abc", "あいう", "日本語の", "ab あ"]

    def test_fifty_random_corpora_match_oracle(self):
        rng = random.Random(20240315)
        for trial in range(50):
            alphabet = self.ALPHABETS[trial % len(self.ALPHABETS)]
            n_texts = rng.randint(1, 4)
            corpus = [
                "".join(rng.choice(alphabet)
                        for _ in range(rng.randint(1, 200 // n_texts)))
                for _ in range(n_texts)
            ]
            num_merges = rng.randint(0, 10)
            got = learned_pairs(corpus, num_merges)
            want = oracle_train_merges(corpus, num_merges, "none")
            assert got == want, f"trial {trial}: {corpus!r} x{num_merges}"

    @given(
        st.lists(st.text(alphabet="abcあ ", min_size=1, max_size=60),
                 min_size=1, max_size=3),
        st.integers(min_value=0, max_value=8),
    )
    @settings(max_examples=150, deadline=None)
    def test_property_matches_oracle(self, corpus, num_merges):
        if not any(s.strip() for s in corpus):
            return
        assert learned_pairs(corpus, num_merges) == oracle_train_merges(
            corpus, num_merges, "none"
        )

    def test_piece_length_cap_respected(self):
        # all-same-character corpus doubles piece length each merge;
        # the cap stops growth at 16 characters
        pairs = learned_pairs(["a" * 64], 10)
        for left, right in pairs:
            assert len(left) + len(right) <= 16
        assert pairs == oracle_train_merges(["a" * 64], 10, "none")

    def test_determinism_across_runs(self):
        corpus = ["日本語のテキスト、日本語の処理", "テキストの処理"]
        first = train_merges(corpus, 8)
        second = train_merges(corpus, 8)
        assert first == second
