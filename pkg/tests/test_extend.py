"""Vocabulary extension: budget accounting, id stability, novelty filter."""

import pytest

from jlmkit.errors import EmptyCorpusError
from jlmkit.tokenizer import (
    Tokenizer,
    build_tokenizer,
    build_vocabulary,
    extend_vocabulary,
)
from jlmkit.tokenizer.vocab import MergeTable

JA_CORPUS = ["日本語の文章です。東京タワーは高い。",
             "日本語の文章を処理する。東京の天気は晴れ。"] * 3


@pytest.fixture(scope="module")
def base():
    return build_tokenizer(["plain ascii text corpus"], num_merges=4,
                           normalization="none")


def test_budget_zero_is_identity(base):
    ext = extend_vocabulary(base, JA_CORPUS, budget=0)
    assert ext.vocabulary == base.vocabulary
    assert ext.merges == base.merges
    assert ext.normalization == base.normalization


def test_budget_one_adds_single_piece(base):
    ext = extend_vocabulary(base, JA_CORPUS, budget=1)
    assert ext.vocabulary.total_size == base.vocabulary.total_size + 1
    added = ext.vocabulary.entries[-1]
    assert added.kind == "extension"
    assert added.id == base.vocabulary.total_size


def test_base_ids_and_ranks_preserved(base):
    ext = extend_vocabulary(base, JA_CORPUS, budget=50)
    for i, entry in enumerate(base.vocabulary.entries):
        assert ext.vocabulary.entries[i] == entry
    for i, rule in enumerate(base.merges.rules):
        assert ext.merges.rules[i] == rule


def test_extension_skips_pieces_already_in_base():
    vocab = build_vocabulary(["日", "本", "日本"], kind="base")
    base = Tokenizer(vocabulary=vocab, merges=MergeTable(),
                     normalization="none")
    ext = extend_vocabulary(base, ["日本", "東京"], budget=1)
    new = [e.piece for e in ext.vocabulary.entries if e.kind == "extension"]
    assert len(new) == 1
    assert new[0] not in ("日", "本", "日本")
    assert new[0] in "東京"


def test_added_is_min_of_budget_and_available():
    vocab = build_vocabulary(["a", "b"], kind="base")
    base = Tokenizer(vocabulary=vocab, merges=MergeTable(),
                     normalization="none")
    # corpus can only yield the merge result "ab" beyond the base
    ext = extend_vocabulary(base, ["ab"], budget=5)
    new = [e.piece for e in ext.vocabulary.entries if e.kind == "extension"]
    assert new == ["ab"]


def test_empty_corpus_with_positive_budget(base):
    with pytest.raises(EmptyCorpusError):
        extend_vocabulary(base, [], budget=3)


def test_base_only_text_encodes_identically(base):
    ext = extend_vocabulary(base, JA_CORPUS, budget=100)
    text = "plain ascii text corpus"
    assert base.encode(text).ids == ext.encode(text).ids


def test_extension_merge_ranks_follow_base(base):
    ext = extend_vocabulary(base, JA_CORPUS, budget=100)
    n_base = len(base.merges.rules)
    ranks = [r.rank for r in ext.merges.rules]
    assert ranks == list(range(len(ranks)))
    assert ranks[:n_base] == [r.rank for r in base.merges.rules]


def test_token_count_never_increases(base):
    ext = extend_vocabulary(base, JA_CORPUS, budget=200)
    for text in JA_CORPUS + ["ascii only", "混ぜた mixed テキスト"]:
        assert len(ext.encode(text).ids) <= len(base.encode(text).ids)
