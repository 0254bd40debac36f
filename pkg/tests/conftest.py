import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from jlmkit.tokenizer import Tokenizer, build_vocabulary
from jlmkit.tokenizer.vocab import MergeRule, MergeTable

FIXTURES = Path(__file__).parent / "fixtures"


@pytest.fixture(scope="session")
def fixtures_dir() -> Path:
    return FIXTURES


@pytest.fixture(scope="session")
def ascii_tokenizer() -> Tokenizer:
    """Specials + bytes + printable ASCII single-char pieces, no merges.

    Every non-ASCII character byte-falls-back, which makes this the
    reference low-CPT tokenizer for Japanese text.
    """
    pieces = [chr(c) for c in range(0x20, 0x7F)]
    vocab = build_vocabulary(pieces, kind="base")
    return Tokenizer(vocabulary=vocab, merges=MergeTable(),
                     normalization="none")


@pytest.fixture(scope="session")
def ab_tokenizer() -> Tokenizer:
    """Minimal vocabulary {bytes, a, b, ab} with merge (a,b) -> ab."""
    vocab = build_vocabulary(["a", "b", "ab"], kind="base")
    merges = MergeTable(rules=(MergeRule(left="a", right="b", rank=0),))
    return Tokenizer(vocabulary=vocab, merges=merges, normalization="none")
