from .core import CptReport, Encoding, Tokenizer, char_per_token_rate
from .train import build_tokenizer, extend_vocabulary, train_merges
from .vocab import (
    MergeRule,
    MergeTable,
    TokenEntry,
    Vocabulary,
    build_vocabulary,
    byte_piece,
    read_artifact,
    write_artifact,
)

__all__ = [
    "CptReport",
    "Encoding",
    "MergeRule",
    "MergeTable",
    "MergeTrainer",
    "TokenEntry",
    "Tokenizer",
    "Vocabulary",
    "VocabularyExtender",
    "build_tokenizer",
    "build_vocabulary",
    "byte_piece",
    "char_per_token_rate",
    "extend_vocabulary",
    "read_artifact",
    "train_merges",
    "write_artifact",
]

_LAZY = {"MergeTrainer", "VocabularyExtender"}


def __getattr__(name: str):
    # estimator wrappers pull in scikit-learn; load them on first use
    if name in _LAZY:
        from . import estimators

        return getattr(estimators, name)
    raise AttributeError(f"module {__name__!r} has no attribute {name!r}")
