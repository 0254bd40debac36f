"""Estimator-style wrappers over merge training and extension.

Separate module so the core tokenizer path does not pay the scikit-learn
import cost; the package __init__ loads these lazily.
"""

from __future__ import annotations

from typing import Iterable

from sklearn.base import BaseEstimator
from sklearn.exceptions import NotFittedError

from .core import Tokenizer
from .train import build_tokenizer, extend_vocabulary, train_merges


class MergeTrainer(BaseEstimator):
    """Estimator wrapper around merge training.

    fit(X) consumes an iterable of strings and exposes the learned
    artifacts as ``entries_``, ``merges_``, and an assembled ``tokenizer_``.
    """

    def __init__(self, num_merges: int = 1000, normalization: str = "nfkc"):
        self.num_merges = num_merges
        self.normalization = normalization

    def fit(self, X: Iterable[str], y=None) -> "MergeTrainer":
        texts = list(X)
        self.entries_, self.merges_ = train_merges(
            texts, self.num_merges, self.normalization
        )
        self.tokenizer_ = build_tokenizer(
            texts, self.num_merges, self.normalization
        )
        return self

    def transform(self, X: Iterable[str]) -> list[list[int]]:
        if not hasattr(self, "tokenizer_"):
            raise NotFittedError("MergeTrainer is not fitted")
        return self.tokenizer_.transform(X)


class VocabularyExtender(BaseEstimator):
    """Estimator wrapper around vocabulary extension.

    Takes the frozen base tokenizer as a parameter; fit(X) learns extension
    pieces from X and exposes the extended ``tokenizer_``.
    """

    def __init__(self, base: Tokenizer, budget: int = 16000):
        self.base = base
        self.budget = budget

    def fit(self, X: Iterable[str], y=None) -> "VocabularyExtender":
        self.tokenizer_ = extend_vocabulary(self.base, X, self.budget)
        self.added_ = (self.tokenizer_.vocabulary.total_size
                       - self.base.vocabulary.total_size)
        return self

    def transform(self, X: Iterable[str]) -> list[list[int]]:
        if not hasattr(self, "tokenizer_"):
            raise NotFittedError("VocabularyExtender is not fitted")
        return self.tokenizer_.transform(X)
