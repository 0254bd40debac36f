"""Quality-classifier estimator; isolated so the core pipeline path
does not pay the scikit-learn import cost."""

from __future__ import annotations

from typing import Iterable, Sequence

import numpy as np
from sklearn.base import BaseEstimator, ClassifierMixin
from sklearn.exceptions import NotFittedError
from sklearn.linear_model import LogisticRegression

from .quality import FEATURE_NAMES, QualityModel, feature_vector


class QualityClassifier(BaseEstimator, ClassifierMixin):
    """Logistic model over the named document features.

    fit(texts, labels) trains with a standard solver and freezes the
    coefficients into a QualityModel artifact available as ``model_``.
    """

    def __init__(self, threshold: float = 0.5, C: float = 1.0):
        self.threshold = threshold
        self.C = C

    def fit(self, X: Iterable[str], y: Sequence[int]) -> "QualityClassifier":
        matrix = np.array([feature_vector(t) for t in X], dtype=float)
        clf = LogisticRegression(C=self.C, max_iter=1000)
        clf.fit(matrix, np.asarray(y))
        self.model_ = QualityModel(
            feature_weights=dict(zip(FEATURE_NAMES, clf.coef_[0].tolist())),
            bias=float(clf.intercept_[0]),
            threshold=self.threshold,
        )
        return self

    def predict_proba_texts(self, X: Iterable[str]) -> list[float]:
        if not hasattr(self, "model_"):
            raise NotFittedError("QualityClassifier is not fitted")
        return [self.model_.score(t) for t in X]

    def predict(self, X: Iterable[str]) -> list[int]:
        return [int(p >= self.threshold) for p in self.predict_proba_texts(X)]
