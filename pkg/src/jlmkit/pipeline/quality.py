"""Heuristic filters, document features, and the logistic quality model.

The trainable estimator wrapper lives in estimators.py so this path
stays free of the scikit-learn import cost.
"""

from __future__ import annotations

import json
import math
import re
from dataclasses import dataclass
from pathlib import Path

from .._textutils import (
    digit_ratio,
    kana_kanji_ratio,
    repetition_ratio,
    symbol_ratio,
)
from ..errors import ConfigError
from .config import PipelineConfig
from .document import Document, StageOutcome

# -- heuristic filters -------------------------------------------------------


def heuristic_filters(doc: Document, config: PipelineConfig) -> StageOutcome:
    """Drop on the first violated rule: length bounds, symbol ratio,
    4-gram repetition ratio."""
    text = doc.text
    stats = {
        "chars": len(text),
        "symbol_ratio": symbol_ratio(text),
        "repetition_ratio": repetition_ratio(text),
    }
    reason = None
    if len(text) < config.min_chars:
        reason = "min length"
    elif len(text) > config.max_chars:
        reason = "max length"
    elif stats["symbol_ratio"] > config.max_symbol_ratio:
        reason = "symbol ratio"
    elif stats["repetition_ratio"] > config.max_repetition_ratio:
        reason = "repetition"
    if reason is not None:
        return StageOutcome(doc_id=doc.doc_id, stage="heuristics",
                            verdict="dropped", reason=reason, detail=stats)
    return StageOutcome(doc_id=doc.doc_id, stage="heuristics",
                        verdict="kept", detail=stats)


# -- feature extraction ------------------------------------------------------

FEATURE_NAMES = (
    "log_char_len",
    "symbol_ratio",
    "repetition_ratio",
    "mean_sentence_len",
    "digit_ratio",
    "kana_kanji_ratio",
)

_SENTENCE_SPLIT = re.compile(r"[。．.!?！?？\n]+")


def _mean_sentence_len(text: str) -> float:
    parts = [p for p in _SENTENCE_SPLIT.split(text) if p.strip()]
    if not parts:
        return 0.0
    return sum(len(p) for p in parts) / len(parts)


def extract_features(text: str) -> dict[str, float]:
    return {
        "log_char_len": math.log(max(len(text), 1)),
        "symbol_ratio": symbol_ratio(text),
        "repetition_ratio": repetition_ratio(text),
        "mean_sentence_len": _mean_sentence_len(text),
        "digit_ratio": digit_ratio(text),
        "kana_kanji_ratio": kana_kanji_ratio(text),
    }


def feature_vector(text: str) -> list[float]:
    feats = extract_features(text)
    return [feats[name] for name in FEATURE_NAMES]


# -- quality model -----------------------------------------------------------

MODEL_VERSION = 1


@dataclass(frozen=True)
class QualityModel:
    feature_weights: dict[str, float]
    bias: float
    threshold: float

    def __post_init__(self):
        unknown = sorted(set(self.feature_weights) - set(FEATURE_NAMES))
        if unknown:
            raise ConfigError("unknown feature names in quality model",
                              unknown)
        if not 0 <= self.threshold <= 1:
            raise ConfigError("quality model threshold outside [0,1]",
                              ["threshold"])

    def score(self, text: str) -> float:
        feats = extract_features(text)
        z = self.bias + sum(w * feats[name]
                            for name, w in self.feature_weights.items())
        return 1.0 / (1.0 + math.exp(-z))

    def to_json(self) -> str:
        names = sorted(self.feature_weights)
        doc = {
            "version": MODEL_VERSION,
            "features": names,
            "weights": [self.feature_weights[n] for n in names],
            "bias": self.bias,
            "threshold": self.threshold,
        }
        return json.dumps(doc, ensure_ascii=False, sort_keys=True,
                          separators=(",", ":")) + "\n"

    @classmethod
    def from_json(cls, text: str) -> "QualityModel":
        try:
            doc = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ConfigError(f"quality model is not valid JSON: {exc}") from exc
        if not isinstance(doc, dict) or doc.get("version") != MODEL_VERSION:
            raise ConfigError(
                f"unknown quality model version {doc.get('version')!r}"
            )
        features = doc.get("features")
        weights = doc.get("weights")
        if (not isinstance(features, list) or not isinstance(weights, list)
                or len(features) != len(weights)):
            raise ConfigError("features/weights mismatch in quality model",
                              ["features", "weights"])
        return cls(
            feature_weights=dict(zip(features, weights)),
            bias=float(doc.get("bias", 0.0)),
            threshold=float(doc.get("threshold", 0.5)),
        )

    @classmethod
    def load(cls, path: str | Path) -> "QualityModel":
        return cls.from_json(Path(path).read_text(encoding="utf-8"))

    def save(self, path: str | Path) -> None:
        Path(path).write_text(self.to_json(), encoding="utf-8")


def classify_quality(doc: Document, model: QualityModel,
                     threshold: float | None = None) -> tuple[float, StageOutcome]:
    score = model.score(doc.text)
    cut = model.threshold if threshold is None else threshold
    if score >= cut:
        outcome = StageOutcome(doc_id=doc.doc_id, stage="classifier",
                               verdict="kept",
                               detail={"score": score, "threshold": cut})
    else:
        outcome = StageOutcome(
            doc_id=doc.doc_id, stage="classifier", verdict="dropped",
            reason="below quality threshold",
            detail={"score": score, "threshold": cut},
        )
    return score, outcome
