"""Heuristic filters and the logistic quality classifier."""

import json

import pytest

from jlmkit.errors import ConfigError
from jlmkit.pipeline import (
    Document,
    PipelineConfig,
    QualityClassifier,
    QualityModel,
    classify_quality,
    heuristic_filters,
)


def doc(text: str) -> Document:
    return Document(doc_id="d", text=text)


class TestHeuristics:
    CONFIG = PipelineConfig()

    def test_short_document_dropped_with_reason(self):
        outcome = heuristic_filters(doc("短い文です。"), self.CONFIG)
        assert outcome.verdict == "dropped"
        assert outcome.reason == "min length"

    def test_pure_repetition_dropped(self):
        outcome = heuristic_filters(doc("あ" * 1000), self.CONFIG)
        assert outcome.verdict == "dropped"
        assert outcome.reason == "repetition"
        assert outcome.detail["repetition_ratio"] > 0.99

    def test_clean_paragraph_kept(self):
        text = (
            "昨日は朝から雨が降っていたので、図書館で新しい本を読みました。"
            "昼過ぎには天気が回復して、公園を散歩しながら写真を撮りました。"
            "夕方には友達と駅の近くの店で夕食を食べて、楽しい一日になりました。"
            "明日は仕事がありますから、今晩は早めに休むつもりです。"
            "週末には家族と一緒に山へ旅行に行く計画を立てています。"
            "天気予報によると、土曜日は晴れで気温も過ごしやすいそうです。"
            "旅行の前に、カメラの電池と地図を忘れずに準備しておきます。"
            "最近は運動不足だったので、山道を歩くのが楽しみです。"
        )
        assert len(text) >= 200
        outcome = heuristic_filters(doc(text), self.CONFIG)
        assert outcome.verdict == "kept"

    def test_symbol_heavy_dropped(self):
        outcome = heuristic_filters(doc("※◆★☆●▲▼■◇" * 10), self.CONFIG)
        assert outcome.verdict == "dropped"
        assert outcome.reason == "symbol ratio"

    def test_max_length(self):
        config = PipelineConfig(min_chars=1, max_chars=100)
        outcome = heuristic_filters(doc("x" * 101), config)
        assert outcome.reason == "max length"


class TestClassifier:
    def test_zero_model_scores_half(self):
        model = QualityModel(feature_weights={}, bias=0.0, threshold=0.5)
        score, outcome = classify_quality(doc("любой text 何でも"), model)
        assert score == 0.5
        assert outcome.verdict == "kept"

    def test_threshold_zero_keeps_everything(self):
        model = QualityModel(feature_weights={"log_char_len": -10.0},
                             bias=-5.0, threshold=0.0)
        _, outcome = classify_quality(doc("junk " * 50), model)
        assert outcome.verdict == "kept"

    def test_unknown_feature_rejected_at_load(self):
        with pytest.raises(ConfigError, match="embedding_norm"):
            QualityModel(feature_weights={"embedding_norm": 1.0},
                         bias=0.0, threshold=0.5)
        payload = json.dumps({
            "version": 1, "features": ["no_such_feature"], "weights": [1.0],
            "bias": 0.0, "threshold": 0.5,
        })
        with pytest.raises(ConfigError):
            QualityModel.from_json(payload)

    def test_model_json_round_trip(self):
        model = QualityModel(
            feature_weights={"log_char_len": 0.8, "symbol_ratio": -2.5},
            bias=0.1, threshold=0.6,
        )
        again = QualityModel.from_json(model.to_json())
        assert again == model
        assert QualityModel.from_json(again.to_json()) == again

    def test_fit_reaches_holdout_accuracy(self, fixtures_dir):
        rows = [json.loads(line) for line in
                (fixtures_dir / "quality_corpus.jsonl").read_text().splitlines()]
        assert len(rows) == 250
        train, test = rows[:200], rows[200:]
        clf = QualityClassifier(threshold=0.5)
        clf.fit([r["text"] for r in train], [r["label"] for r in train])
        predictions = clf.predict([r["text"] for r in test])
        accuracy = sum(p == r["label"] for p, r in zip(predictions, test)) / len(test)
        assert accuracy >= 0.8, f"held-out accuracy {accuracy:.2f}"

    def test_fit_is_deterministic(self, fixtures_dir):
        rows = [json.loads(line) for line in
                (fixtures_dir / "quality_corpus.jsonl").read_text().splitlines()]
        texts = [r["text"] for r in rows[:100]]
        labels = [r["label"] for r in rows[:100]]
        first = QualityClassifier().fit(texts, labels).model_
        second = QualityClassifier().fit(texts, labels).model_
        assert first == second
