"""Pipeline configuration with validation and the versioned JSON form."""

from __future__ import annotations

import json
from dataclasses import dataclass, fields, replace
from pathlib import Path

from ..errors import ConfigError
from .document import STAGES

CONFIG_VERSION = 1


@dataclass(frozen=True)
class PipelineConfig:
    # stage toggles; classifier stays off unless a quality model is supplied
    normalize: bool = True
    pii: bool = True
    exact_dedup: bool = True
    near_dedup: bool = True
    heuristics: bool = True
    classifier: bool = False

    # near-duplicate parameters
    shingle_size: int = 5
    num_permutations: int = 128
    num_bands: int = 32
    jaccard_threshold: float = 0.8

    # heuristic thresholds
    min_chars: int = 50
    max_chars: int = 200_000
    max_symbol_ratio: float = 0.3
    max_repetition_ratio: float = 0.5

    # overrides the quality model's own threshold when set
    classifier_threshold: float | None = None

    seed: int = 42

    def __post_init__(self):
        bad: list[str] = []
        if self.shingle_size < 1:
            bad.append("shingle_size")
        if self.num_permutations < 1:
            bad.append("num_permutations")
        if (self.num_bands < 1 or self.num_permutations % self.num_bands != 0):
            bad.append("num_bands")
        if not 0 < self.jaccard_threshold <= 1:
            bad.append("jaccard_threshold")
        if self.min_chars < 0 or self.min_chars > self.max_chars:
            bad.append("min_chars")
        if not 0 <= self.max_symbol_ratio <= 1:
            bad.append("max_symbol_ratio")
        if not 0 <= self.max_repetition_ratio <= 1:
            bad.append("max_repetition_ratio")
        if (self.classifier_threshold is not None
                and not 0 <= self.classifier_threshold <= 1):
            bad.append("classifier_threshold")
        if bad:
            raise ConfigError("invalid pipeline configuration", bad)

    def enabled_stages(self) -> list[str]:
        return [s for s in STAGES if getattr(self, s)]

    def with_stages(self, stages: list[str]) -> "PipelineConfig":
        unknown = [s for s in stages if s not in STAGES]
        if unknown:
            raise ConfigError("unknown stages", unknown)
        return replace(self, **{s: (s in stages) for s in STAGES})

    def to_json(self) -> str:
        doc = {
            "version": CONFIG_VERSION,
            "stages": {s: getattr(self, s) for s in STAGES},
            "near_dup": {
                "shingle_size": self.shingle_size,
                "num_permutations": self.num_permutations,
                "num_bands": self.num_bands,
                "jaccard_threshold": self.jaccard_threshold,
            },
            "heuristics_thresholds": {
                "min_chars": self.min_chars,
                "max_chars": self.max_chars,
                "max_symbol_ratio": self.max_symbol_ratio,
                "max_repetition_ratio": self.max_repetition_ratio,
            },
            "classifier_threshold": self.classifier_threshold,
            "seed": self.seed,
        }
        return json.dumps(doc, ensure_ascii=False, sort_keys=True,
                          separators=(",", ":")) + "\n"

    @classmethod
    def from_json(cls, text: str) -> "PipelineConfig":
        try:
            doc = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ConfigError(f"config is not valid JSON: {exc}") from exc
        if not isinstance(doc, dict):
            raise ConfigError("config root must be an object")
        version = doc.get("version")
        if version != CONFIG_VERSION:
            raise ConfigError(f"unknown config version {version!r}")

        known_top = {"version", "stages", "near_dup", "heuristics_thresholds",
                     "classifier_threshold", "seed"}
        unknown = sorted(set(doc) - known_top)
        if unknown:
            raise ConfigError("unknown config fields", unknown)

        kwargs: dict = {}
        stages = doc.get("stages", {})
        bad = sorted(set(stages) - set(STAGES))
        if bad:
            raise ConfigError("unknown stage toggles", bad)
        kwargs.update(stages)

        valid_names = {f.name for f in fields(cls)}
        for section in ("near_dup", "heuristics_thresholds"):
            block = doc.get(section, {})
            bad = sorted(set(block) - valid_names)
            if bad:
                raise ConfigError(f"unknown {section} fields", bad)
            kwargs.update(block)
        if "classifier_threshold" in doc:
            kwargs["classifier_threshold"] = doc["classifier_threshold"]
        if "seed" in doc:
            kwargs["seed"] = doc["seed"]
        try:
            return cls(**kwargs)
        except TypeError as exc:
            raise ConfigError(f"malformed config: {exc}") from exc

    @classmethod
    def load(cls, path: str | Path) -> "PipelineConfig":
        return cls.from_json(Path(path).read_text(encoding="utf-8"))
