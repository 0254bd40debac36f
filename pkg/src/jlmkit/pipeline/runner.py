"""Stage orchestration with per-stage accounting and token budgeting."""

from __future__ import annotations

import json
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable

from ..errors import ConfigError
from ..tokenizer import Tokenizer
from .config import PipelineConfig
from .dedup import dedup_exact, dedup_near
from .document import STAGES, Document, StageOutcome
from .normalize import normalize_document
from .pii import redact_pii
from .quality import QualityModel, classify_quality, heuristic_filters

REPORT_VERSION = 1


@dataclass
class StageCounts:
    seen: int = 0
    kept: int = 0
    dropped: int = 0
    modified: int = 0


@dataclass
class PipelineReport:
    stages: dict[str, StageCounts] = field(default_factory=dict)
    total_documents_out: int = 0
    total_tokens_out: int | None = None
    redactions: dict[str, int] = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "version": REPORT_VERSION,
            "stages": {
                name: vars(counts) for name, counts in self.stages.items()
            },
            "total_documents_out": self.total_documents_out,
            "total_tokens_out": self.total_tokens_out,
            "redactions": self.redactions,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), ensure_ascii=False, sort_keys=True,
                          separators=(",", ":")) + "\n"


@dataclass
class PipelineResult:
    documents: list[Document]
    report: PipelineReport
    outcomes: dict[str, dict[str, StageOutcome]]  # doc_id -> stage -> outcome


def _map_ordered(fn: Callable, items: list, workers: int) -> list:
    """Order-preserving map; thread-parallel when workers > 1."""
    if workers > 1 and len(items) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(fn, items))
    return [fn(item) for item in items]


def run_pipeline(docs: list[Document], config: PipelineConfig,
                 tokenizer: Tokenizer | None = None,
                 quality_model: QualityModel | None = None,
                 workers: int = 1,
                 input_errors: list[tuple[str, str]] | None = None) -> PipelineResult:
    """Apply the enabled stages in fixed order, preserving input order.

    ``input_errors`` are (synthetic_doc_id, message) pairs from the corpus
    reader; they count as documents seen and dropped at the normalize
    stage with reason "decode failure".
    """
    if config.classifier and quality_model is None:
        raise ConfigError("classifier stage enabled without a quality model",
                          ["classifier"])

    report = PipelineReport()
    outcomes: dict[str, dict[str, StageOutcome]] = {}
    redactions: dict[str, int] = {}

    def record(outcome: StageOutcome, counts: StageCounts) -> None:
        outcomes.setdefault(outcome.doc_id, {})[outcome.stage] = outcome
        counts.seen += 1
        if outcome.verdict == "dropped":
            counts.dropped += 1
        else:
            counts.kept += 1
            if outcome.verdict == "modified":
                counts.modified += 1

    current = list(docs)

    for stage in STAGES:
        if not getattr(config, stage):
            continue
        counts = report.stages.setdefault(stage, StageCounts())

        if stage == "normalize":
            for bad_id, message in input_errors or []:
                record(StageOutcome(doc_id=bad_id, stage="normalize",
                                    verdict="dropped", reason="decode failure",
                                    detail={"error": message}), counts)
            pairs = _map_ordered(normalize_document, current, workers)
            current = []
            for doc, outcome in pairs:
                record(outcome, counts)
                current.append(doc)

        elif stage == "pii":
            pairs = _map_ordered(redact_pii, current, workers)
            current = []
            for doc, outcome in pairs:
                record(outcome, counts)
                for category, n in outcome.detail.items():
                    redactions[category] = redactions.get(category, 0) + n
                current.append(doc)

        elif stage == "exact_dedup":
            kept, stage_outcomes = dedup_exact(current)
            for outcome in stage_outcomes:
                record(outcome, counts)
            current = kept

        elif stage == "near_dedup":
            kept, stage_outcomes = dedup_near(current, config, workers=workers)
            for outcome in stage_outcomes:
                record(outcome, counts)
            current = kept

        elif stage == "heuristics":
            stage_outcomes = _map_ordered(
                lambda d: heuristic_filters(d, config), current, workers
            )
            kept = []
            for doc, outcome in zip(current, stage_outcomes):
                record(outcome, counts)
                if outcome.verdict != "dropped":
                    kept.append(doc)
            current = kept

        elif stage == "classifier":
            results = _map_ordered(
                lambda d: classify_quality(d, quality_model,
                                           config.classifier_threshold),
                current, workers,
            )
            kept = []
            for doc, (_, outcome) in zip(current, results):
                record(outcome, counts)
                if outcome.verdict != "dropped":
                    kept.append(doc)
            current = kept

    report.total_documents_out = len(current)
    report.redactions = redactions
    if tokenizer is not None:
        lengths = _map_ordered(
            lambda d: len(tokenizer.encode(d.text).ids), current, workers
        )
        report.total_tokens_out = sum(lengths)

    return PipelineResult(documents=current, report=report, outcomes=outcomes)


def annotate_meta(result: PipelineResult) -> list[Document]:
    """Copy surviving documents with per-stage verdicts in meta.pipeline."""
    annotated = []
    for doc in result.documents:
        verdicts = {
            stage: outcome.verdict
            for stage, outcome in sorted(result.outcomes.get(doc.doc_id, {}).items())
        }
        meta = dict(doc.meta)
        meta["pipeline"] = verdicts
        annotated.append(Document(doc_id=doc.doc_id, text=doc.text, meta=meta))
    return annotated
