from .config import PipelineConfig
from .dedup import dedup_exact, dedup_near
from .document import Document, StageOutcome, read_documents, write_documents
from .minhash import MinHasher, estimate_jaccard
from .normalize import normalize_document, normalize_text
from .pii import redact_pii, redact_text
from .quality import (
    QualityModel,
    classify_quality,
    extract_features,
    heuristic_filters,
)
from .runner import (
    PipelineReport,
    PipelineResult,
    StageCounts,
    annotate_meta,
    run_pipeline,
)

__all__ = [
    "Document",
    "MinHasher",
    "PipelineConfig",
    "PipelineReport",
    "PipelineResult",
    "QualityClassifier",
    "QualityModel",
    "StageCounts",
    "StageOutcome",
    "annotate_meta",
    "classify_quality",
    "dedup_exact",
    "dedup_near",
    "estimate_jaccard",
    "extract_features",
    "heuristic_filters",
    "normalize_document",
    "normalize_text",
    "read_documents",
    "redact_pii",
    "redact_text",
    "run_pipeline",
    "write_documents",
]


def __getattr__(name: str):
    # the classifier estimator pulls in scikit-learn; load on first use
    if name == "QualityClassifier":
        from .estimators import QualityClassifier

        return QualityClassifier
    raise AttributeError(f"module {__name__!r} has no attribute {name!r}")
