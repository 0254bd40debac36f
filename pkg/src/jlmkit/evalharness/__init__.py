from .metrics import exact_match, normalize_answer, rouge2
from .prompts import build_nshot_prompt
from .runner import (
    MetricResult,
    SuiteReport,
    aggregate,
    display_round,
    run_task,
    score_multiple_choice,
    suite_report_json,
)
from .scorers import HttpScorer, LookupScorer, ModelScorer, UniformUnigramScorer
from .tasks import (
    Exemplar,
    Instance,
    TaskSpec,
    builtin_suite_path,
    load_instances,
    load_suite,
)

__all__ = [
    "Exemplar",
    "HttpScorer",
    "Instance",
    "LookupScorer",
    "MetricResult",
    "ModelScorer",
    "SuiteReport",
    "TaskSpec",
    "UniformUnigramScorer",
    "aggregate",
    "build_nshot_prompt",
    "builtin_suite_path",
    "display_round",
    "exact_match",
    "load_instances",
    "load_suite",
    "normalize_answer",
    "rouge2",
    "run_task",
    "score_multiple_choice",
    "suite_report_json",
]
