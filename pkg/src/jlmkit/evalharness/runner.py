"""Task execution and suite aggregation."""

from __future__ import annotations

import json
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from decimal import ROUND_HALF_UP, Decimal

from ..errors import DataFormatError, ScorerError
from .metrics import exact_match, rouge2
from .prompts import build_nshot_prompt
from .scorers import ModelScorer
from .tasks import Instance, TaskSpec


@dataclass(frozen=True)
class MetricResult:
    task_name: str
    metric_name: str
    value: float  # 0..100
    instance_count: int

    def __post_init__(self):
        if not 0 <= self.value <= 100:
            raise ValueError(f"metric value {self.value} outside [0, 100]")
        if self.instance_count < 1:
            raise ValueError("instance_count must be >= 1")


@dataclass(frozen=True)
class SuiteReport:
    results: tuple[MetricResult, ...]
    avg: float
    avg_excl: float | None = None


def display_round(value: float, digits: int = 2) -> float:
    """Half-up rounding for display; aggregation itself stays unrounded."""
    quantum = Decimal(10) ** -digits
    return float(Decimal(repr(value)).quantize(quantum,
                                               rounding=ROUND_HALF_UP))


def score_multiple_choice(scorer: ModelScorer, prompt: str,
                          choices: tuple[str, ...] | list[str],
                          length_normalize: bool = False,
                          ) -> tuple[int, list[float]]:
    """Score every choice as a continuation of the prompt; argmax wins,
    ties break to the lowest index. Raw summed loglikelihood by default;
    byte-length normalization is the per-task opt-in."""
    if len(choices) < 2:
        raise ValueError("multiple choice needs at least 2 choices")
    scores: list[float] = []
    for index, choice in enumerate(choices):
        try:
            value = scorer.loglikelihood(prompt, choice)
        except ScorerError as exc:
            # keep the subtype so backend failures map to their exit code
            raise type(exc)(f"choice {index}: {exc}") from exc
        if length_normalize:
            value = value / max(len(choice.encode("utf-8")), 1)
        scores.append(value)
    # max() keeps the first maximal index, i.e. the lowest-index tie-break
    chosen = max(range(len(scores)), key=scores.__getitem__)
    return chosen, scores


def truncate_at_stop(text: str, stop_sequences: tuple[str, ...]) -> str:
    cut = len(text)
    for stop in stop_sequences:
        if stop:
            at = text.find(stop)
            if at != -1:
                cut = min(cut, at)
    return text[:cut]


def _evaluate_instance(scorer: ModelScorer, task: TaskSpec,
                       instance: Instance) -> float:
    prompt = build_nshot_prompt(task, instance)
    if task.task_type == "multiple_choice":
        chosen, _ = score_multiple_choice(scorer, prompt, instance.choices,
                                          task.length_normalize)
        return 1.0 if chosen == instance.gold_index else 0.0
    generated = scorer.generate(prompt, task.stop_sequences,
                                task.max_new_tokens)
    prediction = truncate_at_stop(generated, task.stop_sequences)
    if task.task_type == "generate_em":
        return 1.0 if exact_match(prediction, list(instance.references)) else 0.0
    return rouge2(prediction, instance.references[0], task.rouge_segmenter)


def run_task(scorer: ModelScorer, task: TaskSpec,
             instances: list[Instance], workers: int = 1,
             lenient: bool = False) -> MetricResult:
    """Evaluate all instances; value is 100 x the mean per-instance score.

    Scorer failures abort with the instance index unless ``lenient``, in
    which case the failing instance counts as incorrect.
    """
    if not instances:
        raise DataFormatError(f"task {task.name}: no instances")

    def one(pair: tuple[int, Instance]) -> float:
        index, instance = pair
        try:
            return _evaluate_instance(scorer, task, instance)
        except ScorerError as exc:
            if lenient:
                return 0.0
            raise type(exc)(
                f"task {task.name}, instance {index}: {exc}"
            ) from exc

    items = list(enumerate(instances))
    parallel_ok = getattr(scorer, "concurrency_safe", False)
    if workers > 1 and parallel_ok and len(items) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            per_instance = list(pool.map(one, items))
    else:
        per_instance = [one(item) for item in items]

    value = 100.0 * sum(per_instance) / len(per_instance)
    return MetricResult(task_name=task.name, metric_name=task.metric_name,
                        value=value, instance_count=len(instances))


def aggregate(results: list[MetricResult],
              excluded_flags: list[bool] | None = None) -> SuiteReport:
    """Unweighted means on the 0-100 scale; ``avg_excl`` drops the flagged
    tasks (the summarization exclusion) and appears only when some task
    is flagged. Rounding happens at display time only."""
    if not results:
        raise DataFormatError("no results to aggregate")
    if excluded_flags is None:
        excluded_flags = [False] * len(results)
    if len(excluded_flags) != len(results):
        raise ValueError("excluded_flags length mismatch")
    values = [r.value for r in results]
    avg = sum(values) / len(values)
    avg_excl = None
    if any(excluded_flags):
        included = [v for v, excluded in zip(values, excluded_flags)
                    if not excluded]
        if not included:
            raise DataFormatError("every task is excluded from the average")
        avg_excl = sum(included) / len(included)
    return SuiteReport(results=tuple(results), avg=avg, avg_excl=avg_excl)


def suite_report_json(report: SuiteReport, tasks: list[TaskSpec]) -> str:
    shots = {t.name: t.n_shots for t in tasks}
    doc = {
        "version": 1,
        "results": [
            {
                "name": r.task_name,
                "metric": r.metric_name,
                "shots": shots.get(r.task_name),
                "value": r.value,
                "instances": r.instance_count,
            }
            for r in report.results
        ],
        "avg": report.avg,
        "avg_excl": report.avg_excl,
    }
    return json.dumps(doc, ensure_ascii=False, sort_keys=True,
                      separators=(",", ":")) + "\n"
