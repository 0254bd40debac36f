"""Task specifications, evaluation instances, and their file formats."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

from ..errors import DataFormatError, TemplateSlotError

TASK_TYPES = ("multiple_choice", "generate_em", "generate_rouge2")

METRIC_FOR_TYPE = {
    "multiple_choice": "acc",
    "generate_em": "em",
    "generate_rouge2": "rouge-2",
}

SUITE_VERSION = 1


@dataclass(frozen=True)
class Instance:
    question: str
    choices: tuple[str, ...] = ()
    references: tuple[str, ...] = ()
    gold_index: int | None = None


@dataclass(frozen=True)
class Exemplar:
    question: str
    answer: str
    choices: tuple[str, ...] = ()


@dataclass(frozen=True)
class TaskSpec:
    name: str
    task_type: str
    n_shots: int
    template: str
    metric_name: str
    exemplars: tuple[Exemplar, ...] = ()
    separator: str = "\n\n"
    excluded_from_7avg: bool = False
    stop_sequences: tuple[str, ...] = ("\n\n",)
    max_new_tokens: int = 256
    rouge_segmenter: str = "char"
    length_normalize: bool = False

    def __post_init__(self):
        if self.task_type not in TASK_TYPES:
            raise DataFormatError(
                f"task {self.name}: unknown task_type {self.task_type!r}"
            )
        expected = METRIC_FOR_TYPE[self.task_type]
        if self.metric_name != expected:
            raise DataFormatError(
                f"task {self.name}: metric {self.metric_name!r} inconsistent "
                f"with task_type {self.task_type!r} (expected {expected!r})"
            )
        if self.n_shots < 0:
            raise DataFormatError(f"task {self.name}: negative n_shots")
        for slot in ("{question}", "{answer}"):
            if slot not in self.template:
                raise TemplateSlotError(
                    f"task {self.name}: template is missing the {slot} slot"
                )


def instance_from_row(row: dict, task_type: str) -> Instance:
    question = row.get("question")
    if not isinstance(question, str):
        raise DataFormatError("instance is missing 'question'")
    if task_type == "multiple_choice":
        choices = row.get("choices")
        gold = row.get("gold_index")
        if not isinstance(choices, list) or len(choices) < 2:
            raise DataFormatError("multiple_choice instance needs >= 2 choices")
        if not isinstance(gold, int) or not 0 <= gold < len(choices):
            raise DataFormatError("gold_index out of range")
        return Instance(question=question, choices=tuple(choices),
                        references=(choices[gold],), gold_index=gold)
    references = row.get("references")
    if not isinstance(references, list) or not references:
        raise DataFormatError("generation instance needs references")
    return Instance(question=question, references=tuple(references))


def load_instances(path: str | Path, task_type: str) -> list[Instance]:
    instances = []
    for line_no, line in enumerate(
            Path(path).read_text(encoding="utf-8").splitlines(), start=1):
        if not line.strip():
            continue
        try:
            instances.append(instance_from_row(json.loads(line), task_type))
        except (json.JSONDecodeError, DataFormatError) as exc:
            raise DataFormatError(f"{path}:{line_no}: {exc}") from exc
    if not instances:
        raise DataFormatError(f"{path}: no instances")
    return instances


def task_from_dict(doc: dict, base_dir: Path | None = None) -> TaskSpec:
    try:
        exemplars_field = doc.get("exemplars", [])
        if isinstance(exemplars_field, str):
            if base_dir is None:
                raise DataFormatError("exemplar file reference needs a base dir")
            rows = json.loads((base_dir / exemplars_field).read_text("utf-8"))
        else:
            rows = exemplars_field
        exemplars = tuple(
            Exemplar(question=row["question"], answer=row["answer"],
                     choices=tuple(row.get("choices", ())))
            for row in rows
        )
        return TaskSpec(
            name=doc["name"],
            task_type=doc["task_type"],
            n_shots=doc["n_shots"],
            template=doc["template"],
            metric_name=doc["metric_name"],
            exemplars=exemplars,
            separator=doc.get("separator", "\n\n"),
            excluded_from_7avg=doc.get("excluded_from_7avg", False),
            stop_sequences=tuple(doc.get("stop_sequences", ["\n\n"])),
            max_new_tokens=doc.get("max_new_tokens", 256),
            rouge_segmenter=doc.get("rouge_segmenter", "char"),
            length_normalize=doc.get("length_normalize", False),
        )
    except KeyError as exc:
        raise DataFormatError(f"task definition missing field {exc}") from exc


def load_suite(path: str | Path) -> list[TaskSpec]:
    path = Path(path)
    try:
        doc = json.loads(path.read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as exc:
        raise DataFormatError(f"cannot read suite {path}: {exc}") from exc
    if not isinstance(doc, dict) or doc.get("version") != SUITE_VERSION:
        raise DataFormatError(
            f"unknown suite version {doc.get('version') if isinstance(doc, dict) else None!r}"
        )
    tasks = [task_from_dict(t, base_dir=path.parent)
             for t in doc.get("tasks", [])]
    if not tasks:
        raise DataFormatError(f"suite {path} has no tasks")
    names = [t.name for t in tasks]
    if len(set(names)) != len(names):
        raise DataFormatError("duplicate task names in suite")
    return tasks


def builtin_suite_path(name: str) -> Path:
    """Path of a suite definition shipped with the package."""
    return Path(__file__).resolve().parent.parent / "suites" / f"{name}.json"
