"""n-shot prompt construction."""

from __future__ import annotations

from ..errors import InsufficientExemplarsError, TemplateSlotError
from .tasks import Exemplar, Instance, TaskSpec


def _render(template: str, question: str, choices: tuple[str, ...],
            answer: str) -> str:
    try:
        return template.format(question=question,
                               choices="\n".join(choices), answer=answer)
    except (KeyError, IndexError) as exc:
        raise TemplateSlotError(f"template references unknown slot {exc}") from exc


def build_nshot_prompt(task: TaskSpec, instance: Instance,
                       n: int | None = None) -> str:
    """First n exemplars as filled blocks, then the evaluated question with
    an empty answer slot. Deterministic; n defaults to the task's shots."""
    shots = task.n_shots if n is None else n
    if shots > len(task.exemplars):
        raise InsufficientExemplarsError(
            f"task {task.name}: {shots} shots requested but only "
            f"{len(task.exemplars)} exemplars available"
        )
    blocks = [
        _render(task.template, ex.question, ex.choices, ex.answer)
        for ex in task.exemplars[:shots]
    ]
    blocks.append(
        _render(task.template, instance.question, instance.choices, "")
    )
    return task.separator.join(blocks)
