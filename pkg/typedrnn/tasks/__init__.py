"""Sentence-pair tasks."""

from ..errors import ConfigError
from .base import Task
from .entailment import EntailmentTask
from .relatedness import RelatednessTask

# Registry of available tasks
TASKS: dict[str, type[Task]] = {
    "relatedness": RelatednessTask,
    "entailment": EntailmentTask,
}


def get_task(name: str) -> Task:
    if name not in TASKS:
        raise ConfigError(f"Unknown task: {name} (available: {', '.join(TASKS)})")
    return TASKS[name]()


__all__ = ["EntailmentTask", "RelatednessTask", "TASKS", "Task", "get_task"]
