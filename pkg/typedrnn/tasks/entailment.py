"""Three-way entailment classification."""

from collections.abc import Sequence

import numpy as np

from ..metrics import MetricRecord, accuracy, confusion_matrix
from ..pairmodel import ENTAILMENT_LABELS, TargetDistribution, entailment_target
from ..sick import SickRecord
from .base import Task


class EntailmentTask(Task):
    """Predict argmax p̂ over (Contradiction, Neutral, Entailment)."""

    @property
    def name(self) -> str:
        return "entailment"

    @property
    def num_classes(self) -> int:
        return len(ENTAILMENT_LABELS)

    @property
    def selection_metric(self) -> str:
        return "accuracy"

    def target(self, record: SickRecord) -> TargetDistribution:
        return entailment_target(record.entailment)

    def gold(self, record: SickRecord) -> str:
        return record.entailment

    def predict(self, p_hat: np.ndarray) -> str:
        return ENTAILMENT_LABELS[int(np.argmax(p_hat))]

    def evaluate(
        self,
        predictions: Sequence[str],
        golds: Sequence[str],
    ) -> MetricRecord:
        return MetricRecord(
            n=len(golds),
            accuracy=accuracy(predictions, golds),
            confusion=confusion_matrix(predictions, golds, ENTAILMENT_LABELS),
        )
