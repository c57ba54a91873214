"""Semantic relatedness scoring on the 1-5 scale."""

from collections.abc import Sequence

import numpy as np

from ..errors import DegenerateInputError
from ..metrics import MetricRecord, mse, pearson, spearman
from ..pairmodel import TargetDistribution, distribution_to_score, score_to_distribution
from ..sick import SickRecord
from .base import Task


class RelatednessTask(Task):
    """Predict ŷ = rᵀp̂ over K=5 score classes."""

    @property
    def name(self) -> str:
        return "relatedness"

    @property
    def num_classes(self) -> int:
        return 5

    @property
    def selection_metric(self) -> str:
        return "pearson"

    def target(self, record: SickRecord) -> TargetDistribution:
        return score_to_distribution(record.relatedness, self.num_classes)

    def gold(self, record: SickRecord) -> float:
        return record.relatedness

    def predict(self, p_hat: np.ndarray) -> float:
        return distribution_to_score(p_hat)

    def evaluate(
        self,
        predictions: Sequence[float],
        golds: Sequence[float],
    ) -> MetricRecord:
        """
        Pearson, Spearman and MSE of predicted scores.

        Correlations that are undefined (constant predictions) are left as
        None and named in flags instead of becoming NaN.
        """
        metrics = MetricRecord(n=len(golds), mse=mse(predictions, golds))
        for field, fn in (("pearson", pearson), ("spearman", spearman)):
            try:
                setattr(metrics, field, fn(predictions, golds))
            except DegenerateInputError as e:
                metrics.flags.append(f"{field}: {e}")
        return metrics
