"""Base interface for sentence-pair tasks."""

from abc import ABC, abstractmethod
from collections.abc import Sequence

import numpy as np

from ..metrics import MetricRecord
from ..pairmodel import TargetDistribution
from ..sick import SickRecord


class Task(ABC):
    """A labelling of SICK pairs: targets, predictions and metrics."""

    @property
    @abstractmethod
    def name(self) -> str:
        """Unique name identifying this task."""
        ...

    @property
    @abstractmethod
    def num_classes(self) -> int:
        """K, the size of the predicted distribution."""
        ...

    @property
    @abstractmethod
    def selection_metric(self) -> str:
        """MetricRecord field used for dev-set model selection."""
        ...

    @abstractmethod
    def target(self, record: SickRecord) -> TargetDistribution:
        """Gold distribution p for a record."""
        ...

    @abstractmethod
    def gold(self, record: SickRecord) -> float | str:
        """Gold value compared against predictions."""
        ...

    @abstractmethod
    def predict(self, p_hat: np.ndarray) -> float | str:
        """Turn a predicted distribution into a score or a label."""
        ...

    @abstractmethod
    def evaluate(
        self,
        predictions: Sequence[float | str],
        golds: Sequence[float | str],
    ) -> MetricRecord:
        """
        Score predictions against gold values.

        Args:
            predictions: Output of predict() per pair
            golds: Output of gold() per pair

        Returns:
            MetricRecord with the task's metrics filled
        """
        ...

    def selection_value(self, metrics: MetricRecord) -> float | None:
        """Value of the selection metric, None when it is undefined."""
        return getattr(metrics, self.selection_metric)
