"""Correlation, error and accuracy metrics."""

from collections.abc import Sequence
from dataclasses import dataclass, field

import numpy as np
from scipy import stats

from .errors import DegenerateInputError, DimensionError, UsageError


@dataclass
class ScorePairs:
    """Parallel predicted/gold real sequences."""

    predicted: np.ndarray
    gold: np.ndarray

    def __post_init__(self) -> None:
        self.predicted = np.asarray(self.predicted, dtype=np.float64)
        self.gold = np.asarray(self.gold, dtype=np.float64)
        if self.predicted.shape != self.gold.shape or self.predicted.ndim != 1:
            raise DimensionError(
                f"predicted {self.predicted.shape} and gold {self.gold.shape} differ"
            )
        if not (np.all(np.isfinite(self.predicted)) and np.all(np.isfinite(self.gold))):
            raise DegenerateInputError("scores must be finite")

    def __len__(self) -> int:
        return self.predicted.shape[0]


def _correlation(x: np.ndarray, y: np.ndarray, what: str) -> float:
    if x.shape[0] < 2:
        raise DegenerateInputError(f"{what} needs at least 2 pairs, got {x.shape[0]}")
    if np.ptp(x) == 0.0 or np.ptp(y) == 0.0:
        raise DegenerateInputError(f"{what} is undefined for a constant sequence")
    return float(stats.pearsonr(x, y).statistic)


def pearson(predicted: Sequence[float], gold: Sequence[float]) -> float:
    """Sample Pearson correlation."""
    pairs = ScorePairs(predicted, gold)
    return _correlation(pairs.predicted, pairs.gold, "Pearson's r")


def spearman(predicted: Sequence[float], gold: Sequence[float]) -> float:
    """Pearson correlation of ranks; ties get their average rank."""
    pairs = ScorePairs(predicted, gold)
    return _correlation(
        stats.rankdata(pairs.predicted, method="average"),
        stats.rankdata(pairs.gold, method="average"),
        "Spearman's rho",
    )


def mse(predicted: Sequence[float], gold: Sequence[float]) -> float:
    pairs = ScorePairs(predicted, gold)
    if len(pairs) == 0:
        raise UsageError("mse needs at least one pair")
    diff = pairs.predicted - pairs.gold
    return float(np.mean(diff * diff))


def accuracy(predicted: Sequence[str], gold: Sequence[str]) -> float:
    """Fraction of exact label matches."""
    if len(predicted) != len(gold):
        raise DimensionError(f"{len(predicted)} predictions for {len(gold)} gold labels")
    if not gold:
        raise UsageError("accuracy needs at least one label")
    return sum(p == g for p, g in zip(predicted, gold)) / len(gold)


def confusion_matrix(
    predicted: Sequence[str], gold: Sequence[str], labels: Sequence[str]
) -> list[list[int]]:
    """Counts indexed [gold][predicted] in the order of labels."""
    index = {label: i for i, label in enumerate(labels)}
    matrix = [[0] * len(labels) for _ in labels]
    for p, g in zip(predicted, gold):
        matrix[index[g]][index[p]] += 1
    return matrix


@dataclass
class MetricRecord:
    """Metrics of one evaluation; unset fields do not apply to the task."""

    n: int
    loss: float | None = None
    pearson: float | None = None
    spearman: float | None = None
    mse: float | None = None
    accuracy: float | None = None
    confusion: list[list[int]] | None = None
    flags: list[str] = field(default_factory=list)

    def as_row(self) -> dict[str, float | int | None]:
        """Flat scalar fields for tables, CSV and the run database."""
        return {
            "n": self.n,
            "loss": self.loss,
            "pearson": self.pearson,
            "spearman": self.spearman,
            "mse": self.mse,
            "accuracy": self.accuracy,
        }
