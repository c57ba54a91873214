"""Siamese pair head: features, classifier, target distributions and loss."""

import math
from collections.abc import Mapping, Sequence
from dataclasses import dataclass
from typing import Any, Literal

import numpy as np

from .autodiff import Graph, Tensor
from .encoders.base import init_bias, init_matrix
from .errors import DimensionError, DomainError, RecordError, UsageError

TaskName = Literal["relatedness", "entailment"]

# Fixed class order; index 0 is "class 1" in the 1-based notation.
ENTAILMENT_LABELS: tuple[str, ...] = ("CONTRADICTION", "NEUTRAL", "ENTAILMENT")


@dataclass
class TargetDistribution:
    """Gold probability vector p over K classes."""

    p: np.ndarray
    task: TaskName

    def __post_init__(self) -> None:
        self.p = np.asarray(self.p, dtype=np.float64)
        if np.any(self.p < 0.0) or abs(self.p.sum() - 1.0) > 1e-9:
            raise DomainError(f"target is not a probability vector: {self.p}")

    @property
    def num_classes(self) -> int:
        return self.p.shape[0]


def score_to_distribution(y: float, num_classes: int = 5) -> TargetDistribution:
    """
    Spread a real score over its two neighbouring integer classes.

    p[⌊y⌋] = ⌊y⌋ - y + 1 and p[⌊y⌋+1] = y - ⌊y⌋ (1-based); an integer y,
    including y = K, gives a one-hot vector.
    """
    if not (1.0 <= y <= num_classes) or math.isnan(y):
        raise DomainError(f"score {y} outside [1, {num_classes}]")
    p = np.zeros(num_classes)
    floor = math.floor(y)
    p[floor - 1] = floor - y + 1.0
    if floor < num_classes:
        p[floor] = y - floor
    return TargetDistribution(p, "relatedness")


def distribution_to_score(p_hat: np.ndarray | Sequence[float]) -> float:
    """ŷ = rᵀp̂ with r = [1, 2, ..., K]."""
    values = np.asarray(p_hat, dtype=np.float64)
    return float(np.dot(np.arange(1, values.shape[0] + 1), values))


def normalize_label(label: str) -> str:
    """Canonical upper-case entailment label."""
    canonical = label.strip().upper()
    if canonical not in ENTAILMENT_LABELS:
        raise RecordError("?", f"unknown entailment label {label!r}")
    return canonical


def entailment_target(label: str) -> TargetDistribution:
    """One-hot over (Contradiction, Neutral, Entailment)."""
    p = np.zeros(len(ENTAILMENT_LABELS))
    p[ENTAILMENT_LABELS.index(normalize_label(label))] = 1.0
    return TargetDistribution(p, "entailment")


class PairHead:
    """
    Classifier over a sentence-vector pair.

        h_s = tanh(W_c·[(u ⊙ v) : |u - v|] + b_c)
        p̂   = softmax(W_p·h_s + b_p)

    W_c is [c×2h] and W_p is [K×c] so the products are matrix-vector.
    """

    def __init__(self, hidden_size: int, classifier_hidden: int, num_classes: int, seed: int = 0):
        if classifier_hidden <= 0:
            raise ValueError(f"classifier hidden size must be positive, got {classifier_hidden}")
        self.hidden_size = hidden_size
        self.classifier_hidden = classifier_hidden
        self.num_classes = num_classes
        self.seed = seed
        self.params: dict[str, Tensor] = {
            "W_c": init_matrix(seed, "W_c", classifier_hidden, 2 * hidden_size),
            "b_c": init_bias("b_c", classifier_hidden),
            "W_p": init_matrix(seed, "W_p", num_classes, classifier_hidden),
            "b_p": init_bias("b_p", num_classes),
        }

    def features(self, graph: Graph, u: Tensor, v: Tensor) -> Tensor:
        if u.shape != (self.hidden_size,) or v.shape != (self.hidden_size,):
            raise DimensionError(
                f"sentence vectors {u.shape} and {v.shape}, expected ({self.hidden_size},)"
            )
        return graph.concat(graph.mul(u, v), graph.abs_diff(u, v))

    def forward(self, graph: Graph, u: Tensor, v: Tensor) -> Tensor:
        """p̂ for the pair; symmetric in (u, v)."""
        p = self.params
        h_s = graph.tanh(graph.add(graph.matvec(p["W_c"], self.features(graph, u, v)), p["b_c"]))
        return graph.softmax(graph.add(graph.matvec(p["W_p"], h_s), p["b_p"]))

    def parameters(self) -> dict[str, Tensor]:
        return dict(self.params)

    def describe(self) -> dict[str, Any]:
        return {
            "hidden_size": self.hidden_size,
            "classifier_hidden": self.classifier_hidden,
            "num_classes": self.num_classes,
            "seed": self.seed,
        }


def pair_loss(
    graph: Graph,
    batch: Sequence[tuple[np.ndarray, Tensor]],
    params: Mapping[str, Tensor] | None = None,
    weight_decay: float = 0.0,
) -> Tensor:
    """
    (1/m)·Σ KL(p ‖ p̂) + (λ/2)·‖θ‖².

    Pass weight_decay=0 when the decay is applied by the optimizer instead;
    only one of the two paths may be active.

    Raises:
        UsageError: on an empty batch.
    """
    if not batch:
        raise UsageError("pair_loss needs a non-empty batch")

    total: Tensor | None = None
    for p, p_hat in batch:
        term = graph.kl_divergence(p, p_hat)
        total = term if total is None else graph.add(total, term)
    loss = graph.scale(total, 1.0 / len(batch))

    if weight_decay > 0.0 and params:
        penalty: Tensor | None = None
        for tensor in params.values():
            term = graph.sum_squares(tensor)
            penalty = term if penalty is None else graph.add(penalty, term)
        loss = graph.add(loss, graph.scale(penalty, weight_decay / 2.0))
    return loss
