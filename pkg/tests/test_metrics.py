"""Tests for correlation, error and accuracy metrics."""

import math

import numpy as np
import pytest

from typedrnn.errors import DegenerateInputError, DimensionError
from typedrnn.metrics import accuracy, confusion_matrix, mse, pearson, spearman
from typedrnn.tasks import get_task


def pearson_oracle(x, y) -> float:
    n = len(x)
    mx, my = sum(x) / n, sum(y) / n
    cov = sum((a - mx) * (b - my) for a, b in zip(x, y))
    return cov / math.sqrt(sum((a - mx) ** 2 for a in x) * sum((b - my) ** 2 for b in y))


def average_ranks(values) -> list[float]:
    order = sorted(range(len(values)), key=lambda i: values[i])
    ranks = [0.0] * len(values)
    i = 0
    while i < len(order):
        j = i
        while j + 1 < len(order) and values[order[j + 1]] == values[order[i]]:
            j += 1
        for k in range(i, j + 1):
            ranks[order[k]] = (i + j) / 2 + 1
        i = j + 1
    return ranks


def test_pearson_examples():
    assert pearson([1, 2, 3, 4], [2, 4, 6, 8]) == pytest.approx(1.0, abs=1e-12)
    assert pearson([1, 2, 3, 4], [8, 6, 4, 2]) == pytest.approx(-1.0, abs=1e-12)


def test_spearman_examples():
    assert spearman([1, 2, 3, 4], [1, 4, 9, 16]) == pytest.approx(1.0, abs=1e-12)
    assert spearman([1, 2, 3, 4], [4, 3, 2, 1]) == pytest.approx(-1.0, abs=1e-12)


def test_metrics_match_oracles():
    """50 random instances, including ties for Spearman."""
    rng = np.random.default_rng(0)
    for trial in range(50):
        n = int(rng.integers(3, 30))
        x = rng.normal(size=n)
        y = rng.normal(size=n)
        if trial % 5 == 0:
            x = np.round(x)
        assert pearson(x, y) == pytest.approx(pearson_oracle(x, y), abs=1e-12)
        assert spearman(x, y) == pytest.approx(
            pearson_oracle(average_ranks(list(x)), average_ranks(list(y))), abs=1e-12
        )
        assert mse(x, y) == pytest.approx(sum((a - b) ** 2 for a, b in zip(x, y)) / n, abs=1e-12)


def test_spearman_tie_case():
    """Ties take their average rank."""
    x, y = [1, 2, 2, 3], [1, 3, 2, 4]
    assert spearman(x, y) == pytest.approx(pearson_oracle([1, 2.5, 2.5, 4], [1, 3, 2, 4]), abs=1e-12)


def test_invariances():
    """Pearson under positive affine maps, Spearman under monotone ones."""
    rng = np.random.default_rng(1)
    x, y = rng.normal(size=20), rng.normal(size=20)
    assert pearson(3 * x + 2, y) == pytest.approx(pearson(x, y), abs=1e-12)
    assert spearman(np.exp(x), y) == pytest.approx(spearman(x, y), abs=1e-12)


def test_degenerate_inputs():
    with pytest.raises(DegenerateInputError):
        pearson([1, 1, 1], [1, 2, 3])
    with pytest.raises(DegenerateInputError):
        spearman([1], [2])
    with pytest.raises(DimensionError):
        mse([1, 2], [1])


def test_mse_examples():
    assert mse([1, 2, 3], [1, 2, 3]) == 0.0
    assert mse([2, 3, 4], [1, 2, 3]) == 1.0


def test_accuracy_and_confusion():
    labels = ["CONTRADICTION", "NEUTRAL", "ENTAILMENT"]
    gold = ["NEUTRAL", "ENTAILMENT", "ENTAILMENT", "CONTRADICTION"]
    assert accuracy(gold, gold) == 1.0
    assert accuracy(["CONTRADICTION"] * 3, ["NEUTRAL"] * 3) == 0.0
    pred = ["NEUTRAL", "NEUTRAL", "ENTAILMENT", "CONTRADICTION"]
    assert accuracy(pred, gold) == 0.75
    assert confusion_matrix(pred, gold, labels) == [[1, 0, 0], [0, 1, 0], [0, 1, 1]]


def test_relatedness_task_flags_constant_predictions():
    """Undefined correlations become flags, not NaN."""
    metrics = get_task("relatedness").evaluate([3.0, 3.0, 3.0], [1.0, 2.0, 4.0])
    assert metrics.pearson is None and metrics.spearman is None
    assert len(metrics.flags) == 2
    assert metrics.mse == pytest.approx((4 + 1 + 1) / 3)
