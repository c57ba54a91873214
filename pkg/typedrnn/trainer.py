"""Mini-batch AdaGrad training with dev-set model selection."""

import logging
import math
import time
from collections.abc import Callable, Sequence
from dataclasses import dataclass, field

import numpy as np

from .autodiff import AdaGrad, Graph, Tensor
from .config import Hyperparams
from .errors import NumericError, UsageError
from .metrics import MetricRecord
from .model import SiameseModel
from .pairmodel import pair_loss
from .sick import PairExample

logger = logging.getLogger(__name__)


@dataclass
class EpochRecord:
    """One row of the learning-curve log."""

    epoch: int
    train_loss: float
    dev_metric: float | None
    test_metric: float | None
    wall_seconds: float
    dev: MetricRecord | None = None
    test: MetricRecord | None = None

    def as_row(self) -> dict[str, float | int | None]:
        row: dict[str, float | int | None] = {
            "epoch": self.epoch,
            "train_loss": self.train_loss,
            "dev_metric": self.dev_metric,
            "test_metric": self.test_metric,
            "wall_seconds": self.wall_seconds,
        }
        for prefix, metrics in (("dev", self.dev), ("test", self.test)):
            if metrics is not None:
                for key, value in metrics.as_row().items():
                    if key != "n":
                        row[f"{prefix}_{key}"] = value
        return row


@dataclass
class TrainState:
    """Progress of a training run."""

    epoch: int = 0
    best_epoch: int | None = None
    best_metric: float | None = None
    best_params: dict[str, np.ndarray] | None = None
    log: list[EpochRecord] = field(default_factory=list)


@dataclass
class TrainResult:
    final_params: dict[str, np.ndarray]
    best_params: dict[str, np.ndarray]
    best_epoch: int
    log: list[EpochRecord]
    optimizer: AdaGrad


EpochCallback = Callable[[EpochRecord], None]


def batch_loss(
    model: SiameseModel,
    graph: Graph,
    batch: Sequence[PairExample],
    weight_decay: float = 0.0,
) -> Tensor:
    """Average KL of a batch built in one graph, plus the explicit L2 term if any."""
    pairs = [
        (model.task.target(example.record).p, model.forward(graph, example.tree_a, example.tree_b))
        for example in batch
    ]
    return pair_loss(graph, pairs, model.parameters(), weight_decay)


def evaluate(model: SiameseModel, examples: Sequence[PairExample]) -> MetricRecord:
    """
    Task metrics of the model on a split, plus its mean KL.

    Raises:
        UsageError: on an empty split.
    """
    if not examples:
        raise UsageError("cannot evaluate an empty split")
    predictions, golds, kl_total = [], [], 0.0
    for example in examples:
        graph = Graph(record=False)
        p_hat = model.forward(graph, example.tree_a, example.tree_b)
        target = model.task.target(example.record).p
        kl_total += graph.kl_divergence(target, p_hat).item()
        predictions.append(model.task.predict(p_hat.values))
        golds.append(model.task.gold(example.record))
    metrics = model.task.evaluate(predictions, golds)
    metrics.loss = kl_total / len(examples)
    return metrics


def epoch_batches(rng: np.random.Generator, size: int, batch_size: int) -> list[np.ndarray]:
    """One seeded permutation cut into batches; the last one may be smaller."""
    order = rng.permutation(size)
    return [order[i : i + batch_size] for i in range(0, size, batch_size)]


def train(
    model: SiameseModel,
    train_examples: Sequence[PairExample],
    hp: Hyperparams,
    dev_examples: Sequence[PairExample] | None = None,
    test_examples: Sequence[PairExample] | None = None,
    on_epoch: EpochCallback | None = None,
) -> TrainResult:
    """
    Train the model in place.

    Each epoch shuffles the training pairs with a seeded permutation, takes
    one AdaGrad step per batch on the averaged batch loss, then evaluates
    the dev split (and test split, when given). The parameters of the epoch
    with the best dev selection metric are retained; without a dev split
    the final parameters are the best ones.

    Raises:
        UsageError: on an empty training split.
        NumericError: when a batch loss is not finite.
    """
    if not train_examples:
        raise UsageError("training split is empty")

    rng = np.random.default_rng(hp.seed)
    loss_decay = hp.weight_decay if hp.decay_mode == "loss" else 0.0
    optimizer = AdaGrad(
        learning_rate=hp.learning_rate,
        epsilon=hp.epsilon,
        weight_decay=hp.weight_decay if hp.decay_mode == "optimizer" else 0.0,
    )
    state = TrainState()
    task = model.task

    for epoch in range(1, hp.epochs + 1):
        started = time.perf_counter()
        state.epoch = epoch
        losses = []

        for batch_no, indices in enumerate(epoch_batches(rng, len(train_examples), hp.batch_size), start=1):
            batch = [train_examples[i] for i in indices]
            optimizer.zero_grad(model.parameters())
            graph = Graph()
            loss = batch_loss(model, graph, batch, loss_decay)
            value = loss.item()
            if not math.isfinite(value):
                raise NumericError(f"non-finite loss {value} at epoch {epoch}, batch {batch_no}")
            graph.backward(loss)
            # Matrices created lazily during this forward pass are included.
            optimizer.step(model.parameters())
            losses.append(value)

        dev = evaluate(model, dev_examples) if dev_examples else None
        test = evaluate(model, test_examples) if test_examples else None
        record = EpochRecord(
            epoch=epoch,
            train_loss=float(np.mean(losses)),
            dev_metric=task.selection_value(dev) if dev else None,
            test_metric=task.selection_value(test) if test else None,
            wall_seconds=time.perf_counter() - started,
            dev=dev,
            test=test,
        )
        state.log.append(record)

        if dev is None:
            state.best_epoch, state.best_params = epoch, model.snapshot()
        elif record.dev_metric is not None and (
            state.best_metric is None or record.dev_metric > state.best_metric
        ):
            state.best_epoch, state.best_metric = epoch, record.dev_metric
            state.best_params = model.snapshot()

        logger.info(
            "epoch %d/%d loss %.5f dev %s=%s test %s=%s (%.1fs)",
            epoch,
            hp.epochs,
            record.train_loss,
            task.selection_metric,
            _fmt(record.dev_metric),
            task.selection_metric,
            _fmt(record.test_metric),
            record.wall_seconds,
        )
        if on_epoch is not None:
            on_epoch(record)

    final = model.snapshot()
    if state.best_params is None:
        # Dev metric undefined in every epoch.
        state.best_epoch, state.best_params = hp.epochs, final
    return TrainResult(
        final_params=final,
        best_params=state.best_params,
        best_epoch=state.best_epoch,
        log=state.log,
        optimizer=optimizer,
    )


def _fmt(value: float | None) -> str:
    return "n/a" if value is None else f"{value:.4f}"
