"""Gradient checks of full pair losses on random small trees."""

import logging
from dataclasses import dataclass

import numpy as np

from .autodiff import GradCheckReport, Graph, Tensor, grad_check
from .config import EncoderKind, Hyperparams
from .deptree import DepTree, RelationVocab
from .model import SiameseModel, build_model
from .pairmodel import pair_loss
from .synthetic import TREE_RELATIONS, random_tree, synthetic_embeddings

logger = logging.getLogger(__name__)

# Central differences at step 1e-5 carry roundoff near 1e-11, so a nonzero
# gradient entry below this floor cannot be checked to a relative 1e-4.
MIN_GRADIENT = 2e-6
MAX_DRAWS = 50


@dataclass
class PairCheck:
    """Gradient check of one random tree pair."""

    index: int
    words_a: list[str]
    words_b: list[str]
    smallest_gradient: float
    report: GradCheckReport


def random_pair(
    rng: np.random.Generator, min_words: int = 3, max_words: int = 8
) -> tuple[DepTree, DepTree]:
    tree_a = random_tree(rng, int(rng.integers(min_words, max_words + 1)))
    tree_b = random_tree(rng, int(rng.integers(min_words, max_words + 1)))
    return tree_a, tree_b


def materialize(model: SiameseModel, tree_a: DepTree, tree_b: DepTree) -> dict[str, Tensor]:
    """Parameters of the model after lazily created matrices exist."""
    model.forward(Graph(), tree_a, tree_b)
    return model.parameters()


def smallest_gradient(
    model: SiameseModel,
    tree_a: DepTree,
    tree_b: DepTree,
    target: np.ndarray,
    weight_decay: float = 0.0,
) -> float:
    """Smallest nonzero |∂loss/∂θ| over every parameter entry (inf if none)."""
    params = materialize(model, tree_a, tree_b)
    for tensor in params.values():
        tensor.grad = None
    graph = Graph()
    loss = pair_loss(graph, [(target, model.forward(graph, tree_a, tree_b))], params, weight_decay)
    graph.backward(loss)

    smallest = float("inf")
    for tensor in params.values():
        if tensor.grad is not None:
            magnitudes = np.abs(tensor.grad[tensor.grad != 0.0])
            if magnitudes.size:
                smallest = min(smallest, float(magnitudes.min()))
        tensor.grad = None
    return smallest


def check_model(
    model: SiameseModel,
    tree_a: DepTree,
    tree_b: DepTree,
    target: np.ndarray,
    weight_decay: float = 0.0,
    step: float = 1e-5,
    tol: float = 1e-4,
    corrupt_op: str | None = None,
) -> GradCheckReport:
    """Gradient check of the KL loss of one pair against every model parameter."""
    params = materialize(model, tree_a, tree_b)

    def build_loss(graph: Graph) -> Tensor:
        p_hat = model.forward(graph, tree_a, tree_b)
        return pair_loss(graph, [(target, p_hat)], params, weight_decay)

    return grad_check(build_loss, params, step=step, tol=tol, corrupt_op=corrupt_op)


def run_gradcheck(
    encoder_kind: EncoderKind,
    seed: int = 0,
    pairs: int = 5,
    tol: float = 1e-4,
    step: float = 1e-5,
    corrupt_op: str | None = None,
    weight_decay: float = 0.0,
) -> list[PairCheck]:
    """
    Check an encoder with the pair head and KL loss on random tree pairs.

    Each pair gets a fresh small model (h=3, r=2, c=4, d=4) and a random
    entailment-style target. Trees, target and initialization are redrawn
    until every nonzero gradient entry of the uncorrupted loss is at least
    MIN_GRADIENT, so the comparison is not dominated by roundoff.

    Args:
        encoder_kind: Registered encoder name
        seed: Seed for trees, targets and initialization
        pairs: Number of tree pairs (3-8 words each)
        tol: Relative-error tolerance
        step: Finite-difference step
        corrupt_op: Graph operation whose backward rule is corrupted
        weight_decay: Include the explicit L2 term in the checked loss

    Returns:
        One PairCheck per pair
    """
    relations = RelationVocab.from_labels([*TREE_RELATIONS, "root"])
    words = synthetic_embeddings(4, seed=seed, scale=1.0)
    results = []
    for index in range(pairs):
        rng = np.random.default_rng([seed, index])
        for draw in range(1, MAX_DRAWS + 1):
            tree_a, tree_b = random_pair(rng)
            hp = Hyperparams.for_task(
                "entailment",
                encoder_kind=encoder_kind,
                hidden_size=3,
                dep_embed_size=2,
                classifier_hidden=4,
                seed=int(rng.integers(2**31)),
            )
            model = build_model(hp, relations, words)
            target = rng.dirichlet(np.ones(hp.num_classes))
            smallest = smallest_gradient(model, tree_a, tree_b, target, weight_decay)
            if smallest >= MIN_GRADIENT:
                break
            logger.debug("pair %d draw %d: smallest gradient %.2e, redrawing", index, draw, smallest)
        else:
            logger.warning(
                "pair %d: no draw with all gradients above %.0e in %d tries", index, MIN_GRADIENT, MAX_DRAWS
            )

        report = check_model(
            model, tree_a, tree_b, target, weight_decay, step=step, tol=tol, corrupt_op=corrupt_op
        )
        logger.debug(
            "pair %d: %s max relative error %.2e", index, encoder_kind, report.max_relative_error
        )
        results.append(PairCheck(index, tree_a.words(), tree_b.words(), smallest, report))
    return results


def summarize(results: list[PairCheck]) -> dict[str, float]:
    """Maximum relative error per parameter name over all pairs."""
    summary: dict[str, float] = {}
    for result in results:
        for check in result.report.parameters:
            summary[check.name] = max(summary.get(check.name, 0.0), check.max_relative_error)
    return dict(sorted(summary.items()))
