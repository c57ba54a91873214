"""Siamese sentence-pair model: tree encoder(s), pair head and task."""

from typing import Any

import numpy as np

from .autodiff import Graph, Tensor
from .config import Hyperparams
from .deptree import DepTree, RelationVocab
from .embeddings import WordEmbeddings
from .encoders import ENCODERS, Encoder
from .errors import CompatibilityError
from .pairmodel import PairHead
from .sick import PairExample
from .tasks import Task, get_task


class SiameseModel:
    """
    Encode both sentences and classify the pair.

    With a single encoder the weights are tied: both sentences go through
    the same parameters and their gradients accumulate there. Passing
    right_encoder gives an untied control model.
    """

    def __init__(
        self,
        encoder: Encoder,
        head: PairHead,
        task: Task,
        words: WordEmbeddings,
        right_encoder: Encoder | None = None,
    ):
        if head.num_classes != task.num_classes:
            raise CompatibilityError(
                f"head predicts {head.num_classes} classes, task {task.name} needs {task.num_classes}"
            )
        if head.hidden_size != encoder.hidden_size:
            raise CompatibilityError(
                f"head expects vectors of size {head.hidden_size}, encoder gives {encoder.hidden_size}"
            )
        if encoder.word_dim != words.dim:
            raise CompatibilityError(
                f"encoder expects word vectors of size {encoder.word_dim}, embeddings have {words.dim}"
            )
        self.encoder = encoder
        self.right_encoder = right_encoder
        self.head = head
        self.task = task
        self.words = words

    @property
    def tied(self) -> bool:
        return self.right_encoder is None

    def encode_pair(self, graph: Graph, tree_a: DepTree, tree_b: DepTree) -> tuple[Tensor, Tensor]:
        right = self.right_encoder or self.encoder
        return (
            self.encoder.encode(graph, tree_a, self.words),
            right.encode(graph, tree_b, self.words),
        )

    def forward(self, graph: Graph, tree_a: DepTree, tree_b: DepTree) -> Tensor:
        """p̂ for a tree pair."""
        u, v = self.encode_pair(graph, tree_a, tree_b)
        return self.head.forward(graph, u, v)

    def predict_distribution(self, tree_a: DepTree, tree_b: DepTree) -> np.ndarray:
        """p̂ without recording a graph."""
        return self.forward(Graph(record=False), tree_a, tree_b).values

    def predict(self, example: PairExample) -> float | str:
        return self.task.predict(self.predict_distribution(example.tree_a, example.tree_b))

    def parameters(self) -> dict[str, Tensor]:
        """All trainable tensors, keyed "<component>.<name>"."""
        params = {f"encoder.{k}": t for k, t in self.encoder.params.items()}
        if self.right_encoder is not None:
            params.update({f"encoder_b.{k}": t for k, t in self.right_encoder.params.items()})
        params.update({f"head.{k}": t for k, t in self.head.params.items()})
        return params

    def load_parameters(self, arrays: dict[str, np.ndarray]) -> None:
        """Install named arrays, creating lazily-built encoder matrices as needed."""
        components = {"encoder": self.encoder, "head": self.head}
        if self.right_encoder is not None:
            components["encoder_b"] = self.right_encoder
        for key, array in arrays.items():
            component, _, name = key.partition(".")
            if component not in components:
                raise CompatibilityError(f"checkpoint parameter {key} has no place in this model")
            target = components[component].params
            if name in target and target[name].shape != array.shape:
                raise CompatibilityError(
                    f"parameter {key}: checkpoint shape {array.shape}, model shape {target[name].shape}"
                )
            target[name] = Tensor(np.array(array, dtype=np.float64), requires_grad=True, name=name)

    def describe(self) -> dict[str, Any]:
        """Component settings and sizes, stored in checkpoint metadata."""
        described = {
            "encoder": self.encoder.describe(),
            "head": self.head.describe(),
            "task": self.task.name,
            "tied": self.tied,
            "encoder_parameters": self.encoder.parameter_count(),
        }
        if self.right_encoder is not None:
            described["encoder_b"] = self.right_encoder.describe()
        return described

    def snapshot(self) -> dict[str, np.ndarray]:
        return {name: t.values.copy() for name, t in self.parameters().items()}


def build_encoder_from_hp(hp: Hyperparams, relations: RelationVocab, word_dim: int, seed: int) -> Encoder:
    common = dict(
        word_dim=word_dim,
        hidden_size=hp.hidden_size,
        relations=relations,
        seed=seed,
        composition=hp.composition_activation,
    )
    if hp.encoder_kind == "typed":
        return ENCODERS["typed"](
            dep_embed_size=hp.dep_embed_size,
            dependency_activation=hp.dependency_activation,
            **common,
        )
    if hp.encoder_kind == "positional":
        return ENCODERS["positional"](max_offset=hp.max_offset, **common)
    return ENCODERS[hp.encoder_kind](**common)


def build_model(
    hp: Hyperparams,
    relations: RelationVocab,
    words: WordEmbeddings,
    tied: bool = True,
) -> SiameseModel:
    """Fresh model with seeded initialization."""
    encoder = build_encoder_from_hp(hp, relations, words.dim, hp.seed)
    right = None if tied else build_encoder_from_hp(hp, relations, words.dim, hp.seed + 1)
    head = PairHead(hp.hidden_size, hp.classifier_hidden, hp.num_classes, seed=hp.seed)
    return SiameseModel(encoder, head, get_task(hp.task), words, right_encoder=right)
