"""Base interface for tree encoders."""

import zlib
from abc import ABC, abstractmethod
from typing import Any, Literal

import numpy as np

from ..autodiff import Graph, Tensor
from ..deptree import DepNode, DepTree, RelationVocab
from ..embeddings import WordEmbeddings

Activation = Literal["tanh", "relu"]


def named_rng(seed: int, name: str) -> np.random.Generator:
    """Generator that depends only on (seed, name), not on creation order."""
    return np.random.default_rng([seed, zlib.crc32(name.encode("utf-8"))])


def init_matrix(seed: int, name: str, rows: int, cols: int) -> Tensor:
    """Uniform in [-1/√fan_in, 1/√fan_in], fan_in = cols."""
    bound = 1.0 / np.sqrt(cols)
    values = named_rng(seed, name).uniform(-bound, bound, size=(rows, cols))
    return Tensor(values, requires_grad=True, name=name)


def init_bias(name: str, size: int) -> Tensor:
    return Tensor(np.zeros(size), requires_grad=True, name=name)


class Encoder(ABC):
    """
    Bottom-up composition over a dependency tree.

    Every variant computes, for node t with word vector x_t,

        h_t = f( (1/l(t)) · (W_v·x_t + Σ_k l(k) · child_term(t, k)) )

    and differs only in child_term. There is no bias on the node
    transition.
    """

    def __init__(
        self,
        word_dim: int,
        hidden_size: int,
        relations: RelationVocab,
        seed: int = 0,
        composition: Activation = "tanh",
    ):
        self.word_dim = word_dim
        self.hidden_size = hidden_size
        self.relations = relations
        self.seed = seed
        self.composition = composition
        self.params: dict[str, Tensor] = {}
        self.add_matrix("W_v", hidden_size, word_dim)

    @property
    @abstractmethod
    def name(self) -> str:
        """Registry name of this encoder kind."""
        ...

    @abstractmethod
    def child_term(
        self,
        graph: Graph,
        parent: DepNode,
        relation: str,
        child: DepNode,
        h_child: Tensor,
    ) -> Tensor:
        """
        Contribution of one child before the l(k) weighting.

        Args:
            graph: Graph the forward pass is recorded in
            parent: Node t
            relation: Label on the edge t → k
            child: Node k
            h_child: Hidden state h_k

        Returns:
            Vector of size hidden_size
        """
        ...

    def add_matrix(self, name: str, rows: int, cols: int) -> Tensor:
        tensor = init_matrix(self.seed, name, rows, cols)
        self.params[name] = tensor
        return tensor

    def add_bias(self, name: str, size: int) -> Tensor:
        tensor = init_bias(name, size)
        self.params[name] = tensor
        return tensor

    def encode(self, graph: Graph, tree: DepTree, words: WordEmbeddings) -> Tensor:
        """Root hidden state of tree."""
        states: dict[int, tuple[Tensor, int]] = {}
        w_v = self.params["W_v"]

        for node in tree.postorder():
            total = graph.matvec(w_v, words.lookup(node.word_form))
            size = 1
            for relation, child in node.children:
                h_child, child_size = states.pop(child.token_index)
                term = self.child_term(graph, node, relation, child, h_child)
                total = graph.add(total, graph.scale(term, float(child_size)))
                size += child_size
            h = graph.activation(graph.scale(total, 1.0 / size), self.composition)
            states[node.token_index] = (h, size)

        return states[tree.root.token_index][0]

    def parameters(self) -> dict[str, Tensor]:
        return dict(self.params)

    def parameter_count(self) -> int:
        return sum(t.size for t in self.params.values())

    def describe(self) -> dict[str, Any]:
        """Constructor settings."""
        return {
            "kind": self.name,
            "word_dim": self.word_dim,
            "hidden_size": self.hidden_size,
            "seed": self.seed,
            "composition": self.composition,
        }
