"""Typed DT-RNN: one shared child matrix over (h_k : d_k)."""

from typing import Any

from ..autodiff import Graph, Tensor
from ..deptree import DepNode, RelationVocab, one_hot
from ..errors import ShapeError
from .base import Activation, Encoder


class TypedEncoder(Encoder):
    """
    Child term W_r·(h_k : d_k) with d_k = g(W_d·z_k + b_d).

    Parameters: W_v [h×d], W_r [h×(h+r)], W_d [r×|V|], b_d [r].
    """

    def __init__(
        self,
        word_dim: int,
        hidden_size: int,
        relations: RelationVocab,
        dep_embed_size: int = 10,
        seed: int = 0,
        composition: Activation = "tanh",
        dependency_activation: Activation = "relu",
    ):
        super().__init__(word_dim, hidden_size, relations, seed, composition)
        self.dep_embed_size = dep_embed_size
        self.dependency_activation = dependency_activation
        self.add_matrix("W_r", hidden_size, hidden_size + dep_embed_size)
        self.add_matrix("W_d", dep_embed_size, len(relations))
        self.add_bias("b_d", dep_embed_size)

    @property
    def name(self) -> str:
        return "typed"

    def dep_embed(self, graph: Graph, z: Tensor) -> Tensor:
        """d_k = g(W_d·z_k + b_d)."""
        w_d = self.params["W_d"]
        if z.shape != (w_d.shape[1],):
            raise ShapeError(
                f"one-hot has shape {z.shape}, relation vocabulary has {w_d.shape[1]} entries"
            )
        pre = graph.add(graph.matvec(w_d, z), self.params["b_d"])
        return graph.activation(pre, self.dependency_activation)

    def child_term(
        self,
        graph: Graph,
        parent: DepNode,
        relation: str,
        child: DepNode,
        h_child: Tensor,
    ) -> Tensor:
        d_k = self.dep_embed(graph, one_hot(relation, self.relations))
        return graph.matvec(self.params["W_r"], graph.concat(h_child, d_k))

    def describe(self) -> dict[str, Any]:
        return {
            **super().describe(),
            "dep_embed_size": self.dep_embed_size,
            "dependency_activation": self.dependency_activation,
        }
