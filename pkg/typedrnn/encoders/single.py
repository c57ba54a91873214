"""DT-RNN-single: one shared child matrix."""

from ..autodiff import Graph, Tensor
from ..deptree import DepNode, RelationVocab
from .base import Activation, Encoder


class SingleEncoder(Encoder):
    """Child term W·h_k for every child regardless of position or relation."""

    def __init__(
        self,
        word_dim: int,
        hidden_size: int,
        relations: RelationVocab,
        seed: int = 0,
        composition: Activation = "tanh",
    ):
        super().__init__(word_dim, hidden_size, relations, seed, composition)
        self.add_matrix("W", hidden_size, hidden_size)

    @property
    def name(self) -> str:
        return "single"

    def child_term(
        self,
        graph: Graph,
        parent: DepNode,
        relation: str,
        child: DepNode,
        h_child: Tensor,
    ) -> Tensor:
        return graph.matvec(self.params["W"], h_child)
