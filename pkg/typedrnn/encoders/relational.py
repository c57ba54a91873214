"""SDT-RNN: child matrix chosen by dependency relation."""

from ..autodiff import Graph, Tensor
from ..deptree import DepNode, RelationVocab
from .base import Activation, Encoder


def relation_name(label: str) -> str:
    return f"W_dep[{label}]"


class RelationalEncoder(Encoder):
    """Child term W_dep(t,k)·h_k, one [h×h] matrix per vocabulary entry."""

    def __init__(
        self,
        word_dim: int,
        hidden_size: int,
        relations: RelationVocab,
        seed: int = 0,
        composition: Activation = "tanh",
    ):
        super().__init__(word_dim, hidden_size, relations, seed, composition)
        for label in relations.labels:
            self.add_matrix(relation_name(label), hidden_size, hidden_size)

    @property
    def name(self) -> str:
        return "relational"

    def child_term(
        self,
        graph: Graph,
        parent: DepNode,
        relation: str,
        child: DepNode,
        h_child: Tensor,
    ) -> Tensor:
        # Unseen labels fall back to the UNK matrix.
        label = self.relations.label(self.relations.index(relation))
        return graph.matvec(self.params[relation_name(label)], h_child)
