"""DT-RNN: child matrix chosen by relative position."""

from typing import Any

from ..autodiff import Graph, Tensor
from ..deptree import DepNode, RelationVocab, child_offset
from .base import Activation, Encoder, init_matrix


def offset_name(offset: int) -> str:
    """W_l1, W_l2, ... for left children and W_r1, W_r2, ... for right ones."""
    side = "l" if offset < 0 else "r"
    return f"W_{side}{abs(offset)}"


class PositionalEncoder(Encoder):
    """
    Child term W_loc(t,k)·h_k.

    Position matrices are created on first use in a recording graph.
    Offsets beyond max_offset share the matrix of the extreme offset on
    their side. Inference passes never add parameters: an offset not yet
    created gets its initial values without being stored.
    """

    def __init__(
        self,
        word_dim: int,
        hidden_size: int,
        relations: RelationVocab,
        max_offset: int = 10,
        seed: int = 0,
        composition: Activation = "tanh",
    ):
        super().__init__(word_dim, hidden_size, relations, seed, composition)
        if max_offset < 1:
            raise ValueError(f"max_offset must be positive, got {max_offset}")
        self.max_offset = max_offset

    @property
    def name(self) -> str:
        return "positional"

    def clamp(self, offset: int) -> int:
        return max(-self.max_offset, min(self.max_offset, offset))

    def position_matrix(self, offset: int, create: bool = True) -> Tensor:
        name = offset_name(self.clamp(offset))
        if name in self.params:
            return self.params[name]
        if create:
            return self.add_matrix(name, self.hidden_size, self.hidden_size)
        return init_matrix(self.seed, name, self.hidden_size, self.hidden_size)

    def child_term(
        self,
        graph: Graph,
        parent: DepNode,
        relation: str,
        child: DepNode,
        h_child: Tensor,
    ) -> Tensor:
        matrix = self.position_matrix(child_offset(parent, child), create=graph.record)
        return graph.matvec(matrix, h_child)

    def parameter_count(self) -> int:
        """Size of the full family, including matrices not yet created."""
        return self.hidden_size * self.word_dim + 2 * self.max_offset * self.hidden_size**2

    def describe(self) -> dict[str, Any]:
        return {**super().describe(), "max_offset": self.max_offset}
