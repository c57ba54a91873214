"""Tree encoders for the siamese sentence model."""

from .base import Encoder
from .positional import PositionalEncoder
from .relational import RelationalEncoder
from .single import SingleEncoder
from .typed import TypedEncoder

# Registry of available encoder kinds
ENCODERS: dict[str, type[Encoder]] = {
    "typed": TypedEncoder,
    "positional": PositionalEncoder,
    "relational": RelationalEncoder,
    "single": SingleEncoder,
}


__all__ = [
    "ENCODERS",
    "Encoder",
    "PositionalEncoder",
    "RelationalEncoder",
    "SingleEncoder",
    "TypedEncoder",
]
