"""AdaGrad optimizer with L2 weight decay."""

from collections.abc import Mapping
from dataclasses import dataclass, field

import numpy as np

from ..errors import ConfigError, GraphStateError
from .tensor import Tensor


@dataclass
class AdaGradState:
    """Per-parameter squared-gradient accumulators plus step settings."""

    learning_rate: float
    epsilon: float = 1e-8
    weight_decay: float = 0.0
    accumulators: dict[str, np.ndarray] = field(default_factory=dict)
    steps: int = 0

    def __post_init__(self) -> None:
        if self.learning_rate <= 0.0:
            raise ConfigError(f"Invalid learning rate: {self.learning_rate}")
        if self.epsilon <= 0.0:
            raise ConfigError(f"Invalid epsilon value: {self.epsilon}")
        if self.weight_decay < 0.0:
            raise ConfigError(f"Invalid weight_decay value: {self.weight_decay}")


def adagrad_step(params: Mapping[str, Tensor], state: AdaGradState) -> None:
    """
    Apply one AdaGrad update to every parameter, then clear its gradient.

    The effective gradient is g + weight_decay·θ; accumulators grow by its
    square and θ moves by -lr·g'/(√G + ε).

    Raises:
        GraphStateError: if any parameter has no gradient.
    """
    missing = [name for name, tensor in params.items() if tensor.grad is None]
    if missing:
        raise GraphStateError(f"no gradient for parameters: {', '.join(sorted(missing))}")

    for name, tensor in params.items():
        grad = tensor.grad
        if state.weight_decay != 0.0:
            grad = grad + state.weight_decay * tensor.values

        accumulator = state.accumulators.get(name)
        if accumulator is None:
            accumulator = np.zeros_like(tensor.values)
            state.accumulators[name] = accumulator

        accumulator += grad * grad
        tensor.values -= state.learning_rate * grad / (np.sqrt(accumulator) + state.epsilon)
        tensor.grad = None

    state.steps += 1


class AdaGrad:
    """Stateful wrapper around adagrad_step keyed by parameter name."""

    def __init__(self, learning_rate: float, epsilon: float = 1e-8, weight_decay: float = 0.0):
        self.state = AdaGradState(
            learning_rate=learning_rate, epsilon=epsilon, weight_decay=weight_decay
        )

    def zero_grad(self, params: Mapping[str, Tensor]) -> None:
        """Give every parameter a zero gradient so unused ones still step."""
        for tensor in params.values():
            tensor.zero_grad()

    def step(self, params: Mapping[str, Tensor]) -> None:
        adagrad_step(params, self.state)
