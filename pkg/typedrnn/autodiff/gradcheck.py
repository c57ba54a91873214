"""Finite-difference verification of autodiff gradients."""

import math
from collections.abc import Callable, Mapping
from dataclasses import dataclass, field

import numpy as np

from ..errors import DomainError
from .tensor import Graph, Tensor

LossBuilder = Callable[[Graph], Tensor]


@dataclass
class ParameterCheck:
    """Comparison result for one parameter tensor."""

    name: str
    size: int
    max_relative_error: float
    flagged: list[tuple[int, ...]] = field(default_factory=list)


@dataclass
class GradCheckReport:
    """Per-parameter maximum relative errors of one gradient check."""

    step: float
    tolerance: float
    loss: float
    parameters: list[ParameterCheck] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not any(p.flagged for p in self.parameters)

    @property
    def max_relative_error(self) -> float:
        return max((p.max_relative_error for p in self.parameters), default=0.0)


def relative_error(analytic: float, numeric: float) -> float:
    return abs(analytic - numeric) / max(abs(analytic), abs(numeric), 1e-8)


def _loss_value(build_loss: LossBuilder) -> float:
    value = build_loss(Graph(record=False)).item()
    if not math.isfinite(value):
        raise DomainError(f"loss is not finite: {value}")
    return value


def grad_check(
    build_loss: LossBuilder,
    params: Mapping[str, Tensor],
    step: float = 1e-5,
    tol: float = 1e-4,
    corrupt_op: str | None = None,
) -> GradCheckReport:
    """
    Compare autodiff gradients against central finite differences.

    Args:
        build_loss: Builds the scalar loss inside the graph it is given,
            reading the current parameter values. Must be deterministic.
        params: Named parameters to check. Their values are perturbed in
            place and restored.
        step: Finite-difference step.
        tol: Entries whose relative error exceeds this are flagged.
        corrupt_op: Forwarded to the analytic graph as a negative control.

    Returns:
        GradCheckReport with one ParameterCheck per parameter.
    """
    for tensor in params.values():
        tensor.grad = None

    graph = Graph(corrupt_op=corrupt_op)
    loss = build_loss(graph)
    loss_value = loss.item()
    if not math.isfinite(loss_value):
        raise DomainError(f"loss is not finite: {loss_value}")
    graph.backward(loss)

    report = GradCheckReport(step=step, tolerance=tol, loss=loss_value)
    for name, tensor in params.items():
        analytic = (
            tensor.grad.copy() if tensor.grad is not None else np.zeros_like(tensor.values)
        )
        check = ParameterCheck(name=name, size=tensor.size, max_relative_error=0.0)

        for index in np.ndindex(tensor.shape):
            original = tensor.values[index]
            tensor.values[index] = original + step
            plus = _loss_value(build_loss)
            tensor.values[index] = original - step
            minus = _loss_value(build_loss)
            tensor.values[index] = original

            numeric = (plus - minus) / (2.0 * step)
            error = relative_error(float(analytic[index]), numeric)
            check.max_relative_error = max(check.max_relative_error, error)
            if error > tol:
                check.flagged.append(index)

        report.parameters.append(check)
        tensor.grad = None

    return report
