"""Dense tensors and a define-by-run reverse-mode autodiff graph."""

from collections.abc import Callable, Sequence
from dataclasses import dataclass
from typing import Literal

import numpy as np

from ..errors import DimensionError, DomainError, GraphStateError, ShapeError

BackwardRule = Callable[[np.ndarray], tuple[np.ndarray | None, ...]]

ActivationKind = Literal["tanh", "relu"]
ElementwiseKind = Literal["add", "sub", "mul", "abs_diff", "scale_by_constant"]

# Factor applied to an operation's local gradients when fault injection is on.
CORRUPTION_FACTOR = 1.5


class Tensor:
    """Rank-1 or rank-2 float64 array that can take part in a graph."""

    __slots__ = ("values", "requires_grad", "grad", "name")

    def __init__(
        self,
        values: np.ndarray | Sequence[float] | Sequence[Sequence[float]],
        requires_grad: bool = False,
        name: str | None = None,
    ):
        array = np.asarray(values, dtype=np.float64)
        if array.ndim not in (1, 2):
            raise ShapeError(f"tensor rank must be 1 or 2, got shape {array.shape}")
        if array.ndim == 2 and 0 in array.shape:
            raise ShapeError(f"matrix extents must be positive, got {array.shape}")
        self.values = array
        self.requires_grad = requires_grad
        self.grad: np.ndarray | None = None
        self.name = name

    @property
    def shape(self) -> tuple[int, ...]:
        return self.values.shape

    @property
    def ndim(self) -> int:
        return self.values.ndim

    @property
    def size(self) -> int:
        return self.values.size

    def item(self) -> float:
        """Value of a one-element tensor."""
        if self.values.size != 1:
            raise ShapeError(f"item() needs a single element, got shape {self.shape}")
        return float(self.values[0])

    def zero_grad(self) -> None:
        self.grad = np.zeros_like(self.values)

    def accumulate(self, grad: np.ndarray) -> None:
        if grad.shape != self.values.shape:
            raise DimensionError(
                f"gradient shape {grad.shape} does not match tensor shape {self.shape}"
            )
        self.grad = grad.copy() if self.grad is None else self.grad + grad

    def __repr__(self) -> str:
        label = f" name={self.name!r}" if self.name else ""
        return f"Tensor(shape={self.shape}, requires_grad={self.requires_grad}{label})"


def constant(values: np.ndarray | Sequence[float]) -> Tensor:
    """Wrap values as a tensor that never receives gradient."""
    return Tensor(values, requires_grad=False)


@dataclass
class Operation:
    """One executed operation in a graph."""

    name: str
    inputs: tuple[Tensor, ...]
    output: Tensor
    backward: BackwardRule


class Graph:
    """
    Ordered record of the operations that produced a loss.

    A graph is built per example: every operation method computes its
    output eagerly and, when any input requires a gradient, appends an
    Operation holding the local backward rule. Because operations are only
    ever appended after their inputs exist, the record is in topological
    order by construction.

    Args:
        record: When False, nothing is recorded and outputs never require
            gradients (inference mode).
        corrupt_op: Name of an operation whose backward rule is scaled by
            CORRUPTION_FACTOR. Only used as a negative control for
            gradient checking.
    """

    def __init__(self, record: bool = True, corrupt_op: str | None = None):
        self.record = record
        self.corrupt_op = corrupt_op
        self.operations: list[Operation] = []
        self._backward_done = False

    def _emit(
        self,
        name: str,
        inputs: tuple[Tensor, ...],
        values: np.ndarray,
        backward: BackwardRule,
    ) -> Tensor:
        requires_grad = self.record and any(t.requires_grad for t in inputs)
        output = Tensor(values, requires_grad=requires_grad)
        if requires_grad:
            self.operations.append(Operation(name, inputs, output, backward))
        return output

    # Operations

    def matvec(self, m: Tensor, x: Tensor) -> Tensor:
        """Matrix-vector product m·x."""
        if m.ndim != 2 or x.ndim != 1 or m.shape[1] != x.shape[0]:
            raise DimensionError(f"matvec: cannot multiply {m.shape} by {x.shape}")
        m_values, x_values = m.values, x.values

        def backward(g: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
            return np.outer(g, x_values), m_values.T @ g

        return self._emit("matvec", (m, x), m_values @ x_values, backward)

    def concat(self, a: Tensor, b: Tensor) -> Tensor:
        """Entries of a followed by entries of b."""
        if a.ndim != 1 or b.ndim != 1:
            raise ShapeError(f"concat needs rank-1 operands, got {a.shape} and {b.shape}")
        split = a.shape[0]

        def backward(g: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
            return g[:split], g[split:]

        return self._emit(
            "concat", (a, b), np.concatenate([a.values, b.values]), backward
        )

    def activation(self, x: Tensor, kind: ActivationKind) -> Tensor:
        if kind == "tanh":
            y = np.tanh(x.values)

            def backward(g: np.ndarray) -> tuple[np.ndarray]:
                return (g * (1.0 - y * y),)

        elif kind == "relu":
            y = np.maximum(x.values, 0.0)
            # Subgradient at 0 is 0.
            mask = (x.values > 0.0).astype(np.float64)

            def backward(g: np.ndarray) -> tuple[np.ndarray]:
                return (g * mask,)

        else:
            raise DomainError(f"unknown activation {kind!r}")
        return self._emit(kind, (x,), y, backward)

    def tanh(self, x: Tensor) -> Tensor:
        return self.activation(x, "tanh")

    def relu(self, x: Tensor) -> Tensor:
        return self.activation(x, "relu")

    def elementwise(
        self, a: Tensor, b: Tensor | float, kind: ElementwiseKind
    ) -> Tensor:
        """
        Elementwise binary operation.

        For kind="scale_by_constant", b is a plain number and no gradient
        flows into it. Every other kind needs equal shapes; there is no
        broadcasting.
        """
        if kind == "scale_by_constant":
            if isinstance(b, Tensor):
                raise DimensionError("scale_by_constant: factor must be a number")
            factor = float(b)

            def backward_scale(g: np.ndarray) -> tuple[np.ndarray]:
                return (g * factor,)

            return self._emit("scale_by_constant", (a,), a.values * factor, backward_scale)

        if not isinstance(b, Tensor):
            raise DimensionError(f"{kind}: second operand must be a tensor")
        if a.shape != b.shape:
            raise DimensionError(f"{kind}: shape mismatch {a.shape} vs {b.shape}")
        av, bv = a.values, b.values

        if kind == "add":
            values = av + bv

            def backward(g: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
                return g, g

        elif kind == "sub":
            values = av - bv

            def backward(g: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
                return g, -g

        elif kind == "mul":
            values = av * bv

            def backward(g: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
                return g * bv, g * av

        elif kind == "abs_diff":
            diff = av - bv
            values = np.abs(diff)
            # np.sign(0) == 0 gives the zero subgradient at the kink.
            sign = np.sign(diff)

            def backward(g: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
                return g * sign, -g * sign

        else:
            raise DomainError(f"unknown elementwise kind {kind!r}")
        return self._emit(kind, (a, b), values, backward)

    def add(self, a: Tensor, b: Tensor) -> Tensor:
        return self.elementwise(a, b, "add")

    def sub(self, a: Tensor, b: Tensor) -> Tensor:
        return self.elementwise(a, b, "sub")

    def mul(self, a: Tensor, b: Tensor) -> Tensor:
        return self.elementwise(a, b, "mul")

    def abs_diff(self, a: Tensor, b: Tensor) -> Tensor:
        return self.elementwise(a, b, "abs_diff")

    def scale(self, a: Tensor, factor: float) -> Tensor:
        return self.elementwise(a, factor, "scale_by_constant")

    def sum(self, x: Tensor) -> Tensor:
        """Sum of all entries as a one-element tensor."""
        shape = x.shape

        def backward(g: np.ndarray) -> tuple[np.ndarray]:
            return (np.full(shape, g[0]),)

        return self._emit("sum", (x,), np.array([x.values.sum()]), backward)

    def sum_squares(self, x: Tensor) -> Tensor:
        """Squared L2 norm of all entries as a one-element tensor."""
        xv = x.values

        def backward(g: np.ndarray) -> tuple[np.ndarray]:
            return (2.0 * g[0] * xv,)

        return self._emit("sum_squares", (x,), np.array([np.sum(xv * xv)]), backward)

    def softmax(self, x: Tensor) -> Tensor:
        if x.ndim != 1 or x.shape[0] < 1:
            raise ShapeError(f"softmax needs a non-empty rank-1 tensor, got {x.shape}")
        shifted = np.exp(x.values - x.values.max())
        p = shifted / shifted.sum()

        def backward(g: np.ndarray) -> tuple[np.ndarray]:
            return (p * (g - np.dot(g, p)),)

        return self._emit("softmax", (x,), p, backward)

    def kl_divergence(self, p: np.ndarray | Sequence[float], p_hat: Tensor) -> Tensor:
        """
        KL(p ‖ p_hat) with the 0·log 0 = 0 convention.

        p is a constant target distribution; only p_hat receives gradient.
        """
        target = np.asarray(p, dtype=np.float64)
        if target.shape != p_hat.shape or p_hat.ndim != 1:
            raise DimensionError(
                f"kl_divergence: target shape {target.shape} vs prediction {p_hat.shape}"
            )
        if np.any(target < 0.0) or np.any(target > 1.0) or abs(target.sum() - 1.0) > 1e-9:
            raise DomainError(f"kl_divergence: target is not a distribution: {target}")
        predicted = p_hat.values
        if np.any(predicted <= 0.0):
            raise DomainError(
                f"kl_divergence: prediction has non-positive entries: {predicted}"
            )
        support = target > 0.0
        value = np.sum(target[support] * np.log(target[support] / predicted[support]))

        def backward(g: np.ndarray) -> tuple[np.ndarray]:
            return (-g[0] * target / predicted,)

        return self._emit("kl_divergence", (p_hat,), np.array([value]), backward)

    # Reverse pass

    def backward(self, loss: Tensor) -> None:
        """
        Accumulate d(loss)/d(t) into t.grad for every tensor t in the graph.

        Leaf tensors accumulate on top of any gradient they already hold,
        so several graphs can contribute to the same parameters. Running
        backward twice on one graph is an error until zero_grad() is called.
        """
        if loss.shape != (1,):
            raise ShapeError(f"loss must be a one-element rank-1 tensor, got {loss.shape}")
        if self._backward_done:
            raise GraphStateError("backward already ran on this graph; call zero_grad() first")
        if not loss.requires_grad or not self.operations:
            raise GraphStateError("loss does not depend on any trainable tensor")
        if self.operations[-1].output is not loss:
            raise GraphStateError("loss must be the last output recorded in the graph")

        loss.accumulate(np.ones(1))
        for op in reversed(self.operations):
            g = op.output.grad
            if g is None:
                continue
            local = op.backward(g)
            if op.name == self.corrupt_op:
                local = tuple(
                    None if lg is None else lg * CORRUPTION_FACTOR for lg in local
                )
            for tensor, grad in zip(op.inputs, local):
                if tensor.requires_grad and grad is not None:
                    tensor.accumulate(grad)
        self._backward_done = True

    def zero_grad(self) -> None:
        """Clear gradients of every tensor in the graph and re-arm backward."""
        for op in self.operations:
            op.output.grad = None
            for tensor in op.inputs:
                tensor.grad = None
        self._backward_done = False
