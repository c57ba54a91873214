"""Reverse-mode autodiff, AdaGrad and gradient checking."""

from .gradcheck import GradCheckReport, ParameterCheck, grad_check, relative_error
from .optim import AdaGrad, AdaGradState, adagrad_step
from .tensor import Graph, Operation, Tensor, constant

__all__ = [
    "AdaGrad",
    "AdaGradState",
    "GradCheckReport",
    "Graph",
    "Operation",
    "ParameterCheck",
    "Tensor",
    "adagrad_step",
    "constant",
    "grad_check",
    "relative_error",
]
