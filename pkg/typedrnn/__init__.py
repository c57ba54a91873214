"""Typed dependency tree-RNNs for sentence-pair relatedness and entailment."""

__version__ = "0.1.0"
