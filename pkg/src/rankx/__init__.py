"""Explicit rank extractors, subspace designs and blocking sets over finite fields."""

__version__ = "0.1.0"
