"""Exact Mordell-Weil and monodromy computations for genus-one fibrations."""

__version__ = "0.1.0"
