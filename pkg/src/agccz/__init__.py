"""Triorthogonal algebraic-geometry codes over GF(2^(2m)) and |CCZ> state reduction."""

__version__ = "0.1.0"
