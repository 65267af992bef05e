"""Exact polytope constructions, circle-packing realizations and f-vector tools."""

__version__ = "0.1.0"
