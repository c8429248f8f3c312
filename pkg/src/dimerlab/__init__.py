"""Exact and numerical tools for the bipartite dimer model on planar graphs."""

__version__ = "0.1.0"
