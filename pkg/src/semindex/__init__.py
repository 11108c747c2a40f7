"""Cognitive-agent text indexing with bipartite spectral co-clustering."""

__version__ = "0.1.0"
