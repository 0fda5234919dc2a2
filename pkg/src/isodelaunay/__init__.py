"""Exact computation with isodelaunay decompositions of translation surface strata."""

__version__ = "0.1.0"
