"""Projections in L^1(G) for concrete unimodular groups."""

__version__ = "0.1.0"
