"""Hypergraph Catalan numbers by tree sums, generating functions and gluings."""

__version__ = "0.1.0"
