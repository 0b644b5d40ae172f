"""Finite-group computation engine for p-central groups of bounded height."""

__version__ = "0.1.0"
