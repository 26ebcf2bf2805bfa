"""Finite-depth computations with formal schemes, closures and foliations."""

__version__ = "0.1.0"
