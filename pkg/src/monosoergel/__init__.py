"""Exact computations with multiplicative Soergel bimodules at small rank."""

__version__ = "0.1.0"
