"""Exact combinatorics of quadratic laminations on the circle."""

__version__ = "0.1.0"
