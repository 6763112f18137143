"""Cayley-graph metric experiments: L_delta estimation, almost convexity,
and recursive-trisection van Kampen fillings."""

__version__ = "0.1.0"
