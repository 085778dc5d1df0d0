"""Similarity metrics for evaluating code migration."""

__version__ = "0.1.0"
