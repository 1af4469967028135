"""Exact algebra for rational Whitney tower link classification."""

__version__ = "0.1.0"
