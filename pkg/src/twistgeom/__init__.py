"""Exact twist deformations of differential geometry on R^n."""

__version__ = "0.1.0"
