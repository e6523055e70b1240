"""Exact computations with unitary Dieudonne spaces and modules of signature (n-1, 1)."""

__version__ = "0.1.0"
