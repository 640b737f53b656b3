"""Numerical laboratory for Cesaro summability of general orthonormal expansions."""
__version__ = "0.1.0"
