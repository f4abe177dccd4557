"""Exact-arithmetic tools for invertible polynomials, their transpose
duality, and the associated p-adic Frobenius structure."""

__version__ = "0.1.0"
