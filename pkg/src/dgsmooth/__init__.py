"""Exact bigraded computations with commutative DG-algebras."""

__version__ = "0.1.0"
