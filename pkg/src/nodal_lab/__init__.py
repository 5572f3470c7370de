"""Numerical laboratory for nodal sets of eigenfunction sums and doubling estimates for polyharmonic subsolutions."""

__version__ = "0.1.0"
