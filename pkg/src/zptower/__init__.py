"""Exact zeta and L-function data for p-cyclic towers over the affine line."""

__version__ = "0.1.0"
