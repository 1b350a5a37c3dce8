"""Exact computation of secant defect invariants of parameterized varieties."""

__version__ = "0.1.0"
