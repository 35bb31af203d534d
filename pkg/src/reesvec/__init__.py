"""Multigraded Hilbert polynomials, reduction vectors and postulation vectors
of filtrations of m-primary monomial ideals, in exact arithmetic."""

__version__ = "0.1.0"
