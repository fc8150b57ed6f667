"""Gauss-Newton solving of polynomial systems in extended precision."""

from .xprec import (Complex, DomainError, DoubleDouble, PrecisionLevel,
                    QuadDouble, precision_level, two_prod, two_sum)

__all__ = [
    "Complex",
    "DomainError",
    "DoubleDouble",
    "PrecisionLevel",
    "QuadDouble",
    "precision_level",
    "two_prod",
    "two_sum",
]

__version__ = "0.1.0"
