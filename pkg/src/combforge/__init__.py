"""Finite certificates for stars, combs, rayless trees and star-decompositions
on lazily represented countably infinite graphs."""

__version__ = "0.1.0"
