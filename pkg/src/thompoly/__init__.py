"""Thom polynomials of Morin singularities from blow-up trees and iterated residues."""

__version__ = "0.1.0"
