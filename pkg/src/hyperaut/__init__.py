"""Automorphism groups of hyperelliptic curves from exact invariants and Moebius symmetry."""

__version__ = "0.1.0"
