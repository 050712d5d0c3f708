"""Exact verification of rank and splitting claims for tori built from
tensor products of Cayley-Dickson algebras."""

__version__ = "0.1.0"
