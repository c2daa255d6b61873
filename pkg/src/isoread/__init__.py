"""Isotypic graph readouts built from automorphism orbit structure."""

__version__ = "0.1.0"
