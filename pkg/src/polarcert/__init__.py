"""Finite classical polar spaces, weighted intriguing sets and exact
certificates for ovoid non-existence."""

__version__ = "0.1.0"
