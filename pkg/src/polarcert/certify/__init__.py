"""Exact certificates for the non-existence arguments."""
