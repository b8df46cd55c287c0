"""Spectral analysis of first-order product formulas on small spin chains."""

__version__ = "0.1.0"
