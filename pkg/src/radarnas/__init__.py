"""Synthetic FMCW radar object classification with evolutionary architecture search."""

__version__ = "0.1.0"
