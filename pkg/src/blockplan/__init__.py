"""Blocked two-level factorial designs with guaranteed effect estimability."""

__version__ = "0.1.0"
