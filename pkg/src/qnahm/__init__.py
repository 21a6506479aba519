"""Exact-arithmetic toolkit for double-pole Nahm-type sums."""

__version__ = "1.0.0"
