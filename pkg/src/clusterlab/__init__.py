"""Exact real C-, G-matrix patterns for skew-symmetrizable exchange matrices."""

__version__ = "0.1.0"
