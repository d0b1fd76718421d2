"""Iterative multi-view sketch-based 3D shape modeling."""

__version__ = "0.1.0"
