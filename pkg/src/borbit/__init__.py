"""Exact B-orbit combinatorics for strongly solvable spherical subgroups"""
from ._version import __version__

__all__ = ("__version__",)
