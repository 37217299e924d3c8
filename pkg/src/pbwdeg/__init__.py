"""Exact Weyl modules, PBW degenerations and splitting checks over Z and F_p."""

__version__ = "0.1.0"
