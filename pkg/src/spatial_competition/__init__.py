"""Spatial Bertrand-Hotelling price competition on the unit square."""

__version__ = "0.1.0"
