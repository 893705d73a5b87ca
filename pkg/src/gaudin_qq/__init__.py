"""Twisted Gaudin qq-systems, Bethe equations, Miura opers and G-Wronskians."""

__version__ = "0.1.0"
