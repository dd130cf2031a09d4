"""Numerical laboratory for the Ahlfors-Beurling transform and its relatives."""

__version__ = "0.1.0"
