"""Conjugacy and factor lists of constant-length substitutions."""

__version__ = "0.1.0"
