"""Schreier graphs of the Hanoi Towers group and their spectra."""

__version__ = "0.1.0"
