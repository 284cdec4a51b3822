"""Homological representations of free group automorphisms on solvable covers."""

__version__ = "0.1.0"
