"""Exact computation engine for lattice and Clifford vertex superalgebras."""

__version__ = "0.1.0"
