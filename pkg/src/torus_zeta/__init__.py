"""Dynamical zeta functions of mapping tori of toral and general fiber diffeomorphisms."""
__version__ = "0.1.0"
