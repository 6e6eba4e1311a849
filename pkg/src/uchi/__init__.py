"""Centres of reduced enveloping algebras U_chi(g) over prime fields."""

__version__ = "0.1.0"
