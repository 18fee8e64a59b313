"""Numerical checks of pluricomplex Moser-Trudinger and Sobolev inequalities for radial functions."""

__version__ = "0.1.0"
