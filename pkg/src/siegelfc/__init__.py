"""Fourier coefficients of degree-two Siegel cusp forms under upper-block operators."""

__version__ = "0.1.0"
