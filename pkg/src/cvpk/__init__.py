"""Polarization behaviour, partial distances and BEC scaling exponent of
convolutional polar kernels."""

__version__ = "0.1.0"
