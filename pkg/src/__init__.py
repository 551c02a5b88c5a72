"""Barycentre quadrature on self-similar fractal attractors"""

__version__ = "0.1.0"
