"""Numerical verification of the geometry of complex hyperbolic quadrics
and of the homogeneous Hopf hypersurfaces they contain."""

__version__ = "0.1.0"
