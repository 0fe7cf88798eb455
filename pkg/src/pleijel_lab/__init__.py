"""Numerical checks of Pleijel-type nodal-domain bounds for radial Schrodinger operators."""

__version__ = "0.1.0"
