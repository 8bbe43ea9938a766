"""Generalized fiducial inference toolkit.

Grid machinery for one-dimensional fiducial densities, the triangular model
and its coverage study, Bernstein-von Mises diagnostics and a free-knot spline
fiducial sampler.
"""

from .errors import GFIError
from .gfd_core import Grid, GridDensity, Interval, MixedDensity, unit_grid
from .kernels import BACKEND

__version__ = "0.1.0"

__all__ = ["BACKEND", "GFIError", "Grid", "GridDensity", "Interval", "MixedDensity", "unit_grid"]
