"""Bernstein-von Mises diagnostics.

The limiting law of a fiducial distribution in the local parameter
``h = sqrt(n) (theta - theta0)`` is ``N(delta_n, I^-1)`` where
``delta_n = n^-1/2 sum_i I^-1 score(y_i)``. These helpers build that Gaussian,
move it between the local and original scales, and measure how far a grid
density is from it in total variation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import special

from .errors import DimensionUnsupported, GridMismatch, SingularInformation
from .gfd_core import Grid, GridDensity, tv_distance


@dataclass(frozen=True, eq=False)
class LocalScale:
    theta0: np.ndarray
    n: int

    def __post_init__(self):
        object.__setattr__(self, "theta0", np.atleast_1d(np.asarray(self.theta0, dtype=float)))
        if self.n < 1:
            raise ValueError(f"n must be >= 1, got {self.n}")


@dataclass(frozen=True, eq=False)
class GaussianLimit:
    center: np.ndarray
    covariance: np.ndarray
    theta0: np.ndarray
    n: int

    def __post_init__(self):
        center = np.atleast_1d(np.asarray(self.center, dtype=float))
        cov = np.atleast_2d(np.asarray(self.covariance, dtype=float))
        theta0 = np.atleast_1d(np.asarray(self.theta0, dtype=float))
        d = center.size
        if cov.shape != (d, d) or theta0.shape != (d,):
            raise ValueError("center, covariance and theta0 dimensions disagree")
        if not np.allclose(cov, cov.T):
            raise ValueError("covariance must be symmetric")
        try:
            np.linalg.cholesky(cov)
        except np.linalg.LinAlgError:
            raise ValueError("covariance must be positive definite") from None
        if self.n < 1:
            raise ValueError(f"n must be >= 1, got {self.n}")
        object.__setattr__(self, "center", center)
        object.__setattr__(self, "covariance", cov)
        object.__setattr__(self, "theta0", theta0)

    @property
    def scale(self) -> LocalScale:
        return LocalScale(self.theta0, self.n)

    def original_mean(self) -> np.ndarray:
        return from_local(self.center, self.scale)

    def original_covariance(self) -> np.ndarray:
        return self.covariance / self.n


def delta_n(scores, info) -> np.ndarray:
    """Locally sufficient statistic ``n^-1/2 sum_i I^-1 score_i``.

    ``scores`` is ``n x d`` (a 1-D array is read as ``d = 1``).
    """
    scores = np.asarray(scores, dtype=float)
    if scores.ndim == 1:
        scores = scores[:, None]
    info = np.atleast_2d(np.asarray(info, dtype=float))
    n, d = scores.shape
    if info.shape != (d, d):
        raise ValueError(f"info has shape {info.shape}, expected ({d}, {d})")
    try:
        np.linalg.cholesky(info)
    except np.linalg.LinAlgError:
        raise SingularInformation("Fisher information is not positive definite") from None
    return np.linalg.solve(info, scores.sum(axis=0)) / math.sqrt(n)


def to_local(theta, s: LocalScale) -> np.ndarray:
    return math.sqrt(s.n) * (np.asarray(theta, dtype=float) - s.theta0)


def from_local(h, s: LocalScale) -> np.ndarray:
    return s.theta0 + np.asarray(h, dtype=float) / math.sqrt(s.n)


def gaussian_limit(scores, info, theta0, n=None) -> GaussianLimit:
    scores = np.asarray(scores, dtype=float)
    n = scores.shape[0] if n is None else n
    info = np.atleast_2d(np.asarray(info, dtype=float))
    return GaussianLimit(delta_n(scores, info), np.linalg.inv(info), theta0, n)


def _normal_cell_masses(edges: np.ndarray, mean: float, sd: float) -> np.ndarray:
    z = (edges - mean) / sd
    cdf = special.ndtr(z)
    mass = np.diff(cdf)
    # far right tail: difference of survival functions keeps precision
    upper = z > 0
    if upper.any():
        sf = special.ndtr(-z)
        mass = np.where(upper[:-1], -np.diff(sf), mass)
    return np.clip(mass, 0.0, None)


def gaussian_on_grid(lim: GaussianLimit, grid: Grid, scale: str = "original") -> GridDensity:
    """Cell masses of the limiting Gaussian, restricted to ``grid`` and renormalized.

    With ``scale="local"`` the grid is read as a grid of ``h`` values; with
    ``"original"`` it is a grid of ``theta`` values and the Gaussian has mean
    ``theta0 + delta/sqrt(n)`` and variance ``I^-1 / n``.
    """
    if lim.center.size != 1:
        raise DimensionUnsupported("grid densities are one-dimensional")
    if scale == "local":
        mean, var = float(lim.center[0]), float(lim.covariance[0, 0])
    elif scale == "original":
        mean, var = float(lim.original_mean()[0]), float(lim.original_covariance()[0, 0])
    else:
        raise ValueError(f"scale must be 'local' or 'original', got {scale!r}")
    mass = _normal_cell_masses(grid.edges, mean, math.sqrt(var))
    total = mass.sum()
    if total <= 0.0:
        raise ValueError("the Gaussian puts no mass on the grid")
    return GridDensity(grid, mass / total)


def truncation_mass(lim: GaussianLimit, grid: Grid, scale: str = "original") -> float:
    """Mass of the limiting Gaussian that falls outside ``grid`` before renormalizing."""
    if lim.center.size != 1:
        raise DimensionUnsupported("grid densities are one-dimensional")
    if scale == "local":
        mean, var = float(lim.center[0]), float(lim.covariance[0, 0])
    else:
        mean, var = float(lim.original_mean()[0]), float(lim.original_covariance()[0, 0])
    sd = math.sqrt(var)
    return float(special.ndtr((grid.lo - mean) / sd) + special.ndtr(-(grid.hi - mean) / sd))


def local_grid(grid: Grid, s: LocalScale) -> Grid:
    """The same cells expressed in the local parameter."""
    lo, hi = to_local([grid.lo, grid.hi], s)
    return Grid(float(lo), float(hi), grid.m)


def bvm_tv(gfd: GridDensity, lim: GaussianLimit, scale: str = "original") -> float:
    """L1 total variation between a grid fiducial density and its Gaussian limit.

    ``gfd`` is read on the scale named by ``scale``.
    """
    if lim.center.size != 1:
        raise DimensionUnsupported("grid densities are one-dimensional")
    target = gaussian_on_grid(lim, gfd.grid, scale)
    if target.grid != gfd.grid:
        raise GridMismatch("grids differ")
    return tv_distance(gfd, target)
