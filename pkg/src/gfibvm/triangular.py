"""Triangular distribution on (0, 1) with mode ``theta``.

Density, CDF, data-generating algorithm, the fiducial inverse images, the
Jacobian function, the (modified) generalized fiducial distribution and the
flat / Jeffreys posteriors used as comparators. Everything that evaluates a
distribution over ``theta`` works on a :class:`~gfibvm.gfd_core.Grid` in the
log domain.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from . import kernels
from .errors import OutOfDomain
from .gfd_core import Grid, GridDensity, MixedDensity, normalize


class Prior(enum.Enum):
    FLAT = "flat"
    JEFFREYS = "jeffreys"


class ImageKind(enum.Enum):
    EMPTY = "empty"
    VALUE = "value"
    AT_ZERO = "at_zero"
    AT_ONE = "at_one"


@dataclass(frozen=True)
class InverseImage:
    kind: ImageKind
    value: Optional[float] = None


def _check_theta(theta: float) -> float:
    theta = float(theta)
    if not 0.0 < theta < 1.0:
        raise OutOfDomain(f"theta={theta} outside (0, 1)")
    return theta


def _check_y(y: float) -> float:
    y = float(y)
    if not 0.0 < y < 1.0:
        raise OutOfDomain(f"y={y} outside (0, 1)")
    return y


def as_sample(y) -> np.ndarray:
    """Validate a sample: 1-D, non-empty, every value in (0, 1)."""
    arr = np.atleast_1d(np.asarray(y, dtype=float))
    if arr.ndim != 1 or arr.size == 0:
        raise ValueError("a sample needs at least one observation")
    if not np.all((arr > 0.0) & (arr < 1.0)):
        raise OutOfDomain("all observations must lie in (0, 1)")
    return arr


def pdf(y: float, theta: float) -> float:
    y, theta = _check_y(y), _check_theta(theta)
    if y <= theta:
        return 2.0 * y / theta
    return (2.0 - 2.0 * y) / (1.0 - theta)


def cdf(y: float, theta: float) -> float:
    theta = _check_theta(theta)
    if y <= 0.0:
        return 0.0
    if y >= 1.0:
        return 1.0
    if y <= theta:
        return y * y / theta
    return 1.0 - (1.0 - y) ** 2 / (1.0 - theta)


def dga(u, theta: float):
    """Data-generating algorithm: inverse CDF applied to uniforms ``u``.

    Vectorized over ``u``.
    """
    theta = _check_theta(theta)
    u = np.asarray(u, dtype=float)
    left = np.sqrt(u * theta)
    right = 1.0 - np.sqrt((1.0 - u) * (1.0 - theta))
    out = np.where(u <= theta, left, right)
    return float(out) if out.ndim == 0 else out


def inverse_image(y: float, u: float, modified: bool = False) -> InverseImage:
    """The value of ``theta`` solving ``dga(u, theta) = y``, if any.

    Without a solution the plain map is empty; the modified map sends small
    ``u`` to the point 1 and large ``u`` to the point 0.
    """
    y = _check_y(y)
    u = float(u)
    if not 0.0 < u < 1.0:
        raise OutOfDomain(f"u={u} outside (0, 1)")
    upper = 1.0 - (1.0 - y) ** 2
    if u < y * y:
        return InverseImage(ImageKind.AT_ONE, 1.0) if modified else InverseImage(ImageKind.EMPTY)
    if u > upper:
        return InverseImage(ImageKind.AT_ZERO, 0.0) if modified else InverseImage(ImageKind.EMPTY)
    if u < y:
        value = y * y / u
    else:
        value = 1.0 - (1.0 - y) ** 2 / (1.0 - u)
    # boundary u == y**2 gives theta == 1, outside the open parameter space
    if value >= 1.0:
        return InverseImage(ImageKind.AT_ONE, 1.0) if modified else InverseImage(ImageKind.VALUE, 1.0)
    if value <= 0.0:
        return InverseImage(ImageKind.AT_ZERO, 0.0) if modified else InverseImage(ImageKind.VALUE, 0.0)
    return InverseImage(ImageKind.VALUE, value)


def jacobian(y, theta: float) -> float:
    """Root mean square of the per-observation gradients of the DGA in ``theta``."""
    y = as_sample(y)
    theta = _check_theta(theta)
    left = y <= theta
    g = np.where(left, y / (2.0 * theta), (1.0 - y) / (2.0 * (1.0 - theta)))
    return math.sqrt(float(np.mean(g * g)))


def log_likelihood(y, theta: float) -> float:
    """Sum of log densities, evaluated term by term."""
    y = as_sample(y)
    return math.fsum(math.log(pdf(v, theta)) for v in y)


def log_terms(y, grid: Grid):
    """Log-likelihood and log-Jacobian of sample ``y`` at every grid point.

    Grid points must lie in (0, 1).
    """
    y = np.sort(as_sample(y))
    pts = grid.points
    if pts[0] <= 0.0 or pts[-1] >= 1.0:
        raise OutOfDomain("grid points must lie inside (0, 1)")
    return kernels.tri_log_terms(y, pts)


def gfd(y, grid: Grid) -> GridDensity:
    """Generalized fiducial density: likelihood times Jacobian, normalized on ``grid``."""
    loglik, logj = log_terms(y, grid)
    return normalize(grid, loglik + logj)


def boundary_masses(y) -> tuple[float, float]:
    """Point masses ``(at 0, at 1)`` of the modified fiducial distribution."""
    y = as_sample(y)
    return float((1.0 - y.max()) ** 2), float(y.min() ** 2)


def modified_gfd(y, grid: Grid) -> MixedDensity:
    a0, a1 = boundary_masses(y)
    cont = gfd(y, grid)
    return MixedDensity(cont, 1.0 - a0 - a1, ((grid.lo, a0), (grid.hi, a1)))


def log_prior(theta, prior: Prior):
    theta = np.asarray(theta, dtype=float)
    if Prior(prior) is Prior.FLAT:
        return np.zeros_like(theta)
    return -0.5 * (np.log(theta) + np.log1p(-theta))


def grid_log_prior(grid: Grid, prior: Prior) -> np.ndarray:
    """Log of the prior's average density over each grid cell (unnormalized).

    Cell averages rather than midpoint values, because the Jeffreys density
    blows up at the ends of (0, 1). Edges outside [0, 1] are not allowed.
    """
    if Prior(prior) is Prior.FLAT:
        return np.zeros(grid.m)
    if grid.lo < 0.0 or grid.hi > 1.0:
        raise OutOfDomain("the Jeffreys prior lives on (0, 1)")
    return np.log(kernels.python_backend.jeffreys_cell_average(grid.edges))


def bayes_posterior(y, prior: Prior, grid: Grid) -> GridDensity:
    """Posterior under the flat or Jeffreys prior; an empty sample returns the prior."""
    prior = Prior(prior)
    lp = grid_log_prior(grid, prior)
    if np.size(y) == 0:
        return normalize(grid, lp)
    loglik, _ = log_terms(y, grid)
    return normalize(grid, loglik + lp)


def fisher_info(theta: float) -> float:
    theta = _check_theta(theta)
    return 1.0 / (theta * (1.0 - theta))


def score(y, theta: float):
    """Score function: ``-1/theta`` on ``(0, theta]``, ``1/(1-theta)`` above. Vectorized."""
    theta = _check_theta(theta)
    y = np.asarray(y, dtype=float)
    if np.any((y <= 0.0) | (y >= 1.0)):
        raise OutOfDomain("observations must lie in (0, 1)")
    out = np.where(y <= theta, -1.0 / theta, 1.0 / (1.0 - theta))
    return float(out) if out.ndim == 0 else out


def simulate(n: int, theta: float, rng: np.random.Generator) -> np.ndarray:
    """Draw ``n`` observations through the DGA."""
    u = rng.random(n)
    # random() is [0, 1); keep u off 0 so every y is strictly positive
    u[u == 0.0] = 2.0 ** -54
    return dga(u, theta)
