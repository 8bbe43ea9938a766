"""Model-agnostic numerical machinery for one-dimensional fiducial densities.

Densities live on a bounded grid of equal-width cells and are stored as a
probability mass per cell. Within a cell the mass is spread uniformly, so the
CDF is piecewise linear between cell edges. A :class:`MixedDensity` adds point
masses (atoms) on top of such a grid density.

Total variation convention
--------------------------
:func:`tv_distance` returns ``sum(|p_i - q_i|)``, i.e. the L1 distance between
the two measures. Its range is ``[0, 2]``. The "sup over events" convention,
``sup_A |P(A) - Q(A)|``, is exactly half of this value and is available as
:func:`tv_sup`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence, Union

import numpy as np

from .errors import AllZero, GridMismatch, OutOfDomain, SingularDesign

MASS_TOL = 1e-12


@dataclass(frozen=True)
class Grid:
    """``m`` equal cells covering ``(lo, hi)``; ``points`` are the cell midpoints."""

    lo: float
    hi: float
    m: int

    def __post_init__(self):
        if not (math.isfinite(self.lo) and math.isfinite(self.hi)) or not self.lo < self.hi:
            raise ValueError(f"need lo < hi, got lo={self.lo}, hi={self.hi}")
        if int(self.m) != self.m or self.m < 2:
            raise ValueError(f"need an integer m >= 2, got {self.m}")
        object.__setattr__(self, "m", int(self.m))

    @property
    def spacing(self) -> float:
        return (self.hi - self.lo) / self.m

    @property
    def points(self) -> np.ndarray:
        return self.lo + (np.arange(self.m) + 0.5) * self.spacing

    @property
    def edges(self) -> np.ndarray:
        return self.lo + np.arange(self.m + 1) * self.spacing


def unit_grid(m: int = 4096) -> Grid:
    """Default midpoint grid on the open unit interval."""
    return Grid(0.0, 1.0, m)


@dataclass(frozen=True, eq=False)
class GridDensity:
    grid: Grid
    weights: np.ndarray

    def __post_init__(self):
        w = np.array(self.weights, dtype=float)
        if w.shape != (self.grid.m,):
            raise ValueError(f"expected {self.grid.m} weights, got shape {w.shape}")
        if np.any(w < 0) or not np.all(np.isfinite(w)):
            raise ValueError("weights must be finite and nonnegative")
        if abs(w.sum() - 1.0) > MASS_TOL:
            raise ValueError(f"weights sum to {w.sum()!r}, not 1")
        w.setflags(write=False)
        object.__setattr__(self, "weights", w)

    @property
    def cumulative(self) -> np.ndarray:
        """CDF at the ``m + 1`` cell edges."""
        c = np.empty(self.grid.m + 1)
        c[0] = 0.0
        np.cumsum(self.weights, out=c[1:])
        return c

    def density(self) -> np.ndarray:
        """Weights converted to density heights (mass / spacing)."""
        return self.weights / self.grid.spacing

    def mean(self) -> float:
        return float(np.dot(self.weights, self.grid.points))


@dataclass(frozen=True, eq=False)
class MixedDensity:
    """A grid density scaled to ``continuous_mass`` plus point masses.

    ``continuous`` is itself normalized to one; the mixture puts
    ``continuous_mass`` on it and ``mass`` on each ``(location, mass)`` atom.
    """

    continuous: GridDensity
    continuous_mass: float
    atoms: tuple = field(default_factory=tuple)

    def __post_init__(self):
        atoms = tuple(sorted((float(a), float(w)) for a, w in self.atoms))
        g = self.continuous.grid
        for loc, mass in atoms:
            if mass < 0:
                raise ValueError(f"negative atom mass {mass}")
            if not g.lo <= loc <= g.hi:
                raise ValueError(f"atom at {loc} outside [{g.lo}, {g.hi}]")
        if not 0.0 <= self.continuous_mass <= 1.0 + MASS_TOL:
            raise ValueError(f"continuous mass {self.continuous_mass} outside [0, 1]")
        total = self.continuous_mass + math.fsum(w for _, w in atoms)
        if abs(total - 1.0) > MASS_TOL:
            raise ValueError(f"total mass {total!r}, not 1")
        object.__setattr__(self, "atoms", atoms)

    @property
    def grid(self) -> Grid:
        return self.continuous.grid

    def mean(self) -> float:
        return self.continuous_mass * self.continuous.mean() + sum(a * w for a, w in self.atoms)


AnyDensity = Union[GridDensity, MixedDensity]


@dataclass(frozen=True)
class Interval:
    lo: float
    hi: float
    level: float

    @property
    def length(self) -> float:
        return self.hi - self.lo

    def contains(self, x: float) -> bool:
        return self.lo <= x <= self.hi


def normalize(grid: Grid, log_values) -> GridDensity:
    """Turn unnormalized log-density values at the grid midpoints into a density.

    Uses the max-shift so that arbitrarily large or small log-values are safe.
    Raises :class:`AllZero` if no entry is finite.
    """
    lv = np.asarray(log_values, dtype=float)
    if lv.shape != (grid.m,):
        raise ValueError(f"expected {grid.m} log-values, got shape {lv.shape}")
    if np.any(np.isnan(lv)) or np.any(lv == np.inf):
        raise ValueError("log-values must be finite or -inf")
    top = lv.max()
    if top == -np.inf:
        raise AllZero("all log-values are -inf")
    w = np.exp(lv - top)
    w /= w.sum()
    return GridDensity(grid, w)


def _cell_of(grid: Grid, x: float) -> int:
    j = int((x - grid.lo) / grid.spacing)
    return min(max(j, 0), grid.m - 1)


def _grid_cdf(d: GridDensity, x: float) -> float:
    g = d.grid
    if x <= g.lo:
        return 0.0
    if x >= g.hi:
        return 1.0
    j = _cell_of(g, x)
    c = d.cumulative
    frac = (x - (g.lo + j * g.spacing)) / g.spacing
    return float(c[j] + d.weights[j] * frac)


def cdf_at(d: AnyDensity, x: float) -> float:
    """Cumulative mass up to and including ``x``."""
    g = d.grid
    if not g.lo <= x <= g.hi:
        raise OutOfDomain(f"x={x} outside [{g.lo}, {g.hi}]")
    if isinstance(d, GridDensity):
        return _grid_cdf(d, x)
    atom_mass = sum(w for a, w in d.atoms if a <= x)
    return min(1.0, atom_mass + d.continuous_mass * _grid_cdf(d.continuous, x))


def _grid_quantile(d: GridDensity, q: float) -> float:
    g = d.grid
    if q <= 0.0:
        # leftmost point carrying mass
        nz = np.flatnonzero(d.weights)
        return g.lo + nz[0] * g.spacing
    c = d.cumulative
    j = int(np.searchsorted(c[1:], q, side="left"))
    if j >= g.m:
        # q above the rounded total mass
        return g.hi
    w = d.weights[j]
    frac = (q - c[j]) / w if w > 0 else 0.0
    return g.lo + (j + min(max(frac, 0.0), 1.0)) * g.spacing


def quantile(d: AnyDensity, q: float) -> float:
    """Smallest ``x`` with ``cdf_at(d, x) >= q``."""
    if not 0.0 <= q <= 1.0:
        raise ValueError(f"q={q} outside [0, 1]")
    if isinstance(d, GridDensity):
        return _grid_quantile(d, q)
    wc = d.continuous_mass
    if q <= 0.0:
        firsts = [loc for loc, mass in d.atoms if mass > 0]
        if wc > 0:
            firsts.append(_grid_quantile(d.continuous, 0.0))
        return min(firsts)
    atoms_before = 0.0
    for loc, mass in d.atoms:
        # F just below the atom
        reach = atoms_before + (wc * _grid_cdf(d.continuous, loc) if wc > 0 else 0.0)
        if q <= reach:
            return min(_grid_quantile(d.continuous, (q - atoms_before) / wc), loc)
        if q <= reach + mass:
            return loc
        atoms_before += mass
    if wc > 0:
        return _grid_quantile(d.continuous, min((q - atoms_before) / wc, 1.0))
    # q fell into rounding slack above the last atom
    return d.atoms[-1][0]


def equal_tailed_interval(d: AnyDensity, level: float) -> Interval:
    if not 0.0 < level < 1.0:
        raise ValueError(f"level={level} outside (0, 1)")
    tail = (1.0 - level) / 2.0
    return Interval(quantile(d, tail), quantile(d, 1.0 - tail), level)


def sample(d: AnyDensity, u: float) -> float:
    """Inverse-CDF draw: deterministic map from ``u`` in [0, 1] to the support."""
    return quantile(d, u)


def _as_cells(d: AnyDensity):
    """Split a density into (mass per cell, atoms)."""
    if isinstance(d, GridDensity):
        return d.weights, ()
    return d.continuous_mass * d.continuous.weights, d.atoms


def tv_distance(a: AnyDensity, b: AnyDensity) -> float:
    """L1 distance ``sum |a - b|`` between two densities on the same grid.

    Point masses are compared location by location; a point mass never
    overlaps the continuous part. See the module docstring for the convention.
    """
    if a.grid != b.grid:
        raise GridMismatch(f"{a.grid} vs {b.grid}")
    wa, atoms_a = _as_cells(a)
    wb, atoms_b = _as_cells(b)
    total = float(np.abs(wa - wb).sum())
    pooled: dict[float, float] = {}
    for loc, mass in atoms_a:
        pooled[loc] = pooled.get(loc, 0.0) + mass
    for loc, mass in atoms_b:
        pooled[loc] = pooled.get(loc, 0.0) - mass
    total += sum(abs(v) for v in pooled.values())
    return min(total, 2.0)


def tv_sup(a: AnyDensity, b: AnyDensity) -> float:
    """``sup_A |P(A) - Q(A)|``, i.e. half of :func:`tv_distance`."""
    return 0.5 * tv_distance(a, b)


def d_operator(M) -> float:
    """``det(M^T M / n) ** 0.5`` for an ``n x k`` matrix, via a QR factorization.

    Returns 0 when ``M`` is numerically rank deficient.
    """
    M = np.atleast_2d(np.asarray(M, dtype=float))
    n, k = M.shape
    if n < k:
        raise ValueError(f"need n >= k, got {n}x{k}")
    r = np.abs(np.diag(np.linalg.qr(M, mode="r")))
    scale = max(r.max(initial=0.0), np.abs(M).max(initial=0.0))
    if scale == 0.0 or r.min() <= scale * max(n, k) * np.finfo(float).eps:
        return 0.0
    # product of R's diagonal in log space keeps large n from overflowing
    return float(np.exp(np.sum(np.log(r)) - 0.5 * k * math.log(n)))


def linreg_jacobian(X, y, beta: Sequence[float], sigma: float) -> float:
    """Jacobian function of the linear-regression data-generating algorithm.

    ``n^-1 sigma^-1 det(X^T X)^(1/2) RSS^(1/2)`` with RSS taken at the least
    squares fit. The value does not depend on ``beta``, which is accepted only
    so callers can pass the parameter at which the gradient is taken.
    """
    X = np.atleast_2d(np.asarray(X, dtype=float))
    y = np.asarray(y, dtype=float)
    n, k = X.shape
    if y.shape != (n,):
        raise ValueError(f"y has shape {y.shape}, expected ({n},)")
    if np.shape(beta) != (k,):
        raise ValueError(f"beta has shape {np.shape(beta)}, expected ({k},)")
    if n <= k:
        raise ValueError(f"need n > k, got n={n}, k={k}")
    if not sigma > 0:
        raise ValueError(f"sigma must be positive, got {sigma}")
    sign, logdet = np.linalg.slogdet(X.T @ X)
    if sign <= 0 or d_operator(X) == 0.0:
        raise SingularDesign("X^T X is singular")
    coef = np.linalg.lstsq(X, y, rcond=None)[0]
    resid = y - X @ coef
    rss = float(resid @ resid)
    return math.exp(0.5 * logdet) * math.sqrt(rss) / (n * sigma)
