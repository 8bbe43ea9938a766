"""Independent reference computations used by the tests.

Nothing here calls into the package: determinants by cofactor expansion,
closed-form Beta quantities and adaptive quadrature.
"""

import math
from fractions import Fraction

import numpy as np
from scipy import integrate


def cofactor_det(A):
    """Determinant by first-row cofactor expansion; exact when entries are Fractions."""
    A = [list(row) for row in A]
    n = len(A)
    if n == 1:
        return A[0][0]
    if n == 2:
        return A[0][0] * A[1][1] - A[0][1] * A[1][0]
    total = 0
    for j in range(n):
        minor = [row[:j] + row[j + 1:] for row in A[1:]]
        total += (-1) ** j * A[0][j] * cofactor_det(minor)
    return total


def d_operator_naive(M) -> float:
    """``det(M^T M / n) ** 0.5`` in exact rational arithmetic, rounded once at the end."""
    M = np.atleast_2d(np.asarray(M, dtype=float))
    n, k = M.shape
    Q = [[Fraction(float(v)) for v in row] for row in M]
    gram = [[sum(Q[r][i] * Q[r][j] for r in range(n)) / n for j in range(k)] for i in range(k)]
    det = cofactor_det(gram)
    return math.sqrt(max(float(det), 0.0))


def beta21_cell_mass(edges):
    """Cell masses of the density 2x on [0, 1]."""
    return np.diff(edges ** 2)


def tri_pdf(y, theta):
    return 2 * y / theta if y <= theta else (2 - 2 * y) / (1 - theta)


def posterior_mean_quad(y, prior):
    """Posterior mean of theta for one observation ``y``, by adaptive quadrature."""
    def unnorm(t):
        return tri_pdf(y, t) * prior(t)

    pts = [y]
    num = integrate.quad(lambda t: t * unnorm(t), 0, 1, points=pts, limit=200, epsabs=1e-13)[0]
    den = integrate.quad(unnorm, 0, 1, points=pts, limit=200, epsabs=1e-13)[0]
    return num / den
