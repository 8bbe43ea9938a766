"""Pure numpy versions of the triangular-model grid kernels.

Same arithmetic as the compiled ``_kernels`` module; used when the extension
is not built or when ``GFIBVM_PURE_PYTHON=1``.
"""

import math

import numpy as np

GF, MODGF, FLAT, JEFFREYS = 0, 1, 2, 3
LOG2 = math.log(2.0)
# cells this far below the peak (in log units) get weight exactly 0
UNDERFLOW = -700.0


def _prefix(v):
    out = np.empty(v.size + 1)
    out[0] = 0.0
    np.cumsum(v, out=out[1:])
    return out


def _suffix(v):
    out = np.empty(v.size + 1)
    out[-1] = 0.0
    np.cumsum(v[::-1], out=out[-2::-1])
    return out


def tri_log_terms(y_sorted, points):
    """Log-likelihood and log-Jacobian of a sorted triangular sample at ``points``.

    Observations ``y <= theta`` use the left branch of the density.
    """
    y = np.asarray(y_sorted, dtype=float)
    t = np.asarray(points, dtype=float)
    n = y.size
    left_log = _prefix(np.log(y))
    right_log = _suffix(np.log1p(-y))
    left_sq = _prefix(y * y)
    right_sq = _suffix((1.0 - y) * (1.0 - y))
    k = np.searchsorted(y, t, side="right")
    lt = np.log(t)
    l1t = np.log1p(-t)
    loglik = n * LOG2 + left_log[k] + right_log[k] - k * lt - (n - k) * l1t
    if n == 0:
        logj = np.full(t.shape, -np.inf)
    else:
        j2 = (left_sq[k] / (4.0 * t * t) + right_sq[k] / (4.0 * (1.0 - t) * (1.0 - t))) / n
        logj = 0.5 * np.log(j2)
    return loglik, logj


def _cont_quantile(cum, w, q_scaled, spacing):
    # cum: unnormalized CDF at cell edges, q_scaled already multiplied by total
    m = w.size
    j = int(np.searchsorted(cum[1:], q_scaled, side="left"))
    if j >= m:
        return 1.0
    frac = (q_scaled - cum[j]) / w[j] if w[j] > 0 else 0.0
    frac = min(max(frac, 0.0), 1.0)
    return (j + frac) * spacing


def jeffreys_cell_average(edges):
    """Average of ``1/sqrt(t(1-t))`` over each cell between consecutive ``edges``.

    The prior is singular at 0 and 1, where its midpoint value badly
    underestimates the cell mass.
    """
    edges = np.asarray(edges, dtype=float)
    return 2.0 * np.diff(np.arcsin(np.sqrt(edges))) / np.diff(edges)


def _grid_tables(m, method):
    spacing = 1.0 / m
    t = (np.arange(m) + 0.5) * spacing
    if method == JEFFREYS:
        factor = jeffreys_cell_average(np.arange(m + 1) * spacing)
    else:
        factor = np.ones(m)
    return {
        "t": t,
        "lt": np.log(t),
        "l1t": np.log1p(-t),
        "inv_l": 1.0 / (4.0 * t * t),
        "inv_r": 1.0 / (4.0 * (1.0 - t) * (1.0 - t)),
        "factor": factor,
    }


def _interval(y, m, method, level, tab):
    """Unnormalized cell weights are likelihood * (Jacobian or prior)."""
    n = y.size
    spacing = 1.0 / m
    t = tab["t"]
    left_log = _prefix(np.log(y))
    right_log = _suffix(np.log1p(-y))
    k = np.searchsorted(y, t, side="right")
    loglik = n * LOG2 + left_log[k] + right_log[k] - k * tab["lt"] - (n - k) * tab["l1t"]
    shifted = loglik - loglik.max()
    w = np.where(shifted < UNDERFLOW, 0.0, np.exp(np.maximum(shifted, UNDERFLOW)) * tab["factor"])
    if method == GF or method == MODGF:
        left_sq = _prefix(y * y)
        right_sq = _suffix((1.0 - y) * (1.0 - y))
        w *= np.sqrt((left_sq[k] * tab["inv_l"] + right_sq[k] * tab["inv_r"]) / n)
    cum = _prefix(w)
    total = cum[-1]
    tail = 0.5 * (1.0 - level)
    if method != MODGF:
        return (_cont_quantile(cum, w, tail * total, spacing),
                _cont_quantile(cum, w, (1.0 - tail) * total, spacing))
    a0 = (1.0 - y[-1]) ** 2
    a1 = y[0] ** 2
    wc = 1.0 - a0 - a1
    out = []
    for q in (tail, 1.0 - tail):
        if q <= a0:
            out.append(0.0)
        elif q <= a0 + wc:
            out.append(_cont_quantile(cum, w, min((q - a0) / wc, 1.0) * total, spacing))
        else:
            out.append(1.0)
    return tuple(out)


def _check_method(method):
    if method not in (GF, MODGF, FLAT, JEFFREYS):
        raise ValueError(f"unknown method code {method}")


def tri_interval(y_sorted, m, method, level):
    """Equal-tailed interval of one method's distribution on the unit grid."""
    _check_method(method)
    y = np.asarray(y_sorted, dtype=float)
    return _interval(y, m, method, level, _grid_tables(m, method))


def tri_intervals(y_batch, m, method, level):
    """Row-wise :func:`tri_interval` over a 2-D array of sorted samples."""
    _check_method(method)
    y_batch = np.asarray(y_batch, dtype=float)
    tab = _grid_tables(m, method)
    out = np.empty((y_batch.shape[0], 2))
    for r in range(y_batch.shape[0]):
        out[r] = _interval(y_batch[r], m, method, level, tab)
    return out
