# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled triangular-model grid kernels (see ``_kernels_py`` for the reference)."""

import numpy as np
cimport numpy as cnp
from libc.math cimport log, log1p, exp, sqrt, asin, INFINITY

cnp.import_array()

cdef enum:
    GF = 0
    MODGF = 1
    FLAT = 2
    JEFFREYS = 3

cdef double LOG2 = log(2.0)
# cells this far below the peak (in log units) get weight exactly 0
cdef double UNDERFLOW = -700.0


cdef void _tables(const double[::1] y, double[::1] left_log, double[::1] right_log,
                  double[::1] left_sq, double[::1] right_sq) noexcept nogil:
    cdef Py_ssize_t n = y.shape[0], i
    cdef double r
    left_log[0] = 0.0
    left_sq[0] = 0.0
    for i in range(n):
        left_log[i + 1] = left_log[i] + log(y[i])
        left_sq[i + 1] = left_sq[i] + y[i] * y[i]
    right_log[n] = 0.0
    right_sq[n] = 0.0
    for i in range(n - 1, -1, -1):
        r = 1.0 - y[i]
        right_log[i] = right_log[i + 1] + log1p(-y[i])
        right_sq[i] = right_sq[i + 1] + r * r


cdef void _log_terms(const double[::1] y, const double[::1] t, double[::1] loglik,
                     double[::1] logj, double[::1] left_log, double[::1] right_log,
                     double[::1] left_sq, double[::1] right_sq) noexcept nogil:
    cdef Py_ssize_t n = y.shape[0], m = t.shape[0], j, k = 0
    cdef double th, lt, l1t, j2
    _tables(y, left_log, right_log, left_sq, right_sq)
    for j in range(m):
        th = t[j]
        # t is increasing, so the split point only moves right
        while k < n and y[k] <= th:
            k += 1
        lt = log(th)
        l1t = log1p(-th)
        loglik[j] = n * LOG2 + left_log[k] + right_log[k] - k * lt - (n - k) * l1t
        if n == 0:
            logj[j] = -INFINITY
        else:
            j2 = (left_sq[k] / (4.0 * th * th)
                  + right_sq[k] / (4.0 * (1.0 - th) * (1.0 - th))) / n
            logj[j] = 0.5 * log(j2)


def tri_log_terms(y_sorted, points):
    cdef const double[::1] y = np.ascontiguousarray(y_sorted, dtype=np.float64)
    cdef const double[::1] t = np.ascontiguousarray(points, dtype=np.float64)
    cdef Py_ssize_t n = y.shape[0], m = t.shape[0], j
    for j in range(1, m):
        if t[j] < t[j - 1]:
            raise ValueError("points must be increasing")
    loglik = np.empty(m)
    logj = np.empty(m)
    tabs = np.empty((4, n + 1))
    _log_terms(y, t, loglik, logj, tabs[0], tabs[1], tabs[2], tabs[3])
    return loglik, logj


cdef double _cont_quantile(const double[::1] cum, const double[::1] w, double q,
                           double spacing) noexcept nogil:
    # first j with cum[j + 1] >= q (binary search, matches searchsorted 'left')
    cdef Py_ssize_t m = w.shape[0], lo = 0, hi = m, mid
    cdef double frac
    while lo < hi:
        mid = (lo + hi) // 2
        if cum[mid + 1] < q:
            lo = mid + 1
        else:
            hi = mid
    if lo >= m:
        return 1.0
    frac = (q - cum[lo]) / w[lo] if w[lo] > 0 else 0.0
    if frac < 0.0:
        frac = 0.0
    elif frac > 1.0:
        frac = 1.0
    return (lo + frac) * spacing


cdef void _grid_tables(Py_ssize_t m, int method, double[::1] t, double[::1] lt,
                       double[::1] l1t, double[::1] inv_l, double[::1] inv_r,
                       double[::1] factor) noexcept nogil:
    cdef Py_ssize_t j
    cdef double spacing = 1.0 / m
    for j in range(m):
        t[j] = (j + 0.5) * spacing
        lt[j] = log(t[j])
        l1t[j] = log1p(-t[j])
        inv_l[j] = 1.0 / (4.0 * t[j] * t[j])
        inv_r[j] = 1.0 / (4.0 * (1.0 - t[j]) * (1.0 - t[j]))
        if method == JEFFREYS:
            # cell average of the prior density; the midpoint value misses the endpoint spikes
            factor[j] = 2.0 * (asin(sqrt((j + 1) * spacing)) - asin(sqrt(j * spacing))) / spacing
        else:
            factor[j] = 1.0


cdef void _interval(const double[::1] y, Py_ssize_t m, int method, double level,
                    const double[::1] t, const double[::1] lt, const double[::1] l1t,
                    const double[::1] inv_l, const double[::1] inv_r,
                    const double[::1] factor, double[::1] w, double[::1] cum,
                    double[::1] tabs0, double[::1] tabs1, double[::1] tabs2,
                    double[::1] tabs3, double* out) noexcept nogil:
    cdef Py_ssize_t j, i, k = 0
    cdef Py_ssize_t n = y.shape[0]
    cdef double spacing = 1.0 / m, top = -INFINITY, v, total, tail, q, a0, a1, wc
    cdef double qs[2]
    _tables(y, tabs0, tabs1, tabs2, tabs3)
    for j in range(m):
        while k < n and y[k] <= t[j]:
            k += 1
        v = n * LOG2 + tabs0[k] + tabs1[k] - k * lt[j] - (n - k) * l1t[j]
        w[j] = v
        if v > top:
            top = v
    k = 0
    cum[0] = 0.0
    for j in range(m):
        v = w[j] - top
        if v < UNDERFLOW:
            v = 0.0
        else:
            v = exp(v) * factor[j]
            if method == GF or method == MODGF:
                while k < n and y[k] <= t[j]:
                    k += 1
                v *= sqrt((tabs2[k] * inv_l[j] + tabs3[k] * inv_r[j]) / n)
        w[j] = v
        cum[j + 1] = cum[j] + v
    total = cum[m]
    tail = 0.5 * (1.0 - level)
    qs[0] = tail
    qs[1] = 1.0 - tail
    if method != MODGF:
        for i in range(2):
            out[i] = _cont_quantile(cum, w, qs[i] * total, spacing)
        return
    a0 = (1.0 - y[n - 1]) * (1.0 - y[n - 1])
    a1 = y[0] * y[0]
    wc = 1.0 - a0 - a1
    for i in range(2):
        q = qs[i]
        if q <= a0:
            out[i] = 0.0
        elif q <= a0 + wc:
            v = (q - a0) / wc
            if v > 1.0:
                v = 1.0
            out[i] = _cont_quantile(cum, w, v * total, spacing)
        else:
            out[i] = 1.0


def tri_interval(y_sorted, Py_ssize_t m, int method, double level):
    res = tri_intervals(np.asarray(y_sorted, dtype=np.float64)[None, :], m, method, level)
    return float(res[0, 0]), float(res[0, 1])


def tri_intervals(y_batch, Py_ssize_t m, int method, double level):
    """Equal-tailed interval for each row of a 2-D array of sorted samples."""
    if method < 0 or method > 3:
        raise ValueError(f"unknown method code {method}")
    cdef const double[:, ::1] Y = np.ascontiguousarray(y_batch, dtype=np.float64)
    cdef Py_ssize_t reps = Y.shape[0], n = Y.shape[1], r
    if n < 1:
        raise ValueError("need at least one observation")
    out_arr = np.empty((reps, 2))
    cdef double[:, ::1] out = out_arr
    gt = np.empty((6, m))
    cdef double[::1] t = gt[0], lt = gt[1], l1t = gt[2], inv_l = gt[3], inv_r = gt[4]
    cdef double[::1] factor = gt[5]
    cdef double[::1] w = np.empty(m), cum = np.empty(m + 1)
    tabs = np.empty((4, n + 1))
    cdef double[::1] t0 = tabs[0], t1 = tabs[1], t2 = tabs[2], t3 = tabs[3]
    with nogil:
        _grid_tables(m, method, t, lt, l1t, inv_l, inv_r, factor)
        for r in range(reps):
            _interval(Y[r], m, method, level, t, lt, l1t, inv_l, inv_r, factor,
                      w, cum, t0, t1, t2, t3, &out[r, 0])
    return out_arr
