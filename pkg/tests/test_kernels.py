import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from gfibvm import kernels, triangular as tri
from gfibvm.gfd_core import equal_tailed_interval, unit_grid

BACKENDS = [kernels.python_backend]
if kernels.compiled_backend is not None:
    BACKENDS.append(kernels.compiled_backend)

M = 1024


def reference_interval(y, method):
    """Interval from the density objects, built without the batch kernels."""
    grid = unit_grid(M)
    if method == kernels.GF:
        d = tri.gfd(y, grid)
    elif method == kernels.MODGF:
        d = tri.modified_gfd(y, grid)
    elif method == kernels.FLAT:
        d = tri.bayes_posterior(y, tri.Prior.FLAT, grid)
    else:
        d = tri.bayes_posterior(y, tri.Prior.JEFFREYS, grid)
    iv = equal_tailed_interval(d, 0.95)
    return iv.lo, iv.hi


@pytest.mark.parametrize("backend", BACKENDS, ids=lambda b: b.__name__)
@pytest.mark.parametrize("method", [kernels.GF, kernels.MODGF, kernels.FLAT, kernels.JEFFREYS])
@pytest.mark.parametrize("n", [1, 2, 30])
def test_interval_matches_density_route(backend, method, n):
    rng = np.random.default_rng(n * 10 + method)
    for _ in range(5):
        y = np.sort(tri.simulate(n, rng.uniform(0.02, 0.98), rng))
        lo, hi = backend.tri_interval(y, M, method, 0.95)
        rlo, rhi = reference_interval(y, method)
        assert lo == pytest.approx(rlo, abs=1e-9)
        assert hi == pytest.approx(rhi, abs=1e-9)


@pytest.mark.skipif(kernels.compiled_backend is None, reason="compiled backend not built")
@settings(max_examples=40, deadline=None)
@given(st.integers(1, 60), st.floats(0.01, 0.99), st.integers(0, 3), st.integers(0, 2 ** 32 - 1))
def test_backends_agree(n, theta, method, seed):
    y = np.sort(tri.simulate(n, theta, np.random.default_rng(seed)))[None, :]
    a = kernels.python_backend.tri_intervals(y, M, method, 0.95)
    b = kernels.compiled_backend.tri_intervals(y, M, method, 0.95)
    assert np.allclose(a, b, rtol=0, atol=1e-12)
    la, ja = kernels.python_backend.tri_log_terms(y[0], unit_grid(M).points)
    lb, jb = kernels.compiled_backend.tri_log_terms(y[0], unit_grid(M).points)
    assert np.allclose(la, lb, rtol=1e-13, atol=1e-10) and np.allclose(ja, jb, rtol=1e-13, atol=1e-12)


@pytest.mark.parametrize("backend", BACKENDS, ids=lambda b: b.__name__)
def test_unknown_method_rejected(backend):
    with pytest.raises(ValueError):
        backend.tri_interval(np.array([0.5]), M, 9, 0.95)


@pytest.mark.parametrize("backend", BACKENDS, ids=lambda b: b.__name__)
def test_batch_equals_single(backend):
    rng = np.random.default_rng(0)
    y = np.sort(tri.dga(rng.random((7, 12)), 0.4), axis=1)
    batch = backend.tri_intervals(y, M, kernels.JEFFREYS, 0.9)
    for r in range(7):
        assert tuple(batch[r]) == tuple(backend.tri_interval(y[r], M, kernels.JEFFREYS, 0.9))
