import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from gfibvm import spline as sp
from gfibvm.errors import InfeasibleGeometry, InitInvalid, InvalidModel, SingularInformation

from oracles import d_operator_naive


def model(t=(0.5,), alpha=(0.0, 1.0, -2.0), sigma=0.2, p=1, **kw):
    return sp.SplineModel(p, t, alpha, sigma, **kw)


def random_fixture(rng, p=None, kappa=None, n=None):
    p = p or int(rng.integers(1, 4))
    kappa = kappa or int(rng.integers(1, 3))
    t = np.sort(rng.uniform(0.1, 0.9, kappa))
    while kappa > 1 and np.min(np.diff(t)) <= 0.06:
        t = np.sort(rng.uniform(0.1, 0.9, kappa))
    alpha = rng.normal(size=p + kappa + 1)
    alpha[p + 1:] = np.sign(alpha[p + 1:]) * (np.abs(alpha[p + 1:]) + 0.1)
    m = sp.SplineModel(p, t, alpha, float(rng.uniform(0.1, 1.0)))
    n = n or m.n_params + int(rng.integers(0, 20))
    x = np.sort(rng.uniform(0, 1, n))
    return sp.SplineData(x, rng.normal(size=n)), m


# ---- model validation


def test_model_constraints():
    with pytest.raises(InvalidModel):
        model(alpha=(0.0, 1.0))
    with pytest.raises(InvalidModel):
        model(sigma=0.0)
    m = model(t=(0.02,))
    assert not m.knots_admissible()
    with pytest.raises(InvalidModel):
        m.check()
    assert not model(alpha=(0, 1, 5e-4)).coefs_admissible()
    assert not model(t=(0.3, 0.32), alpha=(0, 1, 1, 1)).knots_admissible()
    model().check()


def test_vector_round_trip():
    m = model(t=(0.3, 0.7), alpha=(1.0, 2.0, 3.0, 4.0), sigma=0.5)
    assert np.array_equal(m.with_vector(m.vector()).vector(), m.vector())
    assert m.n_params == 1 + 4 + 2


# ---- basis and design


def test_basis_examples():
    assert np.array_equal(sp.basis(0.25, [0.5], 1), [1.0, 0.25, 0.0])
    assert np.array_equal(sp.basis(0.75, [0.5], 1), [1.0, 0.75, 0.25])
    assert sp.basis(0.5, [0.5], 2)[-1] == 0.0
    assert sp.basis(0.5, [0.5], 1)[-1] == 0.0


def test_design_matrices_hand_fixture():
    data = sp.SplineData([0.2, 0.6, 0.9], [1.0, -1.0, 2.0])
    B_a, B_t, B_s = sp.design_matrices(data, model())
    assert np.allclose(B_a, [[1, 0.2, 0], [1, 0.6, 0.1], [1, 0.9, 0.4]], atol=1e-15)
    assert np.array_equal(B_t, [[0], [1], [1]])
    assert np.array_equal(B_s, [[1.0], [-1.0], [2.0]])


def test_design_step_column_left_of_knot():
    data = sp.SplineData([0.1, 0.2, 0.3, 0.5], np.zeros(4))
    _, B_t, _ = sp.design_matrices(data, model(t=(0.5,)))
    assert np.array_equal(B_t[:, 0], np.zeros(4))


# ---- Jacobian


def test_jacobian_zero_for_one_sided_design():
    data = sp.SplineData([0.1, 0.2, 0.3, 0.35, 0.4], [0.1, 0.5, 0.2, 0.9, 0.3])
    assert sp.jacobian(data, model(t=(0.6,))) == 0.0


def test_jacobian_small_fixture_against_cofactor_oracle():
    # five columns, so five points is the smallest design with a nonzero determinant
    data = sp.SplineData([0.1, 0.4, 0.6, 0.75, 0.9], [0.3, -0.2, 0.5, 0.2, 1.1])
    m = model()
    A = np.column_stack([sp.basis(data.x, m.t, 1), (data.x > 0.5).astype(float), data.y])
    expected = 1 * 2.0 / 0.2 * d_operator_naive(A)
    assert sp.jacobian(data, m) == pytest.approx(expected, rel=1e-10)


def test_jacobian_needs_enough_points():
    with pytest.raises(ValueError):
        sp.jacobian(sp.SplineData([0.2, 0.7], [1.0, 2.0]), model())


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 2 ** 32 - 1))
def test_jacobian_residual_column_gives_same_determinant(seed):
    data, m = random_fixture(np.random.default_rng(seed))
    a = sp.jacobian(data, m)
    b = sp.jacobian(data, m, residual_column=True)
    assert b == pytest.approx(a, rel=1e-8, abs=1e-300)


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 2 ** 32 - 1))
def test_jacobian_cofactor_oracle_up_to_six_columns(seed):
    rng = np.random.default_rng(seed)
    data, m = random_fixture(rng, p=int(rng.integers(1, 3)), kappa=1)
    B_a, B_t, B_s = sp.design_matrices(data, m)
    A = np.hstack([B_a, B_t, B_s])
    assert A.shape[1] <= 6
    pre = m.p ** m.kappa * np.prod(np.abs(m.knot_coefs)) / m.sigma
    expected = pre * d_operator_naive(A)
    got = sp.jacobian(data, m)
    if got == 0.0:
        assert expected < 1e-6 * pre
    else:
        assert got == pytest.approx(expected, rel=1e-10)


# ---- likelihood


def test_log_likelihood_examples():
    m = model(sigma=1.0)
    x = np.array([0.2, 0.7])
    perfect = sp.SplineData(x, sp.fitted(x, m))
    assert sp.log_likelihood(perfect, m) == pytest.approx(-math.log(2 * math.pi))
    one = sp.SplineData([0.2], sp.fitted([0.2], m) + 0.3)
    assert sp.log_likelihood(one, m) == pytest.approx(-0.5 * math.log(2 * math.pi) - 0.045)


def test_log_likelihood_sigma_scaling():
    rng = np.random.default_rng(0)
    data, m = random_fixture(rng, p=1, kappa=1, n=30)
    r = data.y - sp.fitted(data.x, m)
    for s in (m.sigma, 2 * m.sigma):
        direct = sum(-0.5 * math.log(2 * math.pi * s * s) - v * v / (2 * s * s) for v in r)
        assert sp.log_likelihood(data, m.replace(sigma=s)) == pytest.approx(direct, rel=1e-12)


# ---- Fisher information


def _expected_loglik(theta_vec, truth, x):
    k = truth.kappa
    p = truth.p
    t = theta_vec[:k]
    alpha = theta_vec[k:-1]
    s2 = theta_vec[-1]
    mu0 = sp.basis(x, truth.t, p) @ truth.alpha
    mu = sp.basis(x, t, p) @ alpha
    return float(np.sum(-0.5 * np.log(2 * math.pi * s2) - (truth.sigma ** 2 + (mu0 - mu) ** 2) / (2 * s2)))


def _fd_hessian(f, v, h=1e-4):
    k = v.size
    H = np.empty((k, k))
    for i in range(k):
        for j in range(k):
            e_i = np.zeros(k)
            e_j = np.zeros(k)
            e_i[i] = h
            e_j[j] = h
            H[i, j] = (f(v + e_i + e_j) - f(v + e_i - e_j) - f(v - e_i + e_j) + f(v - e_i - e_j)) / (4 * h * h)
    return H


def test_fisher_info_against_finite_differences():
    rng = np.random.default_rng(8)
    for _ in range(10):
        p = int(rng.integers(1, 3))
        truth = sp.SplineModel(p, [rng.uniform(0.3, 0.7)], rng.normal(size=p + 2) + np.r_[np.zeros(p + 1), 1.0],
                               float(rng.uniform(0.3, 1.0)))
        x = rng.uniform(0, 1, 60)
        # keep design points away from the knot so the step column is smooth there
        x = x[np.abs(x - truth.t[0]) > 1e-3]
        v = np.concatenate([truth.t, truth.alpha, [truth.sigma ** 2]])
        H = -_fd_hessian(lambda w: _expected_loglik(w, truth, x), v)
        info = sp.fisher_info(truth, x)
        assert np.max(np.abs(H - info)) <= 1e-3 * np.max(np.abs(info))


def test_fisher_info_errors():
    x = np.linspace(0.01, 0.99, 50)
    with pytest.raises(InvalidModel):
        sp.fisher_info(model(alpha=(0.0, 1.0, 5e-4)), x)
    dup = sp.SplineModel(1, [0.5, 0.5], [0.0, 1.0, 1.0, 1.0], 0.2)
    with pytest.raises(SingularInformation):
        sp.fisher_info(dup, x)


# ---- sampler


def test_sampler_deterministic_and_reproducible_density():
    truth = model()
    data = sp.simulate(truth, 100, np.random.default_rng(1))
    a = sp.sample_gfd(data, truth, 300, seed=9)
    b = sp.sample_gfd(data, truth, 300, seed=9)
    assert np.array_equal(a.draws, b.draws)
    for i in (0, 50, 299):
        assert sp.log_target(data, a.models()[i]) == a.log_density[i]


def test_sampler_rejects_invalid_init():
    data = sp.simulate(model(), 50, np.random.default_rng(2))
    with pytest.raises(InitInvalid):
        sp.sample_gfd(data, model(t=(0.01,)), 10, seed=0)


def test_sampler_recovers_knot():
    truth = model()
    data = sp.simulate(truth, 200, np.random.default_rng(3))
    chain = sp.sample_gfd(data, truth, 3000, seed=4)
    t = chain.draws[:, 0]
    assert abs(t.mean() - truth.t[0]) <= 3 * t.std()


def test_sampler_symmetric_data():
    # mirror-image data: y(x) = |x - 1/2| + noise with the same noise at x and 1 - x
    rng = np.random.default_rng(5)
    half = rng.uniform(0.0, 0.5, 100)
    noise = 0.1 * rng.standard_normal(100)
    x = np.concatenate([half, 1.0 - half])
    y = np.abs(x - 0.5) + np.concatenate([noise, noise])
    data = sp.SplineData(x, y)
    init = model(t=(0.5,), alpha=(0.5, -1.0, 2.0), sigma=0.1)
    draws = np.concatenate([sp.sample_gfd(data, init, 3000, seed=s).draws[:, 0] for s in range(4)])
    assert abs(draws.mean() - 0.5) < 0.01


# ---- artificial design


def test_artificial_design_example():
    m = model(delta=0.1)
    d = sp.artificial_design(m)
    assert d.n == m.n_params == 5
    assert np.min(np.diff(d.x)) > 0.05
    assert np.all(np.abs(d.y) <= 10.0)
    j = sp.artificial_design_jacobian(m)
    assert j > 0
    assert j == sp.jacobian(d, m)


def test_artificial_design_infeasible():
    m = sp.SplineModel(3, [0.5, 0.56, 0.62], np.ones(7), 1.0, domain=(0.4, 0.72), delta=0.05)
    m.check()
    with pytest.raises(InfeasibleGeometry):
        sp.artificial_design(m)
