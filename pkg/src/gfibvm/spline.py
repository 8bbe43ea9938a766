"""Free-knot regression splines in the truncated power basis.

The regression function is

    g(x) = sum_{j<=p} alpha_j x^j + sum_k alpha_{p+k} (x - t_k)_+^p

with Gaussian noise of scale ``sigma``. Parameter vectors are ordered
``(t_1..t_kappa, alpha_0..alpha_{p+kappa}, sigma)`` for chain draws, and the
Fisher information uses ``sigma**2`` in the last slot instead of ``sigma``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .errors import InfeasibleGeometry, InitInvalid, InvalidModel, SingularInformation
from .gfd_core import d_operator

LOG_2PI = math.log(2.0 * math.pi)


@dataclass(frozen=True, eq=False)
class SplineModel:
    p: int
    t: np.ndarray
    alpha: np.ndarray
    sigma: float
    domain: tuple = (0.0, 1.0)
    delta: Optional[float] = None
    xi: float = 1e-3

    def __post_init__(self):
        t = np.atleast_1d(np.asarray(self.t, dtype=float))
        alpha = np.atleast_1d(np.asarray(self.alpha, dtype=float))
        if int(self.p) != self.p or self.p < 1:
            raise InvalidModel(f"degree p must be an integer >= 1, got {self.p}")
        if t.ndim != 1 or t.size < 1:
            raise InvalidModel("need at least one knot")
        if alpha.shape != (self.p + t.size + 1,):
            raise InvalidModel(f"alpha needs {self.p + t.size + 1} entries, got {alpha.size}")
        if not self.sigma > 0:
            raise InvalidModel(f"sigma must be positive, got {self.sigma}")
        a, b = map(float, self.domain)
        if not a < b:
            raise InvalidModel(f"bad domain {self.domain}")
        t.setflags(write=False)
        alpha.setflags(write=False)
        object.__setattr__(self, "p", int(self.p))
        object.__setattr__(self, "t", t)
        object.__setattr__(self, "alpha", alpha)
        object.__setattr__(self, "sigma", float(self.sigma))
        object.__setattr__(self, "domain", (a, b))
        if self.delta is None:
            object.__setattr__(self, "delta", 0.05 * (b - a))

    @property
    def kappa(self) -> int:
        return self.t.size

    @property
    def knot_coefs(self) -> np.ndarray:
        """The coefficients ``alpha_{p+1} .. alpha_{p+kappa}`` of the truncated terms."""
        return self.alpha[self.p + 1:]

    @property
    def n_params(self) -> int:
        return self.p + 2 * self.kappa + 2

    def knots_admissible(self) -> bool:
        a, b = self.domain
        t, d = self.t, self.delta
        return bool(t[0] >= a + d and t[-1] <= b - d and np.all(np.diff(t) > d))

    def coefs_admissible(self) -> bool:
        return bool(np.all(np.abs(self.knot_coefs) > self.xi))

    def check(self) -> None:
        """Raise :class:`InvalidModel` unless the knot and coefficient constraints hold."""
        if not self.knots_admissible():
            raise InvalidModel(f"knots {self.t} violate spacing delta={self.delta} on {self.domain}")
        if not self.coefs_admissible():
            raise InvalidModel(f"|alpha_(p+k)| must exceed xi={self.xi}, got {self.knot_coefs}")

    def vector(self) -> np.ndarray:
        return np.concatenate([self.t, self.alpha, [self.sigma]])

    def with_vector(self, v) -> "SplineModel":
        k = self.kappa
        v = np.asarray(v, dtype=float)
        return SplineModel(self.p, v[:k], v[k:-1], float(v[-1]), self.domain, self.delta, self.xi)

    def replace(self, **kw) -> "SplineModel":
        args = dict(p=self.p, t=self.t, alpha=self.alpha, sigma=self.sigma,
                    domain=self.domain, delta=self.delta, xi=self.xi)
        args.update(kw)
        return SplineModel(**args)


@dataclass(frozen=True, eq=False)
class SplineData:
    x: np.ndarray
    y: np.ndarray

    def __post_init__(self):
        x = np.asarray(self.x, dtype=float)
        y = np.asarray(self.y, dtype=float)
        if x.ndim != 1 or x.shape != y.shape:
            raise ValueError("x and y must be 1-D and of equal length")
        object.__setattr__(self, "x", x)
        object.__setattr__(self, "y", y)

    @property
    def n(self) -> int:
        return self.x.size


@dataclass(frozen=True, eq=False)
class FiducialChain:
    draws: np.ndarray
    log_density: np.ndarray
    acceptance_rate: float
    seed: int
    template: SplineModel = field(repr=False)

    def models(self):
        return [self.template.with_vector(v) for v in self.draws]

    def theta(self) -> np.ndarray:
        """Draws with ``sigma**2`` in place of ``sigma`` (the Fisher-information order)."""
        out = self.draws.copy()
        out[:, -1] = out[:, -1] ** 2
        return out


def _tpow(u, e: int):
    # (u)_+ ** e, with (u)_+ ** 0 read as the step 1{u > 0}
    u = np.asarray(u, dtype=float)
    if e == 0:
        return (u > 0).astype(float)
    return np.maximum(u, 0.0) ** e


def basis(x, t, p: int) -> np.ndarray:
    """Truncated power basis ``1, x, .., x^p, (x-t_1)_+^p, .., (x-t_k)_+^p``.

    Scalar ``x`` gives a vector; an array gives one row per point.
    """
    t = np.atleast_1d(np.asarray(t, dtype=float))
    xa = np.asarray(x, dtype=float)
    xs = np.atleast_1d(xa)[:, None]
    out = np.hstack([xs ** np.arange(p + 1), _tpow(xs - t[None, :], p)])
    return out[0] if xa.ndim == 0 else out


def design_matrices(data: SplineData, model: SplineModel):
    """``(B_alpha, B_t, B_sigma_tilde)``.

    ``B_t`` holds ``(x - t_k)_+^(p-1)`` without the ``p * alpha_{p+k}`` factor,
    which the Jacobian carries in its prefactor.
    """
    B_alpha = basis(data.x, model.t, model.p)
    B_t = _tpow(data.x[:, None] - model.t[None, :], model.p - 1)
    return B_alpha, B_t, data.y[:, None].copy()


def fitted(x, model: SplineModel) -> np.ndarray:
    return basis(np.atleast_1d(x), model.t, model.p) @ model.alpha


def _prefactor(model: SplineModel) -> float:
    return model.p ** model.kappa * float(np.prod(np.abs(model.knot_coefs))) / model.sigma


def jacobian(data: SplineData, model: SplineModel, residual_column: bool = False) -> float:
    """Fiducial Jacobian ``p^kappa / sigma * prod|alpha_{p+k}| * D[A]``.

    By default the last column of ``A`` is ``y``; ``residual_column=True``
    uses ``y - g(x)`` instead, which gives the same determinant.
    Rank-deficient designs give 0.
    """
    if data.n < model.n_params:
        raise ValueError(f"need n >= {model.n_params} observations, got {data.n}")
    B_alpha, B_t, B_s = design_matrices(data, model)
    if residual_column:
        B_s = (data.y - B_alpha @ model.alpha)[:, None]
    return _prefactor(model) * d_operator(np.hstack([B_alpha, B_t, B_s]))


def log_jacobian(data: SplineData, model: SplineModel) -> float:
    j = jacobian(data, model)
    return math.log(j) if j > 0 else -math.inf


def log_likelihood(data: SplineData, model: SplineModel) -> float:
    r = data.y - fitted(data.x, model)
    s2 = model.sigma ** 2
    return -0.5 * data.n * (LOG_2PI + math.log(s2)) - float(r @ r) / (2.0 * s2)


def _knot_terms(data: SplineData, model: SplineModel):
    """Basis matrix and ``D[A]`` at the model's knots; neither depends on alpha or sigma."""
    B_alpha, B_t, B_s = design_matrices(data, model)
    return B_alpha, d_operator(np.hstack([B_alpha, B_t, B_s]))


def _log_target(data: SplineData, model: SplineModel, knot_terms=None) -> float:
    if not (model.knots_admissible() and model.coefs_admissible()):
        return -math.inf
    B_alpha, dval = knot_terms if knot_terms is not None else _knot_terms(data, model)
    j = _prefactor(model) * dval
    if not j > 0:
        return -math.inf
    r = data.y - B_alpha @ model.alpha
    s2 = model.sigma ** 2
    loglik = -0.5 * data.n * (LOG_2PI + math.log(s2)) - float(r @ r) / (2.0 * s2)
    return loglik + math.log(j)


def log_target(data: SplineData, model: SplineModel) -> float:
    """Unnormalized log fiducial density; ``-inf`` outside the admissible set."""
    return _log_target(data, model)


def mean_gradient_matrix(model: SplineModel, x) -> np.ndarray:
    """Rows ``dg(x_i)/d(t, alpha)`` in the order ``(t, alpha)``."""
    x = np.asarray(x, dtype=float)
    dt = -model.p * _tpow(x[:, None] - model.t[None, :], model.p - 1) * model.knot_coefs[None, :]
    return np.hstack([dt, basis(x, model.t, model.p)])


def fisher_info(model: SplineModel, x) -> np.ndarray:
    """Fisher information of ``(t, alpha, sigma**2)`` for the design points ``x``.

    The mean block is ``X^T X / sigma^2``; the variance entry is
    ``n / (2 sigma^4)``; cross terms vanish.
    """
    if not model.coefs_admissible():
        raise InvalidModel(f"|alpha_(p+k)| must exceed xi={model.xi}, got {model.knot_coefs}")
    x = np.asarray(x, dtype=float)
    X = mean_gradient_matrix(model, x)
    k = X.shape[1]
    if x.size < k or np.linalg.matrix_rank(X) < k:
        raise SingularInformation("gradient columns are linearly dependent")
    s2 = model.sigma ** 2
    info = np.zeros((k + 1, k + 1))
    info[:k, :k] = X.T @ X / s2
    info[k, k] = x.size / (2.0 * s2 * s2)
    return info


def simulate(model: SplineModel, n: int, rng: np.random.Generator) -> SplineData:
    """Uniform design on the domain plus Gaussian noise."""
    a, b = model.domain
    x = rng.uniform(a, b, n)
    y = fitted(x, model) + model.sigma * rng.standard_normal(n)
    return SplineData(x, y)


class _Conditional:
    """Gaussian conditional of alpha given (t, sigma) under the likelihood."""

    def __init__(self, B: np.ndarray, y: np.ndarray, sigma: float):
        gram = B.T @ B
        self.chol = np.linalg.cholesky(gram)
        self.mean = np.linalg.solve(gram, B.T @ y)
        self.sigma = sigma
        self.log_det_half = float(np.sum(np.log(np.diag(self.chol))))

    def with_sigma(self, sigma: float) -> "_Conditional":
        other = object.__new__(_Conditional)
        other.__dict__.update(self.__dict__)
        other.sigma = sigma
        return other

    def draw(self, rng) -> np.ndarray:
        z = rng.standard_normal(self.mean.size)
        return self.mean + self.sigma * np.linalg.solve(self.chol.T, z)

    def log_pdf(self, alpha) -> float:
        d = self.chol.T @ (np.asarray(alpha) - self.mean)
        k = self.mean.size
        return (-0.5 * float(d @ d) / self.sigma ** 2 + self.log_det_half
                - k * math.log(self.sigma) - 0.5 * k * LOG_2PI)


def sample_gfd(data: SplineData, init: SplineModel, steps: int, seed: int,
               t_scale: Optional[float] = None, warmup_frac: float = 0.2) -> FiducialChain:
    """Metropolis-within-Gibbs sampler for the spline fiducial distribution.

    Each sweep makes three moves:

    1. knots: a Gaussian random-walk step for ``t`` paired with a fresh
       ``alpha`` drawn from its likelihood conditional at the proposed knots,
       accepted by Metropolis-Hastings;
    2. coefficients: an independence proposal for ``alpha`` from the same
       conditional at the current knots;
    3. noise scale: an exact draw of ``sigma`` from its full conditional
       ``sigma^-(n+1) exp(-RSS / 2 sigma^2)``.

    Proposals outside the admissible knot set or with ``|alpha_{p+k}| <= xi``
    are rejected. The random-walk scale adapts during the first
    ``warmup_frac`` of the sweeps toward a 30% acceptance rate; those sweeps
    are discarded.
    """
    if steps < 1:
        raise ValueError("steps must be >= 1")
    try:
        init.check()
    except InvalidModel as exc:
        raise InitInvalid(str(exc)) from None
    if data.n < init.n_params:
        raise InitInvalid(f"need at least {init.n_params} observations, got {data.n}")
    current = init
    terms = _knot_terms(data, current)
    cur_lp = _log_target(data, current, terms)
    if not math.isfinite(cur_lp):
        raise InitInvalid("initial state has zero fiducial density")

    rng = np.random.default_rng(seed)
    warmup = int(warmup_frac * steps)
    total = warmup + steps
    a, b = init.domain
    log_scale = math.log(t_scale if t_scale is not None else 0.02 * (b - a))
    cond = _Conditional(terms[0], data.y, current.sigma)

    draws = np.empty((steps, init.kappa + init.alpha.size + 1))
    dens = np.empty(steps)
    accepted = 0
    window_acc = 0
    for it in range(total):
        # knots and coefficients together
        t_new = current.t + math.exp(log_scale) * rng.standard_normal(current.kappa)
        prop = current.replace(t=t_new)
        took = False
        if prop.knots_admissible():
            terms_new = _knot_terms(data, prop)
            try:
                cond_new = _Conditional(terms_new[0], data.y, current.sigma)
            except np.linalg.LinAlgError:
                # no data on one side of a proposed knot
                cond_new = None
            lp = -math.inf
            if cond_new is not None:
                prop = prop.replace(alpha=cond_new.draw(rng))
                lp = _log_target(data, prop, terms_new)
            if math.isfinite(lp):
                log_r = lp - cur_lp + cond.log_pdf(current.alpha) - cond_new.log_pdf(prop.alpha)
                if math.log(rng.random()) < log_r:
                    current, cur_lp, cond, terms, took = prop, lp, cond_new, terms_new, True
        if took:
            window_acc += 1
            if it >= warmup:
                accepted += 1

        # coefficients alone
        prop = current.replace(alpha=cond.draw(rng))
        lp = _log_target(data, prop, terms)
        if math.isfinite(lp):
            log_r = lp - cur_lp + cond.log_pdf(current.alpha) - cond.log_pdf(prop.alpha)
            if math.log(rng.random()) < log_r:
                current, cur_lp = prop, lp

        # noise scale
        r = data.y - terms[0] @ current.alpha
        rss = float(r @ r)
        sigma = math.sqrt(0.5 * rss / rng.gamma(0.5 * data.n))
        current = current.replace(sigma=sigma)
        cur_lp = _log_target(data, current, terms)
        cond = cond.with_sigma(sigma)

        if it < warmup and (it + 1) % 50 == 0:
            rate = window_acc / 50
            if rate > 0.4:
                log_scale += 0.3
            elif rate < 0.2:
                log_scale -= 0.3
            window_acc = 0
        if it >= warmup:
            draws[it - warmup] = current.vector()
            dens[it - warmup] = cur_lp

    return FiducialChain(draws, dens, accepted / steps, int(seed), init)


def artificial_design(model: SplineModel, q: float = 10.0) -> SplineData:
    """Artificial points straddling every knot, with pairwise gaps above ``delta / 2``.

    Uses one point per parameter (``p + 2 kappa + 2``) and at least two points
    in every segment between consecutive knots and the domain ends. Responses
    lie in ``[-q, q]``.
    """
    if not q > 0:
        raise ValueError(f"q must be positive, got {q}")
    a, b = model.domain
    bounds = np.concatenate([[a], model.t, [b]])
    seg_len = np.diff(bounds)
    if np.any(seg_len <= 0):
        raise InfeasibleGeometry("knots must be increasing and inside the domain")
    nseg = seg_len.size
    m = max(model.n_params, 2 * nseg)
    counts = np.full(nseg, 2)
    for _ in range(m - counts.sum()):
        # next point goes where the spacing would stay widest
        counts[int(np.argmax(seg_len / (counts + 2)))] += 1
    xs = []
    for lo, length, c in zip(bounds[:-1], seg_len, counts):
        xs.extend(lo + length * (np.arange(c) + 1) / (c + 1))
    xs = np.asarray(xs)
    if np.min(np.diff(xs)) <= model.delta / 2:
        raise InfeasibleGeometry(
            f"cannot place {m} points with gaps > {model.delta / 2} on {model.domain}")
    # golden-ratio sequence: spread over [-q, q] without aligning with the basis
    frac = np.mod(np.arange(1, m + 1) * (math.sqrt(5.0) - 1.0) / 2.0, 1.0)
    return SplineData(xs, q * (2.0 * frac - 1.0))


def artificial_design_jacobian(model: SplineModel, q: float = 10.0) -> float:
    """Jacobian of ``model`` evaluated on :func:`artificial_design` data."""
    model.check()
    return jacobian(artificial_design(model, q), model)
