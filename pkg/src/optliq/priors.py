"""Terminal log-return beliefs and the filtered drift they induce.

The asset log-price is pinned at the horizon ``T`` to ``x0 + D`` where ``D``
is drawn from the trader's prior.  Conditioning on the price observed at time
``t`` gives a posterior mean ``a(t, x) = E[D | X_t = x]`` in closed form for
each supported prior, and the log-price SDE drift

    A(t, x) = (a(t, x) - (x - x0)) / (T - t).

Four priors are supported: a point mass, a two-point discrete belief, a
normal belief and a double-exponential belief.  All evaluation routines are
pure, accept scalar or ndarray ``x`` and are safe for concurrent use.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Union

import numpy as np

from ._normal import mills_ratio, norm_logcdf

# Below this fraction of T the posterior is analytically the prior mean; the
# two-point / double-exponential algebra degenerates (0/0) at t = 0 exactly.
T_EPS_FRACTION = 1e-9


@dataclass(frozen=True)
class Constant:
    """Point-mass belief: the log-price ends at exactly x0 + delta."""

    delta: float


@dataclass(frozen=True)
class TwoPoint:
    """Two-point belief: log-return delta_u with probability p_u, else delta_d."""

    delta_u: float
    delta_d: float
    p_u: float

    def __post_init__(self):
        if not 0.0 < self.p_u < 1.0:
            raise ValueError(f"p_u must lie in (0, 1), got {self.p_u}")
        if not self.delta_u > self.delta_d:
            raise ValueError("two-point prior requires delta_u > delta_d")

    @property
    def p_d(self) -> float:
        return 1.0 - self.p_u


@dataclass(frozen=True)
class Normal:
    """Gaussian belief on the terminal log-return."""

    mu: float
    sigma_d: float

    def __post_init__(self):
        if not self.sigma_d > 0.0:
            raise ValueError(f"sigma_d must be positive, got {self.sigma_d}")


@dataclass(frozen=True)
class DoubleExponential:
    """Asymmetric双 double-exponential belief centered at theta.

    Mass p_1 sits on an exponential(lambda_1) tail below theta, mass
    1 - p_1 on an exponential(lambda_2) tail above it.
    """

    theta: float
    p_1: float
    lambda_1: float
    lambda_2: float

    def __post_init__(self):
        if not 0.0 < self.p_1 < 1.0:
            raise ValueError(f"p_1 must lie in (0, 1), got {self.p_1}")
        if self.lambda_1 <= 0.0 or self.lambda_2 <= 0.0:
            raise ValueError("double-exponential rates must be positive")

    @property
    def p_2(self) -> float:
        return 1.0 - self.p_1


Prior = Union[Constant, TwoPoint, Normal, DoubleExponential]


@dataclass(frozen=True)
class MarketParams:
    """Market and horizon parameters.

    x0:    initial log-price
    sigma: bridge noise scale (> 0)
    T:     pinning horizon at which the belief is revealed
    T_bar: trading deadline, strictly before T so the drift denominator
           T - t stays bounded on the tradable domain
    r:     constant discount rate (>= 0)
    """

    x0: float
    sigma: float
    T: float
    T_bar: float
    r: float

    def __post_init__(self):
        if not self.sigma > 0.0:
            raise ValueError(f"sigma must be positive, got {self.sigma}")
        if not 0.0 < self.T_bar < self.T:
            raise ValueError(
                f"require 0 < T_bar < T strictly, got T_bar={self.T_bar}, T={self.T}"
            )
        if self.r < 0.0:
            raise ValueError(f"r must be nonnegative, got {self.r}")


def prior_moments(prior: Prior) -> tuple[float, float]:
    """Return (mean, variance) of the terminal log-return D."""
    if isinstance(prior, Constant):
        return prior.delta, 0.0
    if isinstance(prior, TwoPoint):
        pu, pd = prior.p_u, prior.p_d
        du, dd = prior.delta_u, prior.delta_d
        mean = du * pu + dd * pd
        var = du * du * pu * (1 - pu) + dd * dd * pd * (1 - pd) - 2 * du * dd * pu * pd
        return mean, var
    if isinstance(prior, Normal):
        return prior.mu, prior.sigma_d**2
    if isinstance(prior, DoubleExponential):
        p1, p2 = prior.p_1, prior.p_2
        l1, l2 = prior.lambda_1, prior.lambda_2
        mean = prior.theta - p1 / l1 + p2 / l2
        var = 2 * p1 / l1**2 + 2 * p2 / l2**2 - (p1 / l1 - p2 / l2) ** 2
        return mean, var
    raise TypeError(f"unsupported prior type: {type(prior).__name__}")


def pdf(prior: Prior, z):
    """Prior density of D at z (probability mass at the atoms for discrete priors)."""
    z = np.asarray(z, dtype=float)
    if isinstance(prior, Constant):
        return np.where(z == prior.delta, 1.0, 0.0)
    if isinstance(prior, TwoPoint):
        return np.where(z == prior.delta_u, prior.p_u,
                        np.where(z == prior.delta_d, prior.p_d, 0.0))
    if isinstance(prior, Normal):
        v = prior.sigma_d**2
        return np.exp(-0.5 * (z - prior.mu) ** 2 / v) / np.sqrt(2 * np.pi * v)
    if isinstance(prior, DoubleExponential):
        lo = prior.p_1 * prior.lambda_1 * np.exp(prior.lambda_1 * (z - prior.theta))
        hi = prior.p_2 * prior.lambda_2 * np.exp(-prior.lambda_2 * (z - prior.theta))
        return np.where(z < prior.theta, lo, hi)
    raise TypeError(f"unsupported prior type: {type(prior).__name__}")


def _check_time(t: float, m: MarketParams, *, exclusive_zero: bool = False) -> None:
    if exclusive_zero:
        if not 0.0 < t < m.T:
            raise ValueError(f"t must lie in (0, T); got t={t}, T={m.T}")
    else:
        if not 0.0 <= t < m.T:
            raise ValueError(f"t must lie in [0, T); got t={t}, T={m.T}")


def _as_result(x, values):
    if np.ndim(x) == 0:
        return float(values)
    return np.asarray(values, dtype=float)


def _tilt_exponents(t: float, x, m: MarketParams) -> tuple:
    """Coefficients of the Bayes weight exp(bc*z - zeta*z^2) at (t, x)."""
    tau = m.T - t
    bc = (np.asarray(x, dtype=float) - m.x0) / (m.sigma**2 * tau)
    zeta = t / (2.0 * m.T * m.sigma**2 * tau)
    return bc, zeta


def _two_point_weights(prior: TwoPoint, t, x, m):
    """Stable conditional atom weights (w_u, w_d), normalized to sum to 1."""
    bc, zeta = _tilt_exponents(t, x, m)
    eu = np.log(prior.p_u) + prior.delta_u * bc - prior.delta_u**2 * zeta
    ed = np.log(prior.p_d) + prior.delta_d * bc - prior.delta_d**2 * zeta
    top = np.maximum(eu, ed)
    wu = np.exp(eu - top)
    wd = np.exp(ed - top)
    tot = wu + wd
    return wu / tot, wd / tot


def _double_exp_sides(prior: DoubleExponential, t, x, m):
    """Per-side truncated-Gaussian means and the stable side log-weight gap.

    Conditioning tilts each exponential branch into a Gaussian with variance
    sd2 = 1/(2 zeta) truncated at theta.  Means are evaluated through the
    Mills ratio and the mixing weight through a single log-weight difference,
    so nothing overflows even for t near 0 or |x - x0| large.
    """
    th, l1, l2 = prior.theta, prior.lambda_1, prior.lambda_2
    bc, zeta = _tilt_exponents(t, x, m)
    sd2 = 1.0 / (2.0 * zeta)
    sd = np.sqrt(sd2)
    mu1 = sd2 * (bc + l1)
    mu2 = sd2 * (bc - l2)
    d1 = (th - mu1) / sd
    d2 = (th - mu2) / sd
    # Mean of N(mu, sd^2) truncated to z < theta (side 1) / z >= theta (side 2).
    m1 = th - sd * (d1 + mills_ratio(d1))
    m2 = th + sd * (-d2 + mills_ratio(-d2))
    # log w1 - log w2 with the quadratic completion differenced analytically.
    de = 0.5 * sd2 * (l1 + l2) * (2.0 * bc + l1 - l2) - th * (l1 + l2)
    dlw = np.log(prior.p_1 * l1) - np.log(prior.p_2 * l2) + de \
        + norm_logcdf(d1) - norm_logcdf(-d2)
    return m1, m2, dlw, d1, d2


def _sigmoid(z):
    z = np.asarray(z, dtype=float)
    out = np.empty_like(z)
    pos = z >= 0
    out[pos] = 1.0 / (1.0 + np.exp(-z[pos]))
    ez = np.exp(z[~pos])
    out[~pos] = ez / (1.0 + ez)
    return out


def posterior_mean(prior: Prior, t: float, x, m: MarketParams):
    """a(t, x) = E[D | X_t = x] for 0 <= t < T."""
    _check_time(t, m)
    if isinstance(prior, Constant):
        return _as_result(x, np.broadcast_to(prior.delta, np.shape(x)).astype(float))
    if isinstance(prior, Normal):
        vd = prior.sigma_d**2
        tau = m.T - t
        xa = np.asarray(x, dtype=float)
        num = m.T * ((xa - m.x0) * vd + prior.mu * m.sigma**2 * tau)
        den = t * vd + m.T * m.sigma**2 * tau
        return _as_result(x, num / den)
    if t < T_EPS_FRACTION * m.T:
        mean, _ = prior_moments(prior)
        return _as_result(x, np.broadcast_to(mean, np.shape(x)).astype(float))
    if isinstance(prior, TwoPoint):
        wu, wd = _two_point_weights(prior, t, x, m)
        return _as_result(x, prior.delta_u * wu + prior.delta_d * wd)
    if isinstance(prior, DoubleExponential):
        m1, m2, dlw, _, _ = _double_exp_sides(prior, t, x, m)
        w1 = _sigmoid(np.atleast_1d(dlw))
        vals = w1 * np.atleast_1d(m1) + (1.0 - w1) * np.atleast_1d(m2)
        return _as_result(x, vals if np.ndim(x) else vals[0])
    raise TypeError(f"unsupported prior type: {type(prior).__name__}")


def posterior_density(prior: Prior, t: float, x, z, m: MarketParams):
    """Conditional law of D given X_t = x, evaluated at z.

    Returns a probability density for continuous priors and a probability
    mass for discrete ones (z is compared exactly against the atoms).
    Requires 0 < t < T.
    """
    _check_time(t, m, exclusive_zero=True)
    za = np.asarray(z, dtype=float)
    if isinstance(prior, Constant):
        return _as_result(z, np.where(za == prior.delta, 1.0, 0.0))
    if isinstance(prior, TwoPoint):
        wu, wd = _two_point_weights(prior, t, x, m)
        vals = np.where(za == prior.delta_u, wu,
                        np.where(za == prior.delta_d, wd, 0.0))
        return _as_result(z, vals)
    if isinstance(prior, Normal):
        # Gaussian prior times Gaussian likelihood: still Gaussian, with the
        # posterior mean a(t, x) and precision 1/sigma_d^2 + 2 zeta.
        _, zeta = _tilt_exponents(t, x, m)
        mean = posterior_mean(prior, t, x, m)
        prec = 1.0 / prior.sigma_d**2 + 2.0 * zeta
        var = 1.0 / prec
        vals = np.exp(-0.5 * (za - mean) ** 2 / var) / np.sqrt(2 * np.pi * var)
        return _as_result(z, vals)
    if isinstance(prior, DoubleExponential):
        bc, zeta = _tilt_exponents(t, x, m)
        m1, m2, dlw, d1, d2 = _double_exp_sides(prior, t, x, m)
        # log normalizer per side, common Gaussian normalization factored out:
        # log H_i = log(p_i l_i) + E_i + log Phi(+-d_i) + 0.5*log(pi/zeta).
        l1, l2, th = prior.lambda_1, prior.lambda_2, prior.theta
        e1 = (bc + l1) ** 2 / (4.0 * zeta) - l1 * th
        e2 = (bc - l2) ** 2 / (4.0 * zeta) + l2 * th
        lh1 = np.log(prior.p_1 * l1) + e1 + norm_logcdf(d1)
        lh2 = np.log(prior.p_2 * l2) + e2 + norm_logcdf(-d2)
        lh1 = lh1 + 0.5 * np.log(np.pi / zeta)
        lh2 = lh2 + 0.5 * np.log(np.pi / zeta)
        log_norm = np.logaddexp(lh1, lh2)
        log_num = np.where(
            za < th,
            np.log(prior.p_1 * l1) + l1 * (za - th),
            np.log(prior.p_2 * l2) - l2 * (za - th),
        ) + bc * za - zeta * za * za
        return _as_result(z, np.exp(log_num - log_norm))
    raise TypeError(f"unsupported prior type: {type(prior).__name__}")


def drift(prior: Prior, t: float, x, m: MarketParams):
    """Filtered log-price drift A(t, x) = (a(t, x) - (x - x0)) / (T - t)."""
    _check_time(t, m)
    a = posterior_mean(prior, t, x, m)
    xa = np.asarray(x, dtype=float)
    vals = (np.asarray(a) - (xa - m.x0)) / (m.T - t)
    return _as_result(x, vals)
