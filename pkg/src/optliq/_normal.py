"""Standard-normal helpers shared by the belief and payoff modules.

All routines are thin wrappers over the erf-family functions in
``scipy.special``, which are accurate to better than 1e-15 absolute and
vectorize over arrays.
"""

import numpy as np
from scipy.special import erfcx, log_ndtr, ndtr, ndtri

_SQRT2 = np.sqrt(2.0)
_SQRT_2_OVER_PI = np.sqrt(2.0 / np.pi)
_INV_SQRT_2PI = 1.0 / np.sqrt(2.0 * np.pi)


def norm_cdf(x):
    """Phi(x) via the complementary error function (exact 0/1 in far tails)."""
    return ndtr(x)


def norm_logcdf(x):
    """log Phi(x), stable arbitrarily far into the lower tail."""
    return log_ndtr(x)


def norm_pdf(x):
    x = np.asarray(x, dtype=float)
    return _INV_SQRT_2PI * np.exp(-0.5 * x * x)


def norm_ppf(u):
    """Inverse CDF; used to turn uniforms into reproducible normal draws."""
    return ndtri(u)


def mills_ratio(u):
    """phi(u)/Phi(u) without forming the underflowing tail CDF.

    For u < -1 this uses the scaled complementary error function, which keeps
    full relative precision where exp(log phi - log Phi) would lose digits.
    """
    scalar = np.ndim(u) == 0
    ua = np.atleast_1d(np.asarray(u, dtype=float))
    out = np.empty_like(ua)
    lo = ua < -1.0
    out[lo] = _SQRT_2_OVER_PI / erfcx(-ua[lo] / _SQRT2)
    out[~lo] = norm_pdf(ua[~lo]) / ndtr(ua[~lo])
    if scalar:
        return float(out[0])
    return out
