"""Chi-square CDF and quantile helpers.

Kept as a stand-alone routine so tests can calibrate rejection rates against
an in-house quantile computation rather than a distribution object.
"""
import math

from scipy.optimize import brentq
from scipy.special import gammainc


def chi2_cdf(x: float, df: int) -> float:
    """P(X <= x) for X ~ chi-square with ``df`` degrees of freedom."""
    if x <= 0.0:
        return 0.0
    return float(gammainc(df / 2.0, x / 2.0))


def chi2_quantile(q: float, df: int) -> float:
    """Quantile of the chi-square distribution, by root finding on the CDF."""
    if not 0.0 < q < 1.0:
        raise ValueError(f"quantile level must be in (0, 1), got {q}")
    if df == 2:
        # closed form, used as a cross-check in the tests
        return -2.0 * math.log1p(-q)
    hi = 2.0 * df
    while chi2_cdf(hi, df) < q:
        hi *= 2.0
    return float(brentq(lambda x: chi2_cdf(x, df) - q, 0.0, hi, xtol=1e-12))
