"""Pure-NumPy implementations of the hot kernels."""
import numpy as np


def ecf_terms(x, t):
    """Mean cosine and sine of ``t * x``.

    Returns the (Re, Im) components of the empirical characteristic function
    of the sample ``x`` evaluated at argument ``t``.
    """
    tx = float(t) * np.asarray(x, dtype=np.float64)
    return float(np.cos(tx).mean()), float(np.sin(tx).mean())


def cms_standard(theta, w, alpha, beta):
    """Chambers-Mallows-Stuck transform to a standardized stable variate.

    ``theta`` is uniform on (-pi/2, pi/2) and ``w`` standard exponential.
    Output has characteristic function
    exp(-|t|^alpha (1 - i beta sign(t) tan(pi alpha / 2))) for alpha != 1 and
    exp(-|t| (1 + i beta (2/pi) sign(t) ln|t|)) for alpha == 1.
    """
    theta = np.asarray(theta, dtype=np.float64)
    w = np.asarray(w, dtype=np.float64)
    if alpha == 1.0:
        bt = np.pi / 2.0 + beta * theta
        return (2.0 / np.pi) * (
            bt * np.tan(theta) - beta * np.log((np.pi / 2.0) * w * np.cos(theta) / bt)
        )
    zeta = beta * np.tan(np.pi * alpha / 2.0)
    b = np.arctan(zeta) / alpha
    s = (1.0 + zeta * zeta) ** (1.0 / (2.0 * alpha))
    ath = alpha * (theta + b)
    return (
        s
        * np.sin(ath)
        / np.cos(theta) ** (1.0 / alpha)
        * (np.cos(theta - ath) / w) ** ((1.0 - alpha) / alpha)
    )


def accuracy_curve(stats, is_forest, thresholds):
    """Classification accuracy at every threshold.

    ``stats`` holds the per-image minimum statistics, ``is_forest`` the true
    labels; an image is predicted forest iff its statistic is strictly below
    the threshold.
    """
    stats = np.asarray(stats, dtype=np.float64)
    is_forest = np.asarray(is_forest, dtype=bool)
    thresholds = np.asarray(thresholds, dtype=np.float64)
    correct = (stats[None, :] < thresholds[:, None]) == is_forest[None, :]
    return correct.sum(axis=1).astype(np.float64) / stats.size
