"""Shapiro-Wilk W test of normality, algorithm AS R94 (Royston, 1995).

Computes the W statistic from Blom normal scores with Royston's polynomial
corrections for the one or two largest weights, then maps W to a p-value in
three regimes: exact at n = 3, a log transform of (gamma - log(1 - W)) for
4 <= n <= 11, and a log-log normalization for n >= 12. The approximation is
validated for 3 <= n <= 5000; larger samples are rejected rather than
extrapolated.
"""
from __future__ import annotations

import math

import numpy as np
from scipy.stats import norm

from .errors import DegenerateDataError

# Polynomial coefficients from AS R94, highest power first (np.polyval order).
_C1 = (-2.706056, 4.434685, -2.071190, -0.147981, 0.221157, 0.0)
_C2 = (-3.582633, 5.682633, -1.752461, -0.293762, 0.042981, 0.0)
_C3 = (-0.0006714, 0.025054, -0.39978, 0.5440)
_C4 = (-0.0020322, 0.062767, -0.77857, 1.3822)
_C5 = (0.0038915, -0.083751, -0.31082, -1.5861)
_C6 = (0.0030302, -0.082676, -0.4803)
_G = (0.459, -2.273)

_SQRT_HALF = math.sqrt(0.5)
# Exact p-value constants for n = 3: 6/pi and asin(sqrt(3/4)).
_PI6 = 6.0 / math.pi
_STQR = math.asin(math.sqrt(0.75))

MIN_N = 3
MAX_N = 5000


def _weights(n: int) -> np.ndarray:
    m = norm.ppf((np.arange(1, n + 1) - 0.375) / (n + 0.25))
    if n == 3:
        return np.array([-_SQRT_HALF, 0.0, _SQRT_HALF])
    msq = float(m @ m)
    rsn = 1.0 / math.sqrt(n)
    a = np.empty(n)
    a_n = float(np.polyval(_C1, rsn)) + m[-1] / math.sqrt(msq)
    if n > 5:
        a_n1 = float(np.polyval(_C2, rsn)) + m[-2] / math.sqrt(msq)
        phi = (msq - 2.0 * m[-1] ** 2 - 2.0 * m[-2] ** 2) / (
            1.0 - 2.0 * a_n**2 - 2.0 * a_n1**2
        )
        a[2 : n - 2] = m[2 : n - 2] / math.sqrt(phi)
        a[-2], a[1] = a_n1, -a_n1
    else:
        phi = (msq - 2.0 * m[-1] ** 2) / (1.0 - 2.0 * a_n**2)
        a[1 : n - 1] = m[1 : n - 1] / math.sqrt(phi)
    a[-1], a[0] = a_n, -a_n
    return a


def shapiro_wilk_statistic(sample) -> tuple[float, float]:
    """Return (W, p) for the Shapiro-Wilk test on a 1-D sample.

    Requires 3 <= n <= 5000 and a sample with nonzero range.
    """
    x = np.sort(np.asarray(sample, dtype=np.float64))
    n = x.size
    if n < MIN_N or n > MAX_N:
        raise DegenerateDataError(
            f"Shapiro-Wilk is supported for {MIN_N} <= n <= {MAX_N}, got n={n}"
        )
    if x[-1] - x[0] <= 0.0:
        raise DegenerateDataError("Shapiro-Wilk undefined for a zero-range sample")

    a = _weights(n)
    centered = x - x.mean()
    w = float((a @ x) ** 2 / (centered @ centered))
    w = min(w, 1.0)

    if n == 3:
        p = _PI6 * (math.asin(math.sqrt(w)) - _STQR)
        return w, min(max(p, 0.0), 1.0)

    w1 = 1.0 - w
    if w1 <= 0.0:
        return w, 1.0
    y = math.log(w1)
    if n <= 11:
        gamma = float(np.polyval(_G, n))
        if y >= gamma:
            return w, 1e-99
        z = (-math.log(gamma - y) - float(np.polyval(_C3, n))) / math.exp(
            float(np.polyval(_C4, n))
        )
    else:
        ln_n = math.log(n)
        z = (y - float(np.polyval(_C5, ln_n))) / math.exp(float(np.polyval(_C6, ln_n)))
    return w, float(norm.sf(z))
