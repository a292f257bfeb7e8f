"""Pure-NumPy kernels, used when the compiled extension is unavailable.

The Lindley recursion is evaluated in its prefix-sum max form so it
vectorizes:

    S_n = max_{1<=k<=n} (sum_{i=k}^n X_i - sum_{i=k+1}^n T_i)
        = CX_n - CT_n + max_{1<=k<=n} (CT_k - CX_{k-1})

with CX, CT the cumulative sums of services and interarrivals.  The running
max is a single ``np.maximum.accumulate``.
"""

from __future__ import annotations

import numpy as np


def lindley_system_times(interarrivals: np.ndarray, services: np.ndarray) -> np.ndarray:
    """System time of every update in an FCFS queue."""
    x = np.asarray(services, dtype=np.float64)
    t = np.asarray(interarrivals, dtype=np.float64)
    n = x.shape[0]
    if n == 0:
        return np.empty(0, dtype=np.float64)
    cx = np.cumsum(x)
    ct = np.cumsum(t)
    # d[k-1] = CT_k - CX_{k-1}
    d = ct.copy()
    d[1:] -= cx[:-1]
    return cx - ct + np.maximum.accumulate(d)


def exact_single_max(lam: float, mu: float, alpha: float,
                     gamma_a: float, gamma_s: float, n: int) -> tuple[float, int]:
    """Max over m in {0..n-1} of
    (m+1)/mu - m/lam + gamma_s*(m+1)^(1/alpha) + gamma_a*m^(1/alpha).

    Returns (value, argmax); ties resolve to the smallest m.
    """
    ia = 1.0 / alpha
    m = np.arange(n, dtype=np.float64)
    vals = (m + 1.0) / mu - m / lam + gamma_s * (m + 1.0) ** ia + gamma_a * m ** ia
    i = int(np.argmax(vals))
    return float(vals[i]), i


def exact_two_max(lam: float, mu: float, alpha: float,
                  gamma_a: float, gamma_s: float, n: int) -> tuple[float, float]:
    """Max over the half-integer grid m in {-1/2, 0, 1/2, ..., n/2 - 1} of
    2(m+1)/mu - m/lam + 2*gamma_s*(m+1)^(1/alpha) + gamma_a*m^(1/alpha),
    with the m = -1/2 boundary defined as 1/mu + gamma_s.

    Returns (value, argmax); ties resolve to the smallest m.
    """
    ia = 1.0 / alpha
    boundary = 1.0 / mu + gamma_s
    if n <= 1:
        return boundary, -0.5
    m = 0.5 * np.arange(1, n, dtype=np.float64) - 0.5
    vals = (2.0 * (m + 1.0) / mu - m / lam
            + 2.0 * gamma_s * (m + 1.0) ** ia + gamma_a * m ** ia)
    i = int(np.argmax(vals))
    if boundary >= float(vals[i]):
        return boundary, -0.5
    return float(vals[i]), float(m[i])
