"""Goodness-of-fit statistics used by the Monte Carlo checks."""
from __future__ import annotations

import math

import numpy as np
from scipy import stats


def ks_statistic(samples, cdf) -> float:
    """Two-sided Kolmogorov-Smirnov distance between sorted samples and a model CDF."""
    x = np.asarray(samples, dtype=float)
    n = x.size
    if n == 0:
        raise ValueError("ks_statistic needs at least one sample")
    if np.any(np.diff(x) < 0):
        raise ValueError("samples must be sorted")
    f = np.broadcast_to(np.asarray(cdf(x), dtype=float), x.shape)
    i = np.arange(1, n + 1)
    return float(max(np.max(i / n - f), np.max(f - (i - 1) / n)))


def ks_critical(n: int, alpha: float = 0.01) -> float:
    """Exact two-sided critical value of the one-sample KS statistic."""
    return float(stats.kstwo.isf(alpha, n))


def chi_square(observed, expected, min_expected: float = 5.0, ddof: int = 0):
    """Pearson chi-square after pooling cells with small expected counts.

    Cells are pooled in the given order until each pooled group reaches
    ``min_expected``.  Returns ``(statistic, dof)``.
    """
    obs = np.asarray(observed, dtype=float).ravel()
    exp = np.asarray(expected, dtype=float).ravel()
    order = np.argsort(exp)
    pooled_o, pooled_e = [], []
    acc_o = acc_e = 0.0
    for i in order:
        acc_o += obs[i]
        acc_e += exp[i]
        if acc_e >= min_expected:
            pooled_o.append(acc_o)
            pooled_e.append(acc_e)
            acc_o = acc_e = 0.0
    if acc_e > 0 or acc_o > 0:
        if pooled_e:
            pooled_o[-1] += acc_o
            pooled_e[-1] += acc_e
        else:
            pooled_o.append(acc_o)
            pooled_e.append(acc_e)
    o = np.array(pooled_o)
    e = np.array(pooled_e)
    stat = float(np.sum((o - e) ** 2 / e))
    return stat, len(e) - 1 - ddof


def chi_square_critical(dof: int, alpha: float = 0.01) -> float:
    return float(stats.chi2.isf(alpha, dof))


def binomial_z(count: int, n: int, p: float) -> float:
    """z-score of an observed count against Binomial(n, p)."""
    sd = math.sqrt(n * p * (1.0 - p))
    if sd == 0:
        return 0.0 if count == n * p else math.inf
    return (count - n * p) / sd
