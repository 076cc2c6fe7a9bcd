"""Scalar and array kernels: modified Bessel I of integer / half-integer
order, log-gamma and log-binomial.

All functions accept numpy arrays where it makes sense and are pure.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

# Below this argument the power series is summed; above it the large-x
# asymptotic expansion is used.
SERIES_CUTOFF = 50.0
_SERIES_RTOL = 1e-17


@dataclass(frozen=True)
class BesselOrder:
    """Order nu = twice_order / 2 (0, 1/2, 1, 3/2, ...)."""

    twice_order: int

    def __post_init__(self):
        if int(self.twice_order) != self.twice_order or self.twice_order < 0:
            raise ValueError(f"twice_order must be a non-negative integer, got {self.twice_order!r}")

    @property
    def nu(self) -> float:
        return self.twice_order / 2.0

    @classmethod
    def of(cls, nu) -> "BesselOrder":
        if isinstance(nu, BesselOrder):
            return nu
        two = 2.0 * float(nu)
        if two < 0 or abs(two - round(two)) > 1e-12:
            raise ValueError(f"order must be a non-negative multiple of 1/2, got {nu!r}")
        return cls(int(round(two)))


def _check_x(x) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    if not np.all(np.isfinite(x)) or np.any(x < 0):
        raise ValueError("Bessel argument must be finite and >= 0")
    return x


def _series(nu: float, x: np.ndarray) -> np.ndarray:
    """Power series sum_k (x/2)^(2k+nu) / (k! Gamma(k+nu+1)) for x <= cutoff."""
    out = np.zeros_like(x)
    pos = x > 0
    if nu == 0:
        out[~pos] = 1.0
    if not np.any(pos):
        return out
    xp = x[pos]
    term = np.exp(nu * (np.log(xp) - math.log(2.0)) - math.lgamma(nu + 1.0))
    total = term.copy()
    y = (xp / 2.0) ** 2
    k = 0
    while True:
        term = term * y / ((k + 1.0) * (k + 1.0 + nu))
        total += term
        k += 1
        if np.all(term <= _SERIES_RTOL * total):
            break
    out[pos] = total
    return out


def _asymptotic_scaled(nu: float, x: np.ndarray) -> np.ndarray:
    """e^{-x} I_nu(x) from the Hankel expansion; accurate for x > ~30."""
    mu = 4.0 * nu * nu
    term = np.ones_like(x)
    total = np.ones_like(x)
    prev = np.full_like(x, np.inf)
    for k in range(1, 200):
        term = -term * (mu - (2 * k - 1) ** 2) / (k * 8.0 * x)
        a = np.abs(term)
        # stop a lane once its terms stop shrinking (optimal truncation)
        live = a < prev
        total = np.where(live, total + term, total)
        prev = np.where(live, a, 0.0)
        if not np.any(live & (a > _SERIES_RTOL * np.abs(total))):
            break
    return total / np.sqrt(2.0 * math.pi * x)


def bessel_i_scaled(nu, x):
    """Exponentially scaled e^{-x} I_nu(x); finite for all x >= 0."""
    nu = BesselOrder.of(nu).nu
    xa = _check_x(x)
    flat = np.atleast_1d(xa).astype(float)
    out = np.empty_like(flat)
    small = flat <= SERIES_CUTOFF
    if np.any(small):
        out[small] = _series(nu, flat[small]) * np.exp(-flat[small])
    if np.any(~small):
        out[~small] = _asymptotic_scaled(nu, flat[~small])
    return out.reshape(xa.shape) if xa.ndim else float(out[0])


def bessel_i(nu, x):
    """Modified Bessel function of the first kind I_nu(x), x >= 0.

    Overflows to inf for x beyond ~713; use :func:`bessel_i_scaled` there.
    """
    nu = BesselOrder.of(nu).nu
    xa = _check_x(x)
    flat = np.atleast_1d(xa).astype(float)
    out = np.empty_like(flat)
    small = flat <= SERIES_CUTOFF
    if np.any(small):
        out[small] = _series(nu, flat[small])
    if np.any(~small):
        big = flat[~small]
        with np.errstate(over="ignore"):
            out[~small] = _asymptotic_scaled(nu, big) * np.exp(big)
    return out.reshape(xa.shape) if xa.ndim else float(out[0])


def log_gamma(x: float) -> float:
    if not x > 0 or not math.isfinite(x):
        raise ValueError(f"log_gamma requires a finite x > 0, got {x!r}")
    return math.lgamma(x)


def log_factorial(n: int) -> float:
    if n < 0:
        raise ValueError("log_factorial requires n >= 0")
    return math.lgamma(n + 1.0)


def log_binomial(n: int, k: int) -> float:
    """ln C(n, k); -inf (zero mass) when k is outside [0, n]."""
    if n < 0:
        raise ValueError("log_binomial requires n >= 0")
    if k < 0 or k > n:
        return -math.inf
    if n <= 1000:
        # exact integer, single rounding
        return math.log(math.comb(n, k))
    return math.lgamma(n + 1.0) - math.lgamma(k + 1.0) - math.lgamma(n - k + 1.0)


def central_binomial_weight(k: int) -> float:
    """C(2k, k) / 4^k, stable for large k."""
    return math.exp(log_binomial(2 * k, k) - 2 * k * math.log(2.0))


def poisson_log_pmf(n: int, mean: float) -> float:
    if mean == 0:
        return 0.0 if n == 0 else -math.inf
    return -mean + n * math.log(mean) - math.lgamma(n + 1.0)
