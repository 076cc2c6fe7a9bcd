"""Closed-form laws conditional on the initial direction and on N(t) = n.

Conventions shared by every function here:

* ``a = c * t`` is the support edge; densities vanish (exactly) outside the
  open support and on its boundary.
* CDFs are strict, ``P{X < x}``, so an atom at 0 counts for every x > 0.
* Factorial ratios are formed in log space and exponentiated once.
"""
from __future__ import annotations

import math
from typing import NamedTuple

import numpy as np

from .special import log_binomial

_LN2 = math.log(2.0)
lgamma = math.lgamma


class Atom(NamedTuple):
    location: float
    mass: float


def _direction(v0: int) -> int:
    if v0 not in (1, -1):
        raise ValueError(f"v0 must be +1 or -1, got {v0!r}")
    return v0


def _count(n: int) -> int:
    if int(n) != n or n < 0:
        raise ValueError(f"event count must be a non-negative integer, got {n!r}")
    return int(n)


def _powlog(base: np.ndarray, k: float) -> np.ndarray:
    """k * log(base) with the 0 * log(.) = 0 convention."""
    if k == 0:
        return np.zeros_like(base)
    return k * np.log(base)


def _scalar_out(x, out):
    return float(out) if np.ndim(x) == 0 else out


# --- position ---------------------------------------------------------------

def position_density(x, n: int, v0: int, c: float, t: float):
    """Density of T(t) given N(t) = n >= 1 and V(0) = v0 * c."""
    n, v0 = _count(n), _direction(v0)
    if n == 0:
        raise ValueError("with n = 0 the position is the atom v0*c*t; use position_atoms")
    a = c * t
    xa = np.asarray(x, dtype=float)
    out = np.zeros(xa.shape)
    inside = np.abs(xa) < a
    xi = xa[inside]
    k = n // 2
    if n % 2:
        lcoef = lgamma(2 * k + 2) - 2 * lgamma(k + 1)
        logv = lcoef + _powlog(a * a - xi * xi, k) - (2 * k + 1) * math.log(2 * a)
    else:
        lcoef = lgamma(2 * k + 1) - lgamma(k + 1) - lgamma(k)
        up, down = (a + xi, a - xi) if v0 == 1 else (a - xi, a + xi)
        logv = lcoef + _powlog(up, k) + _powlog(down, k - 1) - 2 * k * math.log(2 * a)
    out[inside] = np.exp(logv)
    return _scalar_out(x, out)


def position_atoms(n: int, v0: int, c: float, t: float) -> list[Atom]:
    if _count(n) == 0:
        return [Atom(_direction(v0) * c * t, 1.0)]
    return []


def position_cdf(x, n: int, v0: int, c: float, t: float):
    """P{T(t) < x | N(t) = n, V(0) = v0 c}, via the plus-time order statistic."""
    n, v0 = _count(n), _direction(v0)
    a = c * t
    xa = np.asarray(x, dtype=float)
    if n == 0:
        out = (xa > v0 * a).astype(float)
        return _scalar_out(x, out)
    r = n // 2 + 1
    p = np.clip((xa + a) / (2 * a), 0.0, 1.0)
    if v0 == 1:
        out = order_stat_cdf(p, r, n)
    else:
        out = 1.0 - order_stat_cdf(1.0 - p, r, n)
    return _scalar_out(x, np.asarray(out, dtype=float))


# --- running maximum --------------------------------------------------------

def _coef_plus(k: int) -> float:
    # log of 2 (2k+1)! / k!^2
    return _LN2 + lgamma(2 * k + 2) - 2 * lgamma(k + 1)


def max_density(beta, n: int, v0: int, c: float, t: float):
    """Continuous part of the density of max_{s<=t} T(s) given N(t) = n."""
    n, v0 = _count(n), _direction(v0)
    if v0 == 1 and n == 0:
        raise ValueError("V(0)=+c, N(t)=0: the maximum is the atom c*t with mass 1; use max_atoms")
    a = c * t
    ba = np.asarray(beta, dtype=float)
    out = np.zeros(ba.shape)
    inside = (ba > 0) & (ba < a)
    if v0 == -1 and n == 0:
        return _scalar_out(beta, out)
    b = ba[inside]
    q = a * a - b * b
    l2a = math.log(2 * a)
    k = n // 2
    if v0 == 1:
        k = (n - 1) // 2
        vals = np.exp(_coef_plus(k) + _powlog(q, k) - (2 * k + 1) * l2a)
    elif n % 2 == 0:
        lcoef = _LN2 + lgamma(2 * k + 1) - lgamma(k + 1) - lgamma(k)
        vals = np.exp(lcoef + _powlog(q, k - 1) + np.log(a - b) - 2 * k * l2a)
    else:
        # second term alone at k = 0, since 1/Gamma(0) = 0 kills the first
        lb = lgamma(2 * k + 2) - lgamma(k + 1) - lgamma(k + 2)
        vals = np.exp(lb + _powlog(q, k) - (2 * k + 1) * l2a)
        if k >= 1:
            la = lgamma(2 * k + 2) - lgamma(k) - lgamma(k + 2)
            vals = vals + np.exp(la + _powlog(q, k - 1) + np.log(a - b) - 2 * k * l2a)
    out[inside] = vals
    return _scalar_out(beta, out)


def atom_at_zero(n: int) -> float:
    """P{max = 0 | V(0) = -c, N(t) = n}; independent of c and t."""
    n = _count(n)
    k = n // 2
    return math.exp(log_binomial(n, k) - n * _LN2)


def max_atoms(n: int, v0: int, c: float, t: float) -> list[Atom]:
    n, v0 = _count(n), _direction(v0)
    if v0 == 1:
        return [Atom(c * t, 1.0)] if n == 0 else []
    return [Atom(0.0, atom_at_zero(n))]


def _cdf_partial_sums(u: np.ndarray, kmax: int) -> list[np.ndarray]:
    """Terms C(2j, j) (u/4)^j for j = 0..kmax, u = 1 - (beta/a)^2."""
    terms = [np.ones_like(u)]
    for j in range(1, kmax + 1):
        terms.append(terms[-1] * u * (2 * j - 1) / (2 * j))
    return terms


def max_cdf(beta, n: int, v0: int, c: float, t: float):
    """P{max < beta | V(0) = v0 c, N(t) = n}, clamped to [0, 1]."""
    n, v0 = _count(n), _direction(v0)
    a = c * t
    ba = np.asarray(beta, dtype=float)
    out = np.where(ba > 0, 1.0, 0.0)
    if v0 == 1 and n == 0:
        out = np.where(ba > a, 1.0, 0.0)
        return _scalar_out(beta, out)
    if v0 == -1 and n == 0:
        return _scalar_out(beta, out)
    inside = (ba > 0) & (ba < a)
    b = ba[inside]
    r = b / a
    u = 1.0 - r * r
    if v0 == 1:
        k = (n - 1) // 2
        terms = _cdf_partial_sums(u, k)
        vals = r * np.sum(terms, axis=0)
    else:
        k = n // 2
        terms = _cdf_partial_sums(u, k)
        head = r * np.sum(terms[:k], axis=0) if k > 0 else np.zeros_like(b)
        if n % 2 == 0:
            vals = head + terms[k]
        else:
            # C(2k,k)/(2(k+1)) (u/4)^k (r + 2k + 1)
            vals = head + terms[k] / (2.0 * (k + 1)) * (r + 2 * k + 1)
    out[inside] = np.clip(vals, 0.0, 1.0)
    return _scalar_out(beta, out)


def _central_tail(u: np.ndarray, k: int) -> np.ndarray:
    """sum_{j >= k} C(2j, j) (u/4)^j, summed directly; needs u well below 1."""
    term = np.exp(_cdf_log_term(u, k))
    total = term.copy()
    j = k
    while np.any(term > 1e-17 * total):
        j += 1
        term = term * u * (2 * j - 1) / (2 * j)
        total += term
    return total


def _cdf_log_term(u: np.ndarray, k: int) -> np.ndarray:
    return log_binomial(2 * k, k) - 2 * k * _LN2 + _powlog(u, k)


def max_sf(beta, n: int, v0: int, c: float, t: float):
    """P{max >= beta} = 1 - max_cdf, accurate when it is tiny.

    Uses sum_j C(2j, j) (u/4)^j = 1/sqrt(1 - u) to write the complement as
    a convergent tail series for beta near c t.
    """
    n, v0 = _count(n), _direction(v0)
    a = c * t
    ba = np.atleast_1d(np.asarray(beta, dtype=float))
    out = 1.0 - np.asarray(max_cdf(ba, n, v0, c, t), dtype=float)
    use = (ba >= 0.45 * a) & (ba < a)
    if n == 0 or not np.any(use):
        return _scalar_out(beta, out.reshape(np.shape(beta)))
    r = ba[use] / a
    u = 1.0 - r * r
    if v0 == 1:
        k = (n - 1) // 2
        vals = r * _central_tail(u, k + 1)
    else:
        k = n // 2
        tk = np.exp(_cdf_log_term(u, k))
        tail = r * _central_tail(u, k)
        vals = tail - tk if n % 2 == 0 else tail - tk * (r + 2 * k + 1) / (2 * k + 2)
    out[use] = np.clip(vals, 0.0, 1.0)
    return _scalar_out(beta, out.reshape(np.shape(beta)))


def max_moment(m: int, n: int, v0: int, c: float, t: float) -> float:
    """E[max^m | V(0) = v0 c, N(t) = n], atoms included."""
    if int(m) != m or m < 1:
        raise ValueError("moment order m must be a positive integer")
    n, v0 = _count(n), _direction(v0)
    a = c * t
    if v0 == 1:
        if n == 0:
            return a ** m
        k = (n - 1) // 2
        h = (m + 1) / 2.0
        return math.exp(lgamma(2 * k + 2) - (2 * k + 1) * _LN2 - lgamma(k + 1)
                        + lgamma(h) - lgamma(k + 1 + h)) * a ** m
    if n == 0:
        return 0.0
    k = n // 2
    if n % 2 == 0:
        pre = lgamma(2 * k + 1) - 2 * k * _LN2 - lgamma(k + 1)
        first = math.exp(pre + lgamma((m + 1) / 2.0) - lgamma(k + (m + 1) / 2.0))
        second = math.exp(pre + lgamma(m / 2.0 + 1) - lgamma(k + 1 + m / 2.0))
        return (first - second) * a ** m
    w = (2 * k + 1) / (2 * k + 2)
    return w * max_moment(m, 2 * k, -1, c, t) + (1 - w) * max_moment(m, 2 * k + 1, 1, c, t)


# --- order statistics of the arrival times ------------------------------------

def order_stat_cdf(p, r: int, n: int):
    """P{U_(r) <= p} for the r-th order statistic of n Uniform(0, 1)."""
    p = np.asarray(p, dtype=float)
    out = np.zeros(p.shape)
    for j in range(r, n + 1):
        out = out + math.comb(n, j) * p ** j * (1.0 - p) ** (n - j)
    return np.clip(out, 0.0, 1.0)


def order_stat_density(z, r: int, n: int, t: float):
    """Density of the r-th order statistic of n Uniform(0, t) variables."""
    za = np.asarray(z, dtype=float)
    out = np.zeros(za.shape)
    inside = (za > 0) & (za < t)
    p = za[inside] / t
    out[inside] = n / t * math.comb(n - 1, r - 1) * p ** (r - 1) * (1 - p) ** (n - r)
    return _scalar_out(z, out)


def order_stat_increment_density(w, n: int, gap: int, t: float):
    """Density of Y_(k+gap) - Y_(k) for n Uniform(0, t) draws (free of k)."""
    if not 1 <= gap <= n:
        raise ValueError("gap must satisfy 1 <= gap <= n")
    wa = np.asarray(w, dtype=float)
    out = np.zeros(wa.shape)
    inside = (wa > 0) & (wa < t)
    wi = wa[inside]
    lcoef = lgamma(n + 1) - lgamma(gap) - lgamma(n - gap + 1)
    out[inside] = np.exp(lcoef + _powlog(wi, gap - 1) + _powlog(t - wi, n - gap) - n * math.log(t))
    return _scalar_out(w, out)


def order_stat_increment_cdf(w, n: int, gap: int, t: float):
    # the increment is t * Beta(gap, n - gap + 1), i.e. distributed as Y_(gap)
    return order_stat_cdf(np.clip(np.asarray(w, dtype=float) / t, 0.0, 1.0), gap, n)


def bivariate_arrival_density(tk, tl, k: int, l: int, n: int, t: float):
    """Joint density of (T_k, T_l), k < l, given N(t) = n."""
    if not 1 <= k < l <= n:
        raise ValueError("need 1 <= k < l <= n")
    tk = np.asarray(tk, dtype=float)
    tl = np.asarray(tl, dtype=float)
    inside = (tk > 0) & (tk < tl) & (tl < t)
    with np.errstate(divide="ignore", invalid="ignore"):
        val = (math.factorial(n) / t ** n
               * tk ** (k - 1) / math.factorial(k - 1)
               * (tl - tk) ** (l - k - 1) / math.factorial(l - k - 1)
               * (t - tl) ** (n - l) / math.factorial(n - l))
    out = np.where(inside, val, 0.0)
    return float(out) if out.ndim == 0 else out
