"""Poisson-mixed laws: position and running maximum without conditioning on
N(t), or jointly with the parity of N(t).

Every Bessel factor appears multiplied by exp(-lam t) and is evaluated as
``exp(eta - lam t) * e^{-eta} I_nu(eta)`` so large ``lam t`` neither
overflows nor loses the product to underflow.
"""
from __future__ import annotations

import math

import numpy as np

from .conditional import Atom, _direction
from .paths import ProcessParams
from .special import bessel_i_scaled


def _parity(parity: str) -> str:
    if parity not in ("even", "odd"):
        raise ValueError(f"parity must be 'even' or 'odd', got {parity!r}")
    return parity


def _damped_bessel(nu, eta: np.ndarray, lam_t: float) -> np.ndarray:
    """exp(-lam_t) * I_nu(eta) for 0 <= eta <= lam_t."""
    return np.exp(eta - lam_t) * bessel_i_scaled(nu, eta)


def _grid(x):
    xa = np.asarray(x, dtype=float)
    return xa, np.zeros(xa.shape)


def _wrap(x, out):
    return float(out) if np.ndim(x) == 0 else out


def parity_probability(parity: str, params: ProcessParams, t: float) -> float:
    lt = params.lam * t
    e2 = math.exp(-2.0 * lt)
    return (1.0 + e2) / 2.0 if _parity(parity) == "even" else (1.0 - e2) / 2.0


# --- position ---------------------------------------------------------------

def position_parity_law(x, v0: int, parity: str, params: ProcessParams, t: float):
    """Joint density P{T(t) in dx, N(t) of given parity | V(0) = v0 c} / dx."""
    v0, parity = _direction(v0), _parity(parity)
    lam, c = params.lam, params.c
    a, lt = c * t, lam * t
    xa, out = _grid(x)
    inside = np.abs(xa) < a
    xi = xa[inside]
    eta = (lam / c) * np.sqrt(a * a - xi * xi)
    if parity == "odd":
        vals = lam / (2 * c) * _damped_bessel(0, eta, lt)
    else:
        vals = lam / (2 * c) * np.sqrt((a + v0 * xi) / (a - v0 * xi)) * _damped_bessel(1, eta, lt)
    out[inside] = vals
    return _wrap(x, out)


def position_parity_atoms(v0: int, parity: str, params: ProcessParams, t: float) -> list[Atom]:
    v0, parity = _direction(v0), _parity(parity)
    if parity == "odd":
        return []
    return [Atom(v0 * params.c * t, math.exp(-params.lam * t))]


def position_law(x, params: ProcessParams, t: float, v0: int | None = None):
    """Unconditional position law as ``(density, atoms)``.

    With ``v0=None`` the initial direction is averaged out (symmetric law);
    otherwise the law is conditional on V(0) = v0 c.
    """
    if not t > 0:
        raise ValueError("t must be > 0")
    lam, c = params.lam, params.c
    a, lt = c * t, lam * t
    e = math.exp(-lt)
    if v0 is not None:
        dens = (np.asarray(position_parity_law(x, v0, "even", params, t))
                + np.asarray(position_parity_law(x, v0, "odd", params, t)))
        return _wrap(x, dens), [Atom(_direction(v0) * a, e)]
    xa, out = _grid(x)
    inside = np.abs(xa) < a
    xi = xa[inside]
    root = np.sqrt(a * a - xi * xi)
    eta = (lam / c) * root
    # d/dt I0(eta) = I1(eta) * lam * c * t / sqrt(c^2 t^2 - x^2)
    out[inside] = (lam * _damped_bessel(0, eta, lt)
                   + lam * a / root * _damped_bessel(1, eta, lt)) / (2 * c)
    return _wrap(x, out), [Atom(-a, e / 2), Atom(a, e / 2)]


# --- running maximum ----------------------------------------------------------

def _max_setup(beta, params, t):
    lam, c = params.lam, params.c
    a = c * t
    ba = np.asarray(beta, dtype=float)
    out = np.zeros(ba.shape)
    inside = (ba > 0) & (ba < a)
    b = ba[inside]
    root = np.sqrt(a * a - b * b)
    return ba, out, inside, b, root, (lam / c) * root, a, lam * t


def max_parity_law(beta, v0: int, parity: str, params: ProcessParams, t: float):
    """Joint density P{max in d beta, N(t) of given parity | V(0) = v0 c} / d beta."""
    v0, parity = _direction(v0), _parity(parity)
    lam, c = params.lam, params.c
    _, out, inside, b, root, eta, a, lt = _max_setup(beta, params, t)
    if v0 == 1 and parity == "even":
        vals = lt * _damped_bessel(1, eta, lt) / root
    elif v0 == 1:
        vals = lam / c * _damped_bessel(0, eta, lt)
    elif parity == "even":
        vals = lam * (a - b) / (c * root) * _damped_bessel(1, eta, lt)
    else:
        vals = (lt * _damped_bessel(0, eta, lt)
                - np.sqrt((a - b) / (a + b)) * _damped_bessel(1, eta, lt)) / (a + b)
    out[inside] = vals
    return _wrap(beta, out)


def max_parity_law_minus_odd_raw(beta, params: ProcessParams, t: float):
    """V(0) = -c, odd-parity joint density in its I1/I2 form (before the
    Bessel recurrence is used to eliminate I2)."""
    _, out, inside, b, root, eta, a, lt = _max_setup(beta, params, t)
    out[inside] = (_damped_bessel(1, eta, lt) / root
                   + lt * (a - b) / (root * root) * _damped_bessel(2, eta, lt))
    return _wrap(beta, out)


def max_parity_atoms(v0: int, parity: str, params: ProcessParams, t: float) -> list[Atom]:
    v0, parity = _direction(v0), _parity(parity)
    lt = params.lam * t
    if v0 == 1:
        return [Atom(params.c * t, math.exp(-lt))] if parity == "even" else []
    nu = 0 if parity == "even" else 1
    return [Atom(0.0, bessel_i_scaled(nu, lt))]


def max_law(beta, v0: int, params: ProcessParams, t: float):
    """Law of max_{s<=t} T(s) given V(0) = v0 c, as ``(density, atoms)``."""
    v0 = _direction(v0)
    if not t > 0:
        raise ValueError("t must be > 0")
    lam, c = params.lam, params.c
    _, out, inside, b, root, eta, a, lt = _max_setup(beta, params, t)
    if v0 == 1:
        out[inside] = (lam * _damped_bessel(0, eta, lt) + lam * a / root * _damped_bessel(1, eta, lt)) / c
        atoms = [Atom(a, math.exp(-lt))]
    else:
        s = np.sqrt((a - b) / (a + b))
        out[inside] = (lt / (a + b) * _damped_bessel(0, eta, lt)
                       + s * (lam / c - 1.0 / (a + b)) * _damped_bessel(1, eta, lt))
        atoms = [Atom(0.0, bessel_i_scaled(0, lt) + bessel_i_scaled(1, lt))]
    return _wrap(beta, out), atoms


def max_moment_unconditional(m: int, params: ProcessParams, t: float, v0: int = 1) -> float:
    """E[max^m | V(0) = +c] including the atom at c t.

    Only V(0) = +c has a closed form; use quadrature of :func:`max_law`
    for V(0) = -c.
    """
    if int(m) != m or m < 1:
        raise ValueError("moment order m must be a positive integer")
    if _direction(v0) != 1:
        raise ValueError("closed-form unconditional moments exist only for V(0) = +c")
    lt = params.lam * t
    a = params.c * t
    lo, hi = (m - 1) / 2.0, (m + 1) / 2.0
    return (a ** m * (2.0 / lt) ** lo * math.gamma(hi)
            * (bessel_i_scaled(lo, lt) + bessel_i_scaled(hi, lt)))
