"""Verification suites.

Each suite returns a list of :class:`CheckResult`; a suite passes when all
of its checks pass.  Suites: normalization, identities, recurrence,
mixture, moments, order_stats, mc, kac.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import ndtr
from scipy.stats import poisson

from .. import conditional as cond
from .. import unconditional as unc
from ..laws import LawSelector, resolve
from ..paths import ProcessParams, batch_conditional_times
from ..special import poisson_log_pmf
from .montecarlo import mc_verify
from .quadrature import quad
from .stats import chi_square, chi_square_critical, ks_critical, ks_statistic

PARAM_GRID = [(1.0, 1.0, 1.0), (2.0, 0.5, 3.0), (0.5, 2.0, 0.7)]
SUITES = ("normalization", "identities", "recurrence", "mixture", "moments",
          "order_stats", "mc", "kac")


@dataclass
class CheckResult:
    name: str
    observed: float
    tolerance: float
    passed: bool

    def line(self) -> str:
        flag = "PASS" if self.passed else "FAIL"
        return f"[{flag}] {self.name}: observed={self.observed:.3e} tol={self.tolerance:.1e}"


def _le(name, observed, tol):
    return CheckResult(name, float(observed), float(tol), bool(observed <= tol))


def _rel(a, b):
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    return float(np.max(np.abs(a - b) / np.maximum(np.abs(b), 1e-300)))


def poisson_cutoff(lam_t: float, tail: float = 1e-14) -> int:
    """Smallest N with P{Poisson(lam_t) > N} < tail."""
    return max(int(poisson.isf(tail, lam_t)) + 1, 1)


# --- oracles ------------------------------------------------------------------

def mixture_max_density(beta, v0: int, parity: str | None, params: ProcessParams, t: float,
                        n_max: int | None = None):
    """Poisson mixture of the conditional max densities (truncated series)."""
    lt = params.lam * t
    n_max = poisson_cutoff(lt) if n_max is None else n_max
    total = np.zeros(np.shape(beta))
    for n in range(0, n_max + 1):
        if parity == "even" and n % 2 or parity == "odd" and n % 2 == 0:
            continue
        if n == 0:
            continue
        total = total + math.exp(poisson_log_pmf(n, lt)) * np.asarray(cond.max_density(beta, n, v0, params.c, t))
    return total


def mixture_position_density(x, v0: int | None, parity: str | None, params: ProcessParams, t: float,
                             n_max: int | None = None):
    lt = params.lam * t
    n_max = poisson_cutoff(lt) if n_max is None else n_max
    dirs = (v0,) if v0 is not None else (1, -1)
    total = np.zeros(np.shape(x))
    for n in range(1, n_max + 1):
        if parity == "even" and n % 2 or parity == "odd" and n % 2 == 0:
            continue
        w = math.exp(poisson_log_pmf(n, lt)) / len(dirs)
        for d in dirs:
            total = total + w * np.asarray(cond.position_density(x, n, d, params.c, t))
    return total


def mixture_max_atom(v0: int, parity: str | None, params: ProcessParams, t: float) -> float:
    lt = params.lam * t
    if v0 == 1:
        return math.exp(-lt) if parity in (None, "even") else 0.0
    total = 0.0
    for n in range(poisson_cutoff(lt) + 1):
        if parity == "even" and n % 2 or parity == "odd" and n % 2 == 0:
            continue
        total += math.exp(poisson_log_pmf(n, lt)) * cond.atom_at_zero(n)
    return total


def recurrence_residual(n: int, beta: float, v0: int = 1, c: float = 1.0, t: float = 1.0,
                        tol: float = 1e-11) -> float:
    """|right side of the first-two-reversals recurrence - max_density(beta, n, +1)|.

    Conditions on (T1, T2): either the level is reached after T2 (case 1),
    or it is reached at T1 = beta/c and the remaining path stays below it
    (case 2) or cannot return to it (case 3).
    """
    if v0 != 1:
        raise ValueError("the recurrence is stated for an upward start (v0=+1)")
    if n < 2:
        raise ValueError("recurrence needs n >= 2")
    a = c * t
    if not 0 < beta < a:
        raise ValueError("beta must lie in (0, c t)")
    log_head = math.lgamma(n + 1) - math.lgamma(n - 1) - n * math.log(t)

    def pair_density(t1, t2):
        # P{T1 in dt1, T2 in dt2 | N(t) = n}
        return np.exp(log_head + (n - 2) * np.log(np.maximum(t - t2, 1e-300))) if n > 2 else \
            np.full(np.shape(t2), math.exp(log_head))

    half_gap = (a - beta) / (2 * c)
    if n == 2:
        # no reversal after T2, so the maximum is the endpoint c(t - 2(t2 - t1)):
        # the level pins t2 = t1 + (ct - beta)/(2c), with Jacobian 1/(2c)
        case1 = quad(lambda t1: pair_density(t1, t1 + half_gap) / (2 * c), 0.0, beta / c, tol=tol).value
    else:
        def inner(t1):
            def g(t2):
                start = 2 * c * t1 - c * t2
                return np.array([cond.max_density(beta - s, n - 2, 1, c, t - u)
                                 for s, u in zip(start, t2)]) * pair_density(t1, t2)
            return quad(g, t1, t1 + half_gap, tol=tol).value

        case1 = quad(lambda t1s: np.array([inner(x) for x in t1s]), 0.0, beta / c, tol=tol).value

    t2_hi = (a + beta) / (2 * c)

    def stay_below(t2s):
        return np.array([cond.max_cdf(c * u - beta, n - 2, 1, c, t - u) for u in t2s]) \
            * pair_density(beta / c, t2s) / c

    case2 = quad(stay_below, beta / c, t2_hi, tol=tol).value
    case3 = quad(lambda u: pair_density(beta / c, u) / c, t2_hi, t, tol=tol).value
    return abs(case1 + case2 + case3 - cond.max_density(beta, n, 1, c, t))


def half_normal_cdf(beta, t: float = 1.0):
    return 2.0 * ndtr(np.asarray(beta, dtype=float) / math.sqrt(t)) - 1.0


def kac_check(c_values=(10.0, 30.0, 100.0), t: float = 1.0, grid_size: int = 801):
    """Sup-distance between the max CDF (lam = c^2) and the Brownian
    half-normal CDF, for both initial directions.  Returns rows
    ``(c, v0, distance)``."""
    rows = []
    hi = 8.0 * math.sqrt(t)
    for c in c_values:
        params = ProcessParams(c * c, c)
        grid = np.concatenate(([1e-12], np.linspace(0.0, min(hi, c * t), grid_size)[1:]))
        for v0 in (1, -1):
            # the bulk sits in [0, hi]; no need to tabulate out to ct
            law = resolve(LawSelector("max", v0), params, t,
                          table_range=(0.0, min(c * t, hi + 4.0 * math.sqrt(t))))
            dist = float(np.max(np.abs(law.cdf(grid) - half_normal_cdf(grid, t))))
            rows.append((c, v0, dist))
    return rows


# --- suites ---------------------------------------------------------------------

def suite_normalization(n_max: int = 60, grid=PARAM_GRID, tol: float = 1e-8):
    out = []
    for lam, c, t in grid:
        a = c * t
        worst = 0.0
        for v0 in (1, -1):
            for n in range(n_max + 1):
                atoms = sum(x.mass for x in cond.max_atoms(n, v0, c, t))
                if n == 0:
                    worst = max(worst, abs(atoms - 1))
                    continue
                mass = quad(lambda b: cond.max_density(b, n, v0, c, t), 0, a, tol=1e-12).value
                worst = max(worst, abs(mass + atoms - 1))
        out.append(_le(f"conditional max mass, n<={n_max}, (lam,c,t)=({lam},{c},{t})", worst, tol))
        worst = 0.0
        for v0 in (1, -1):
            for n in range(1, n_max + 1):
                mass = quad(lambda x: cond.position_density(x, n, v0, c, t), -a, a, tol=1e-12).value
                worst = max(worst, abs(mass - 1))
        out.append(_le(f"conditional position mass, n<={n_max}, (lam,c,t)=({lam},{c},{t})", worst, tol))
        params = ProcessParams(lam, c)
        worst = 0.0
        for v0 in (1, -1):
            atoms = unc.max_law(0.0, v0, params, t)[1]
            mass = quad(lambda b: unc.max_law(b, v0, params, t)[0], 0, a, tol=1e-12).value
            worst = max(worst, abs(mass + sum(x.mass for x in atoms) - 1))
        for v0 in (None, 1, -1):
            atoms = unc.position_law(0.0, params, t, v0)[1]
            mass = quad(lambda x: unc.position_law(x, params, t, v0)[0], -a, a, tol=1e-12).value
            worst = max(worst, abs(mass + sum(x.mass for x in atoms) - 1))
        out.append(_le(f"unconditional mass, (lam,c,t)=({lam},{c},{t})", worst, tol))
    out.append(_le("quadrature of density reproduces closed-form CDF, n<=20",
                   cdf_quadrature_gap(), 1e-7))
    return out


def cdf_quadrature_gap(n_max: int = 20, c: float = 1.0, t: float = 1.0, points: int = 10) -> float:
    """Largest gap between closed-form CDFs and atoms + integrated density."""
    a = c * t
    grid = np.linspace(0.05, 0.95, points) * a
    worst = 0.0
    for n in range(1, n_max + 1):
        for v0 in (1, -1):
            atoms = sum(x.mass for x in cond.max_atoms(n, v0, c, t))
            for b in grid:
                q = quad(lambda u: cond.max_density(u, n, v0, c, t), 0.0, b, tol=1e-12).value
                worst = max(worst, abs(atoms + q - cond.max_cdf(b, n, v0, c, t)))
                x = 2 * b - a
                q = quad(lambda u: cond.position_density(u, n, v0, c, t), -a, x, tol=1e-12).value
                worst = max(worst, abs(q - cond.position_cdf(x, n, v0, c, t)))
    return worst


def suite_identities(c: float = 1.0, t: float = 1.0, k_max: int = 40):
    a = c * t
    betas = np.linspace(0.02, 0.98, 25) * a
    out = []

    worst = 0.0
    for k in range(k_max + 1):
        lhs = cond.max_density(betas, 2 * k + 1, -1, c, t)
        w = (2 * k + 1) / (2 * k + 2)
        rhs = (w * cond.max_density(betas, 2 * k, -1, c, t)
               + (1 - w) * cond.max_density(betas, 2 * k + 1, 1, c, t))
        ok = rhs > 0
        worst = max(worst, _rel(lhs[ok], rhs[ok]))
    out.append(_le(f"weighted-sum identity (density), k<={k_max}", worst, 1e-12))

    worst = 0.0
    for k in range(k_max + 1):
        lhs = cond.atom_at_zero(2 * k + 1)
        worst = max(worst, _rel(lhs, (2 * k + 1) / (2 * k + 2) * cond.atom_at_zero(2 * k)))
        worst = max(worst, _rel(lhs, cond.atom_at_zero(2 * k + 2)))
    out.append(_le(f"atom relations, k<={k_max}", worst, 1e-12))

    worst = 0.0
    for k in range(k_max + 1):
        worst = max(worst, _rel(cond.max_density(betas, 2 * k + 2, 1, c, t),
                                cond.max_density(betas, 2 * k + 1, 1, c, t)))
    out.append(_le("even/odd equality, V(0)=+c", worst, 1e-12))

    worst = 0.0
    for k in range(1, k_max + 1):
        extra = math.comb(2 * k, k) * ((a * a - betas ** 2) / (2 * a) ** 2) ** k
        worst = max(worst, _rel(cond.max_cdf(betas, 2 * k, -1, c, t),
                                cond.max_cdf(betas, 2 * k - 1, 1, c, t) + extra))
    out.append(_le("CDF decomposition, V(0)=-c even", worst, 1e-12))

    worst = 0.0
    for k in range(0, 8):
        n = 2 * k + 1
        for b in betas[::3]:
            tail = quad(lambda x: cond.position_density(x, n, 1, c, t), b, a, tol=1e-13).value
            worst = max(worst, abs((1 - cond.max_cdf(b, n, 1, c, t)) - 2 * tail))
    out.append(_le("reflection principle P{max>b}=2P{T(t)>b}", worst, 1e-8))

    worst = 0.0
    for n in range(1, 21):
        for v0 in (1, -1):
            h = 1e-5 * a
            bs = np.linspace(0.05, 0.95, 20) * a
            # difference whichever side of the law is small, so the
            # difference quotient keeps its significant digits
            lo_side = cond.max_cdf(bs, n, v0, c, t) <= 0.5
            fd_cdf = (cond.max_cdf(bs + h, n, v0, c, t) - cond.max_cdf(bs - h, n, v0, c, t)) / (2 * h)
            fd_sf = (cond.max_sf(bs - h, n, v0, c, t) - cond.max_sf(bs + h, n, v0, c, t)) / (2 * h)
            fd = np.where(lo_side, fd_cdf, fd_sf)
            dens = cond.max_density(bs, n, v0, c, t)
            ok = dens > 1e-8
            worst = max(worst, _rel(fd[ok], dens[ok]))
    out.append(_le("CDF/density finite-difference consistency, n<=20", worst, 1e-6))

    worst_raw = worst_par = worst_rel = worst_pos = 0.0
    for lam, cc, tt in PARAM_GRID:
        params = ProcessParams(lam, cc)
        bs = np.linspace(0.02, 0.98, 25) * cc * tt
        raw = unc.max_parity_law_minus_odd_raw(bs, params, tt)
        simple = unc.max_parity_law(bs, -1, "odd", params, tt)
        worst_raw = max(worst_raw, _rel(simple, raw))
        for v0 in (1, -1):
            total = sum(unc.max_parity_law(bs, v0, p, params, tt) for p in ("even", "odd"))
            worst_par = max(worst_par, _rel(total, unc.max_law(bs, v0, params, tt)[0]))
        rhs = (cc * tt / (cc * tt + bs) * unc.max_parity_law(bs, 1, "odd", params, tt)
               - cc / (lam * (cc * tt + bs)) * unc.max_parity_law(bs, -1, "even", params, tt))
        worst_rel = max(worst_rel, _rel(simple, rhs))
        worst_pos = max(worst_pos, _rel(unc.max_law(bs, 1, params, tt)[0],
                                        2 * unc.position_law(bs, params, tt)[0]))
    out.append(_le("Bessel-recurrence simplification, V(0)=-c odd", worst_raw, 1e-12))
    out.append(_le("parity decomposition even+odd = unconditional", worst_par, 1e-12))
    out.append(_le("V(0)=-c odd as combination of +c odd and -c even", worst_rel, 1e-12))
    out.append(_le("max law V(0)=+c = 2 x position law", worst_pos, 1e-12))

    k = 10_000
    ratio = cond.atom_at_zero(2 * k) * math.sqrt(math.pi * k)
    out.append(_le("atom at 0 times sqrt(pi k) -> 1, k=1e4", abs(ratio - 1), 2e-3))
    return out


def suite_recurrence(ns=(2, 3, 4, 5), fractions=(0.25, 0.5, 0.75), c: float = 1.0, t: float = 1.0,
                     tol: float = 1e-6):
    return [_le(f"recurrence residual n={n}, beta={f}ct", recurrence_residual(n, f * c * t, c=c, t=t), tol)
            for n in ns for f in fractions]


def suite_mixture(lam_ts=(0.5, 1.0, 5.0), c: float = 1.0, tol: float = 1e-10):
    out = []
    for lt in lam_ts:
        t = 1.0
        params = ProcessParams(lt / t, c)
        bs = np.array([0.1, 0.3, 0.5, 0.7, 0.9]) * c * t
        xs = np.array([-0.9, -0.5, 0.0, 0.3, 0.8]) * c * t
        worst = 0.0
        for v0 in (1, -1):
            for p in ("even", "odd"):
                worst = max(worst, np.max(np.abs(unc.max_parity_law(bs, v0, p, params, t)
                                                 - mixture_max_density(bs, v0, p, params, t))))
                atom = sum(x.mass for x in unc.max_parity_atoms(v0, p, params, t))
                worst = max(worst, abs(atom - mixture_max_atom(v0, p, params, t)))
                worst = max(worst, np.max(np.abs(unc.position_parity_law(xs, v0, p, params, t)
                                                 - mixture_position_density(xs, v0, p, params, t))))
            worst = max(worst, np.max(np.abs(unc.max_law(bs, v0, params, t)[0]
                                             - mixture_max_density(bs, v0, None, params, t))))
            atom = sum(x.mass for x in unc.max_law(0.0, v0, params, t)[1])
            worst = max(worst, abs(atom - mixture_max_atom(v0, None, params, t)))
        for v0 in (None, 1, -1):
            worst = max(worst, np.max(np.abs(unc.position_law(xs, params, t, v0)[0]
                                             - mixture_position_density(xs, v0, None, params, t))))
        out.append(_le(f"Poisson-mixture consistency, lam t={lt}", worst, tol))
    return out


def suite_moments(n_max: int = 20, m_max: int = 6, c: float = 1.0, t: float = 1.0, tol: float = 1e-8):
    out = []
    worst = 0.0
    a = c * t
    for v0 in (1, -1):
        for n in range(0, n_max + 1):
            law = resolve(LawSelector("max", v0, n=n), ProcessParams(1.0, c), t)
            for m in range(1, m_max + 1):
                direct = sum(x.location ** m * x.mass for x in law.atoms)
                if not law.is_atomic:
                    direct += quad(lambda b: b ** m * law.density(b), 0, a, tol=1e-14, rtol=1e-13).value
                worst = max(worst, _rel(cond.max_moment(m, n, v0, c, t), direct))
    out.append(_le(f"conditional moments vs quadrature, m<={m_max}, n<={n_max}", worst, tol))

    worst = 0.0
    for lam, cc, tt in PARAM_GRID:
        params = ProcessParams(lam, cc)
        law = resolve(LawSelector("max", 1), params, tt)
        for m in range(1, m_max + 1):
            direct = (cc * tt) ** m * math.exp(-lam * tt) + quad(
                lambda b: b ** m * law.density(b), 0, cc * tt, tol=1e-14, rtol=1e-13).value
            worst = max(worst, _rel(unc.max_moment_unconditional(m, params, tt), direct))
    out.append(_le(f"unconditional V(0)=+c moments vs quadrature, m<={m_max}", worst, tol))

    worst = max(_rel(cond.max_moment(2, 2 * k + 1, 1, c, t), a * a / (2 * k + 3)) for k in range(21))
    out.append(_le("E[max^2 | +c, 2k+1] = (ct)^2/(2k+3), k<=20", worst, 1e-12))

    means = [cond.max_moment(1, 2 * k, -1, c, t) for k in range(1, 51)]
    argmax = int(np.argmax(means)) + 1
    out.append(CheckResult("E[max | -c, 2k] maximal at k=2", argmax, 2, argmax == 2))
    return out


def suite_order_stats(n_samples: int = 100_000, seed: int = 20240601, t: float = 2.0, alpha: float = 0.01):
    rng = np.random.default_rng(seed)
    out = []
    for n in (2, 5, 10):
        times = batch_conditional_times(rng, n_samples, n, t)
        full = np.concatenate([np.zeros((n_samples, 1)), times], axis=1)
        crit = ks_critical(n_samples, alpha)
        # families of m KS tests are held at family-wise level alpha (Bonferroni)
        crit_n = ks_critical(n_samples, alpha / n)
        crit_gap = ks_critical(n_samples, alpha / max(n - 1, 1))
        worst = 0.0
        for k in range(n):
            inc = np.sort(full[:, k + 1] - full[:, k])
            worst = max(worst, ks_statistic(inc, lambda w: cond.order_stat_increment_cdf(w, n, 1, t)))
        out.append(CheckResult(f"spacing law n={n} (all k)", worst, crit_n, worst < crit_n))
        worst = 0.0
        for gap in range(1, n):
            inc = np.sort(times[:, gap] - times[:, 0])
            worst = max(worst, ks_statistic(inc, lambda w: cond.order_stat_increment_cdf(w, n, gap, t)))
        out.append(CheckResult(f"gap law n={n} (T_(1+g)-T_(1))", worst, crit_gap, worst < crit_gap))
        worst = 0.0
        for r in range(1, n + 1):
            worst = max(worst, ks_statistic(np.sort(times[:, r - 1]),
                                            lambda z: cond.order_stat_cdf(z / t, r, n)))
        out.append(CheckResult(f"k-th arrival law n={n}", worst, crit_n, worst < crit_n))
        # plus-time equals the (n//2 + 1)-th order statistic in law
        edges = np.concatenate([np.zeros((n_samples, 1)), times, np.full((n_samples, 1), t)], axis=1)
        plus = np.sort(np.sum(np.diff(edges, axis=1)[:, ::2], axis=1))
        stat = ks_statistic(plus, lambda z: cond.order_stat_cdf(z / t, n // 2 + 1, n))
        out.append(CheckResult(f"plus-time law n={n}", stat, crit, stat < crit))

    # bivariate (T1, T2) | N(t) = 3 on a 10x10 grid
    n = 3
    times = batch_conditional_times(rng, n_samples, n, t)
    edges = np.linspace(0, t, 11)
    observed, _, _ = np.histogram2d(times[:, 0], times[:, 1], bins=[edges, edges])
    expected = np.zeros((10, 10))
    for i in range(10):
        for j in range(10):
            if edges[j + 1] <= edges[i]:
                continue
            lo_j = max(edges[j], edges[i])

            def inner(t1s, j=j):
                return np.array([quad(lambda t2: cond.bivariate_arrival_density(x, t2, 1, 2, n, t),
                                      max(edges[j], x), edges[j + 1], tol=1e-12).value
                                 if edges[j + 1] > max(edges[j], x) else 0.0 for x in t1s])
            expected[i, j] = quad(inner, edges[i], min(edges[i + 1], edges[j + 1]), tol=1e-12).value \
                if lo_j < edges[j + 1] else 0.0
    mask = expected > 0
    stat, dof = chi_square(observed[mask], n_samples * expected[mask])
    crit2 = chi_square_critical(dof, alpha)
    out.append(CheckResult(f"bivariate (T1,T2)|N=3 chi-square (dof={dof})", stat, crit2, stat < crit2))
    out.append(_le("bivariate cell probabilities sum to 1", abs(expected.sum() - 1), 1e-9))
    return out


def suite_mc(n_samples: int = 1_000_000, seed: int = 12345, workers: int = 1,
             params: ProcessParams = ProcessParams(1.0, 1.0), t: float = 1.0, z_max: float = 3.0):
    out = []
    regimes = [LawSelector("max", v0, n=n) for v0 in (1, -1) for n in range(1, 7)]
    regimes += [LawSelector("max", v0) for v0 in (1, -1)]
    for i, sel in enumerate(regimes):
        s = mc_verify(sel, params, t, n_samples, seed + i, workers)
        tag = f"v0={sel.v0:+d}, n={'none' if sel.n is None else sel.n}"
        out.append(CheckResult(f"MC KS {tag}", s.ks_statistic, s.ks_critical, s.ks_pass))
        for at in s.atom_freqs:
            out.append(CheckResult(f"MC atom at {at.location:g} {tag} (emp {at.empirical:.5f} vs {at.expected:.5f})",
                                   abs(at.z), z_max, abs(at.z) <= z_max))
        for mc in s.moments:
            z = abs(mc.empirical - mc.expected) / mc.std_error
            out.append(CheckResult(f"MC moment m={mc.order} {tag}", z, 4.0, z <= 4.0))
    return out


def suite_kac(c_values=(10.0, 30.0, 100.0), t: float = 1.0, bound: float = 0.02):
    rows = kac_check(c_values, t)
    out = []
    for v0 in (1, -1):
        d = [r[2] for r in rows if r[1] == v0]
        mono = all(x > y for x, y in zip(d, d[1:]))
        out.append(CheckResult(f"Kac distances v0={v0:+d} decrease over c={list(c_values)}: "
                               + ", ".join(f"{x:.4g}" for x in d), float(mono), 1.0, mono))
        out.append(_le(f"Kac distance at c={c_values[-1]}, v0={v0:+d}", d[-1], bound))
    return out


def run_suite(name: str, **kw) -> list[CheckResult]:
    fns = {
        "normalization": suite_normalization,
        "identities": suite_identities,
        "recurrence": suite_recurrence,
        "mixture": suite_mixture,
        "moments": suite_moments,
        "order_stats": suite_order_stats,
        "mc": suite_mc,
        "kac": suite_kac,
    }
    if name == "all":
        return [r for s in SUITES for r in run_suite(s, **kw.get(s, {}))]
    if name not in fns:
        raise ValueError(f"unknown suite {name!r}; choose from {SUITES + ('all',)}")
    return fns[name](**kw)
