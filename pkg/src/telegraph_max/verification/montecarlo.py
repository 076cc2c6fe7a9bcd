"""Monte Carlo simulation oracle with reproducible parallel substreams.

Worker ``i`` draws from ``SeedSequence(seed).spawn(workers)[i]``; results
are concatenated in worker order, so a run is a deterministic function of
``(seed, workers)``.
"""
from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field

import numpy as np

from ..laws import LawSelector, resolve
from ..paths import (ProcessParams, batch_conditional_times, batch_poisson_times,
                     batch_position, batch_running_max)
from .stats import binomial_z, ks_critical, ks_statistic

_CHUNK = 250_000


@dataclass
class AtomCheck:
    location: float
    empirical: float
    expected: float
    z: float


@dataclass
class MomentCheck:
    order: int
    empirical: float
    expected: float
    std_error: float


@dataclass
class MCSummary:
    n_samples: int
    seed: int
    workers: int
    regime: dict
    ks_statistic: float
    ks_critical: float
    alpha: float
    atom_freqs: list[AtomCheck] = field(default_factory=list)
    moments: list[MomentCheck] = field(default_factory=list)

    @property
    def ks_pass(self) -> bool:
        return self.ks_statistic < self.ks_critical

    def to_dict(self) -> dict:
        d = asdict(self)
        d["ks_pass"] = self.ks_pass
        return d


def _simulate_chunk(sel: LawSelector, params: ProcessParams, t: float, size: int,
                    rng: np.random.Generator):
    """Values of the selected quantity and, per path, the index of the atom
    it landed on (-1 for the continuous part)."""
    c = params.c
    if sel.v0 is None:
        v0s = np.where(rng.random(size) < 0.5, 1, -1)
    else:
        v0s = np.full(size, sel.v0)
    if sel.n is not None:
        times = batch_conditional_times(rng, size, sel.n, t)
        counts = np.full(size, sel.n)
    else:
        times, counts = batch_poisson_times(rng, size, params.lam, t)
    if sel.parity is not None:
        keep = counts % 2 == (0 if sel.parity == "even" else 1)
        times, counts, v0s = times[keep], counts[keep], v0s[keep]
    values = np.empty(times.shape[0])
    atom = np.full(times.shape[0], -1)
    for d in (1, -1):
        rows = v0s == d
        if not np.any(rows):
            continue
        if sel.quantity == "max":
            values[rows] = batch_running_max(times[rows], d, c, t)
        else:
            values[rows] = batch_position(times[rows], d, c, t)
    # atom membership from path structure, never from float equality of sums
    if sel.quantity == "max":
        if sel.v0 == -1:
            atom[values <= 0.0] = 0
        else:
            atom[counts == 0] = 0
    else:
        no_event = counts == 0
        atom[no_event & (v0s == 1)] = 1
        atom[no_event & (v0s == -1)] = 0
    return values, atom


def _atom_locations(sel: LawSelector, a: float) -> list[float]:
    if sel.quantity == "max":
        return [0.0] if sel.v0 == -1 else [a]
    return [-a, a]


def simulate(sel: LawSelector, params: ProcessParams, t: float, n_samples: int,
             seed: int, workers: int = 1):
    """Raw draws ``(values, atom_index)`` merged in worker order."""
    if workers < 1:
        raise ValueError("workers must be >= 1")
    children = np.random.SeedSequence(seed).spawn(workers)
    shares = [n_samples // workers + (1 if i < n_samples % workers else 0) for i in range(workers)]

    def run(i):
        rng = np.random.Generator(np.random.PCG64(children[i]))
        vals, atoms = [], []
        left = shares[i]
        while left > 0:
            m = min(left, _CHUNK)
            v, at = _simulate_chunk(sel, params, t, m, rng)
            vals.append(v)
            atoms.append(at)
            left -= m
        if not vals:
            return np.empty(0), np.empty(0, dtype=int)
        return np.concatenate(vals), np.concatenate(atoms)

    if workers == 1:
        parts = [run(0)]
    else:
        with ThreadPoolExecutor(max_workers=workers) as ex:
            parts = list(ex.map(run, range(workers)))
    return np.concatenate([p[0] for p in parts]), np.concatenate([p[1] for p in parts])


def mc_verify(sel: LawSelector, params: ProcessParams, t: float, n_samples: int, seed: int,
              workers: int = 1, alpha: float = 0.01, moment_orders=(1, 2)) -> MCSummary:
    if n_samples < 1000:
        raise ValueError("mc_verify needs at least 1000 samples")
    law = resolve(sel, params, t)
    values, atom_idx = simulate(sel, params, t, n_samples, seed, workers)
    total = values.size
    a = params.c * t

    expected_atoms = {round(x.location, 12): x.mass for x in law.atoms}
    atom_checks = []
    for i, loc in enumerate(_atom_locations(sel, a)):
        count = int(np.sum(atom_idx == i))
        p = expected_atoms.get(round(loc, 12), 0.0)
        if p == 0.0 and count == 0:
            continue
        atom_checks.append(AtomCheck(loc, count / total, p, binomial_z(count, total, p)))

    cont = np.sort(values[atom_idx < 0])
    if cont.size and law.continuous_mass > 0:
        ks = ks_statistic(cont, law.continuous_cdf)
        crit = ks_critical(cont.size, alpha)
    else:
        ks, crit = 0.0, math.inf

    moments = []
    for m in moment_orders:
        powered = values ** m
        moments.append(MomentCheck(m, float(np.mean(powered)), law.moment(m),
                                   float(np.std(powered, ddof=1) / math.sqrt(total))))
    return MCSummary(total, seed, workers, sel.describe(), ks, crit, alpha, atom_checks, moments)
