"""Telegraph-process sample paths.

A path is stored as its initial direction, horizon, speed and the sorted
absolute reversal times.  Single-path samplers return :class:`SamplePath`;
the ``batch_*`` helpers work on padded ``(n_paths, width)`` time matrices
for Monte Carlo work.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np


@dataclass(frozen=True)
class ProcessParams:
    lam: float
    c: float

    def __post_init__(self):
        for name in ("lam", "c"):
            v = getattr(self, name)
            if not (math.isfinite(v) and v > 0):
                raise ValueError(f"{name} must be finite and > 0, got {v!r}")


def _check_direction(v0: int) -> int:
    if v0 not in (1, -1):
        raise ValueError(f"v0 must be +1 or -1, got {v0!r}")
    return int(v0)


@dataclass(frozen=True)
class SamplePath:
    v0: int
    horizon: float
    events: np.ndarray = field(repr=False)
    c: float = 1.0

    def __post_init__(self):
        _check_direction(self.v0)
        ev = np.asarray(self.events, dtype=float)
        if ev.ndim != 1:
            raise ValueError("events must be one-dimensional")
        if ev.size and (ev[0] <= 0 or ev[-1] >= self.horizon or np.any(np.diff(ev) < 0)):
            raise ValueError("events must be sorted and strictly inside (0, horizon)")
        ev.setflags(write=False)
        object.__setattr__(self, "events", ev)

    @property
    def n_events(self) -> int:
        return int(self.events.size)

    def _vertices(self):
        times = np.concatenate(([0.0], self.events, [self.horizon]))
        signs = self.v0 * np.where(np.arange(times.size - 1) % 2 == 0, 1.0, -1.0)
        pos = np.concatenate(([0.0], np.cumsum(signs * np.diff(times)) * self.c))
        return times, pos, signs

    def position(self, s: float) -> float:
        if not 0.0 <= s <= self.horizon:
            raise ValueError(f"s={s!r} outside [0, {self.horizon}]")
        times, pos, signs = self._vertices()
        # left segment at an event time; the path is continuous there
        i = max(int(np.searchsorted(times, s, side="left")) - 1, 0)
        return float(pos[i] + self.c * signs[i] * (s - times[i]))

    def running_max(self) -> float:
        # the maximum of a piecewise-linear path sits on a vertex
        return float(np.max(self._vertices()[1]))

    def plus_time(self) -> float:
        """Time spent moving in the direction of v0."""
        times = np.concatenate(([0.0], self.events, [self.horizon]))
        return float(np.sum(np.diff(times)[::2]))


def sample_path(params: ProcessParams, t: float, v0: int, rng: np.random.Generator) -> SamplePath:
    """Path with Poisson(lam) reversals built from exponential gaps."""
    if not t > 0:
        raise ValueError("t must be > 0")
    _check_direction(v0)
    events = []
    s = rng.exponential(1.0 / params.lam)
    while s < t:
        events.append(s)
        s += rng.exponential(1.0 / params.lam)
    return SamplePath(v0, t, np.array(events), params.c)


def sample_path_conditional(n: int, t: float, v0: int, rng: np.random.Generator, c: float = 1.0) -> SamplePath:
    """Path conditioned on exactly ``n`` reversals (uniform order statistics)."""
    if n < 0:
        raise ValueError("n must be >= 0")
    if not t > 0:
        raise ValueError("t must be > 0")
    _check_direction(v0)
    u = rng.uniform(0.0, t, size=n)
    while np.any(u == 0.0):  # uniform() is half-open at 0
        u[u == 0.0] = rng.uniform(0.0, t, size=int(np.sum(u == 0.0)))
    return SamplePath(v0, t, np.sort(u), c)


# --- batch helpers ---------------------------------------------------------

def batch_poisson_times(rng: np.random.Generator, size: int, lam: float, t: float):
    """Reversal times of ``size`` independent paths.

    Returns ``(times, counts)`` with ``times`` of shape (size, width), sorted
    per row and padded with ``t`` past the last real event.
    """
    mean = lam * t
    width = int(math.ceil(mean + 8.0 * math.sqrt(mean) + 8))
    arrivals = np.cumsum(rng.exponential(1.0 / lam, size=(size, width)), axis=1)
    while True:
        short = arrivals[:, -1] < t
        if not np.any(short):
            break
        extra = arrivals[:, -1:] + np.cumsum(rng.exponential(1.0 / lam, size=(size, width)), axis=1)
        # rows that already passed t keep padding values >= t
        arrivals = np.concatenate([arrivals, np.where(short[:, None], extra, t)], axis=1)
    counts = np.sum(arrivals < t, axis=1)
    return np.minimum(arrivals, t), counts


def batch_conditional_times(rng: np.random.Generator, size: int, n: int, t: float) -> np.ndarray:
    return np.sort(rng.uniform(0.0, t, size=(size, n)), axis=1)


def _batch_vertices(times: np.ndarray, v0: int, c: float, t: float) -> np.ndarray:
    size = times.shape[0]
    full = np.concatenate([np.zeros((size, 1)), times, np.full((size, 1), t)], axis=1)
    signs = v0 * np.where(np.arange(full.shape[1] - 1) % 2 == 0, 1.0, -1.0)
    return c * np.cumsum(np.diff(full, axis=1) * signs, axis=1)


def batch_running_max(times: np.ndarray, v0: int, c: float, t: float) -> np.ndarray:
    """Running maximum over [0, t]; the start point 0 is always a candidate."""
    return np.maximum(_batch_vertices(times, v0, c, t).max(axis=1), 0.0)


def batch_position(times: np.ndarray, v0: int, c: float, t: float) -> np.ndarray:
    return _batch_vertices(times, v0, c, t)[:, -1]
