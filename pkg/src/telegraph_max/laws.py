"""Uniform access to every implemented law through a :class:`LawSelector`.

``resolve`` returns a :class:`MixedLaw`: a density on the open support plus
a finite atom list, with a strict CDF ``P{X < x}`` and moments.  Closed
forms are used where they exist; otherwise the CDF and the moments come
from adaptive quadrature of the density.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from . import conditional as cond
from . import unconditional as unc
from .conditional import Atom
from .paths import ProcessParams
from .verification.quadrature import QuadratureError, fixed_gauss_legendre, quad

QUANTITIES = ("position", "max")


@dataclass(frozen=True)
class LawSelector:
    quantity: str
    v0: Optional[int] = None
    n: Optional[int] = None
    parity: Optional[str] = None

    def __post_init__(self):
        if self.quantity not in QUANTITIES:
            raise ValueError(f"quantity must be one of {QUANTITIES}, got {self.quantity!r}")
        if self.v0 not in (None, 1, -1):
            raise ValueError("v0 must be +1, -1 or None")
        if self.quantity == "max" and self.v0 is None:
            raise ValueError("the running-maximum law needs an initial direction")
        if self.n is not None and self.parity is not None:
            raise ValueError("condition on an exact count or on a parity, not both")
        if self.n is not None and (int(self.n) != self.n or self.n < 0):
            raise ValueError("n must be a non-negative integer")
        if self.parity not in (None, "even", "odd"):
            raise ValueError("parity must be 'even' or 'odd'")
        if self.parity is not None and self.v0 is None:
            raise ValueError("parity conditioning needs an initial direction")

    @property
    def conditioning(self) -> str:
        if self.n is not None:
            return "exact_count"
        return "parity" if self.parity is not None else "none"

    def describe(self) -> dict:
        return {"quantity": self.quantity, "v0": self.v0, "n": self.n, "parity": self.parity}


class MixedLaw:
    """Density on ``support`` plus atoms.

    Without a closed-form ``cdf`` the CDF is tabulated by quadrature over
    ``table_range`` (default: the whole support).  A narrower range is
    useful when the mass is concentrated far from the upper support edge;
    queries above the range then see only the tabulated mass.
    """

    def __init__(self, density: Callable, atoms: list[Atom], support: tuple[float, float],
                 cdf: Callable | None = None, moment: Callable | None = None,
                 cdf_cells: int = 512, table_range: tuple[float, float] | None = None):
        self.density = density
        self.atoms = [a for a in atoms if a.mass > 0]
        self.support = support
        self._cdf = cdf
        self._moment = moment
        self._cells = cdf_cells
        self.table_range = support if table_range is None else table_range
        self._table = None

    @property
    def atom_mass(self) -> float:
        return float(sum(a.mass for a in self.atoms))

    @property
    def continuous_mass(self) -> float:
        return max(1.0 - self.atom_mass, 0.0)

    @property
    def closed_form_moments(self) -> bool:
        return self._moment is not None

    @property
    def is_atomic(self) -> bool:
        return self.continuous_mass < 1e-15

    def _atoms_below(self, x: np.ndarray) -> np.ndarray:
        out = np.zeros(x.shape)
        for a in self.atoms:
            out += np.where(x > a.location, a.mass, 0.0)
        return out

    def _build_table(self):
        lo, hi = self.table_range
        edges = np.linspace(lo, hi, self._cells + 1)
        pieces = [self._cell(e0, e1) for e0, e1 in zip(edges[:-1], edges[1:])]
        self._table = (edges, np.concatenate(([0.0], np.cumsum(pieces))))

    def _cell(self, e0: float, e1: float) -> float:
        try:
            return quad(self.density, e0, e1, tol=1e-13, rtol=1e-13).value
        except QuadratureError as exc:
            # stalled at the density's own roundoff level
            if exc.partial.error < 1e-11:
                return exc.partial.value
            raise

    def continuous_cdf_unnormalised(self, x) -> np.ndarray:
        """Integral of the density from the lower support edge to x."""
        x = np.asarray(x, dtype=float)
        lo, hi = self.table_range
        if self.is_atomic:
            return np.zeros(x.shape)
        if self._table is None:
            self._build_table()
        edges, cum = self._table
        xc = np.clip(x, lo, hi)
        idx = np.clip(np.searchsorted(edges, xc, side="right") - 1, 0, len(edges) - 2)
        flat_idx = idx.ravel()
        part = fixed_gauss_legendre(self.density, edges[flat_idx], xc.ravel(), order=12)
        return cum[idx] + part.reshape(x.shape)

    def cdf(self, x):
        """Strict CDF P{X < x}."""
        xa = np.asarray(x, dtype=float)
        if self._cdf is not None:
            out = np.asarray(self._cdf(xa), dtype=float)
        else:
            out = self.continuous_cdf_unnormalised(xa) + self._atoms_below(xa)
            out = np.clip(out, 0.0, 1.0)
        return float(out) if xa.ndim == 0 else out

    def continuous_cdf(self, x):
        """CDF of the law restricted to its continuous part, renormalised."""
        xa = np.asarray(x, dtype=float)
        mass = self.continuous_mass
        if mass <= 0:
            raise ValueError("law has no continuous part")
        if self._cdf is not None:
            out = (np.asarray(self._cdf(xa)) - self._atoms_below(xa)) / mass
        else:
            out = self.continuous_cdf_unnormalised(xa) / mass
        out = np.clip(out, 0.0, 1.0)
        return float(out) if xa.ndim == 0 else out

    def moment(self, m: int) -> float:
        if self._moment is not None:
            return float(self._moment(m))
        return quadrature_moment(self, m)


def quadrature_moment(law: MixedLaw, m: int, tol: float = 1e-13) -> float:
    lo, hi = law.support
    total = sum(a.location ** m * a.mass for a in law.atoms)
    if not law.is_atomic:
        total += quad(lambda x: x ** m * law.density(x), lo, hi, tol=tol, rtol=1e-13).value
    return float(total)


def _zero_density(x):
    return np.zeros(np.shape(x)) if np.ndim(x) else 0.0


def resolve(sel: LawSelector, params: ProcessParams, t: float, **law_kw) -> MixedLaw:
    """Build the law picked by ``sel``; ``law_kw`` is forwarded to MixedLaw
    for the quadrature-tabulated cases."""
    c = params.c
    a = c * t
    if sel.quantity == "max":
        v0 = sel.v0
        support = (0.0, a)
        if sel.n is not None:
            n = sel.n
            atomic = n == 0
            dens = _zero_density if atomic else (lambda b: cond.max_density(b, n, v0, c, t))
            return MixedLaw(dens, cond.max_atoms(n, v0, c, t), support,
                            cdf=lambda b: cond.max_cdf(b, n, v0, c, t),
                            moment=lambda m: cond.max_moment(m, n, v0, c, t))
        if sel.parity is not None:
            p = unc.parity_probability(sel.parity, params, t)
            atoms = [Atom(x.location, x.mass / p) for x in unc.max_parity_atoms(v0, sel.parity, params, t)]
            return MixedLaw(lambda b: unc.max_parity_law(b, v0, sel.parity, params, t) / p, atoms, support,
                        **law_kw)
        atoms = unc.max_law(0.0, v0, params, t)[1]
        moment = (lambda m: unc.max_moment_unconditional(m, params, t)) if v0 == 1 else None
        return MixedLaw(lambda b: unc.max_law(b, v0, params, t)[0], atoms, support, moment=moment,
                        **law_kw)

    support = (-a, a)
    v0 = sel.v0
    if sel.n is not None:
        n = sel.n
        dirs = (v0,) if v0 is not None else (1, -1)
        w = 1.0 / len(dirs)
        if n == 0:
            atoms = [Atom(d * a, w) for d in dirs]
            return MixedLaw(_zero_density, atoms, support,
                            cdf=lambda x: sum(w * cond.position_cdf(x, 0, d, c, t) for d in dirs))
        return MixedLaw(lambda x: sum(w * np.asarray(cond.position_density(x, n, d, c, t)) for d in dirs),
                        [], support,
                        cdf=lambda x: sum(w * np.asarray(cond.position_cdf(x, n, d, c, t)) for d in dirs))
    if sel.parity is not None:
        p = unc.parity_probability(sel.parity, params, t)
        atoms = [Atom(x.location, x.mass / p) for x in unc.position_parity_atoms(v0, sel.parity, params, t)]
        return MixedLaw(lambda x: unc.position_parity_law(x, v0, sel.parity, params, t) / p, atoms, support,
                        **law_kw)
    atoms = unc.position_law(0.0, params, t, v0)[1]
    return MixedLaw(lambda x: unc.position_law(x, params, t, v0)[0], atoms, support, **law_kw)

