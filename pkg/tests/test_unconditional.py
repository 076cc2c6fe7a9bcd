import math

import numpy as np
import pytest
from scipy import special as sp
from scipy import stats

from telegraph_max import conditional as cond
from telegraph_max import unconditional as unc
from telegraph_max.paths import ProcessParams
from telegraph_max.verification.quadrature import quad

UNIT = ProcessParams(1.0, 1.0)
GRID = [(1.0, 1.0, 1.0), (2.0, 0.5, 3.0), (0.5, 2.0, 0.7)]


def mixture(beta, v0, parity, lam, c, t, n_max=120):
    """Poisson mixture of the conditional max densities, built independently."""
    total = 0.0
    for n in range(1, n_max + 1):
        if parity is not None and (n % 2 == 0) != (parity == "even"):
            continue
        total += stats.poisson.pmf(n, lam * t) * cond.max_density(beta, n, v0, c, t)
    return total


def test_position_density_example():
    e = math.exp(-1.0)
    expected = e / 2 * (sp.i0(1.0) + sp.i1(1.0))
    dens, atoms = unc.position_law(0.0, UNIT, 1.0)
    assert dens == pytest.approx(expected, rel=1e-13)
    assert dens == pytest.approx(0.33689, abs=1e-4)  # rounded reference value
    assert atoms == [cond.Atom(-1.0, e / 2), cond.Atom(1.0, e / 2)]


def test_position_density_symmetric_and_zero_outside():
    p = ProcessParams(1.7, 0.6)
    x = np.linspace(-1.1, 1.1, 45)
    d = unc.position_law(x, p, 1.5)[0]
    np.testing.assert_allclose(d, d[::-1], rtol=1e-14)
    assert unc.position_law(0.9, p, 1.5)[0] == 0.0
    assert unc.position_law(-2.0, p, 1.5)[0] == 0.0


@pytest.mark.parametrize("lam,c,t", GRID)
def test_position_density_time_derivative_form(lam, c, t):
    # (e^{-lam t} / 2c) [lam I0(eta) + d/dt I0(eta)] with the derivative by finite differences
    def i0_of_time(s, x):
        return sp.i0((lam / c) * math.sqrt(c * c * s * s - x * x))

    h = 1e-6 * t
    for x in np.linspace(-0.9, 0.9, 7) * c * t:
        dt = (i0_of_time(t + h, x) - i0_of_time(t - h, x)) / (2 * h)
        ref = math.exp(-lam * t) / (2 * c) * (lam * i0_of_time(t, x) + dt)
        assert unc.position_law(x, ProcessParams(lam, c), t)[0] == pytest.approx(ref, rel=1e-7)


@pytest.mark.parametrize("lam,c,t", GRID)
def test_position_mass(lam, c, t):
    p = ProcessParams(lam, c)
    a = c * t
    for v0 in (None, 1, -1):
        dens = quad(lambda x: unc.position_law(x, p, t, v0)[0], -a, a, tol=1e-12).value
        atoms = sum(x.mass for x in unc.position_law(0.0, p, t, v0)[1])
        assert dens + atoms == pytest.approx(1.0, abs=1e-8)


@pytest.mark.parametrize("v0", [1, -1])
@pytest.mark.parametrize("parity", ["even", "odd"])
def test_parity_laws_are_poisson_mixtures(v0, parity):
    for b in (0.1, 0.5, 0.9):
        assert unc.max_parity_law(b, v0, parity, UNIT, 1.0) == pytest.approx(mixture(b, v0, parity, 1.0, 1.0, 1.0),
                                                                              abs=1e-10)


def test_parity_atoms_are_poisson_mixtures():
    lt = 1.3
    p = ProcessParams(lt, 1.0)
    even = sum(stats.poisson.pmf(n, lt) * cond.atom_at_zero(n) for n in range(0, 140, 2))
    odd = sum(stats.poisson.pmf(n, lt) * cond.atom_at_zero(n) for n in range(1, 140, 2))
    assert unc.max_parity_atoms(-1, "even", p, 1.0)[0].mass == pytest.approx(even, abs=1e-12)
    assert unc.max_parity_atoms(-1, "odd", p, 1.0)[0].mass == pytest.approx(odd, abs=1e-12)
    assert unc.max_parity_atoms(1, "even", p, 1.0) == [cond.Atom(1.0, math.exp(-lt))]
    assert unc.max_parity_atoms(1, "odd", p, 1.0) == []


def test_parity_probabilities():
    p = ProcessParams(0.8, 1.0)
    assert unc.parity_probability("even", p, 2.0) + unc.parity_probability("odd", p, 2.0) == pytest.approx(1.0)
    assert unc.parity_probability("even", p, 2.0) == pytest.approx(
        sum(stats.poisson.pmf(n, 1.6) for n in range(0, 80, 2)), rel=1e-13)


def test_downward_odd_identity():
    for lam, c, t in GRID:
        p = ProcessParams(lam, c)
        a = c * t
        for b in np.linspace(0.05, 0.95, 9) * a:
            rhs = (a / (a + b) * unc.max_parity_law(b, 1, "odd", p, t)
                   - c / (lam * (a + b)) * unc.max_parity_law(b, -1, "even", p, t))
            assert unc.max_parity_law(b, -1, "odd", p, t) == pytest.approx(rhs, rel=1e-12)
            raw = unc.max_parity_law_minus_odd_raw(b, p, t)
            assert raw == pytest.approx(unc.max_parity_law(b, -1, "odd", p, t), rel=1e-12)


def test_parity_decomposition():
    p = ProcessParams(2.2, 0.9)
    b = np.linspace(0.01, 1.7, 30)
    for v0 in (1, -1):
        total = unc.max_parity_law(b, v0, "even", p, 2.0) + unc.max_parity_law(b, v0, "odd", p, 2.0)
        np.testing.assert_allclose(total, unc.max_law(b, v0, p, 2.0)[0], rtol=1e-12)


def test_limits_at_upper_edge():
    lam, c, t = 1.5, 2.0, 1.0
    p = ProcessParams(lam, c)
    near = c * t * (1 - 1e-12)
    assert unc.max_parity_law(near, 1, "odd", p, t) == pytest.approx(lam * math.exp(-lam * t) / c, rel=1e-9)
    for v0 in (1, -1):
        for parity in ("even", "odd"):
            assert math.isfinite(unc.max_parity_law(near, v0, parity, p, t))


def test_upward_max_law_is_folded_position_law():
    for lam, c, t in GRID:
        p = ProcessParams(lam, c)
        b = np.linspace(0.01, 0.99, 25) * c * t
        np.testing.assert_allclose(unc.max_law(b, 1, p, t)[0], 2 * unc.position_law(b, p, t)[0], rtol=1e-12)
        assert unc.max_law(0.0, 1, p, t)[1] == [cond.Atom(c * t, math.exp(-lam * t))]


def test_downward_atom_example():
    atom = unc.max_law(0.3, -1, UNIT, 1.0)[1][0]
    assert atom.location == 0.0
    assert atom.mass == pytest.approx(math.exp(-1) * (sp.i0(1.0) + sp.i1(1.0)), rel=1e-13)
    assert atom.mass == pytest.approx(0.67366, abs=1e-4)  # rounded reference value


@pytest.mark.parametrize("lam,c,t", GRID)
@pytest.mark.parametrize("v0", [1, -1])
def test_max_mass(lam, c, t, v0):
    p = ProcessParams(lam, c)
    dens, atoms = unc.max_law(0.0, v0, p, t)
    mass = quad(lambda b: unc.max_law(b, v0, p, t)[0], 0.0, c * t, tol=1e-12).value
    assert mass + sum(x.mass for x in atoms) == pytest.approx(1.0, abs=1e-8)


@pytest.mark.parametrize("lt", [0.5, 1.0, 5.0])
def test_unconditional_density_is_mixture(lt):
    p = ProcessParams(lt, 1.0)
    for v0 in (1, -1):
        for b in (0.1, 0.5, 0.9):
            assert unc.max_law(b, v0, p, 1.0)[0] == pytest.approx(mixture(b, v0, None, lt, 1.0, 1.0, 200), abs=1e-10)


def test_unconditional_mean_example():
    expected = math.exp(-1) * (sp.i0(1.0) + sp.i1(1.0))
    assert unc.max_moment_unconditional(1, UNIT, 1.0) == pytest.approx(expected, rel=1e-13)


@pytest.mark.parametrize("lam,c,t", GRID + [(4.0, 1.0, 2.5)])
def test_unconditional_moments_against_quadrature(lam, c, t):
    p = ProcessParams(lam, c)
    a = c * t
    for m in range(1, 7):
        q = quad(lambda b: b ** m * unc.max_law(b, 1, p, t)[0], 0.0, a, tol=1e-14, rtol=1e-13).value
        q += a ** m * math.exp(-lam * t)
        assert unc.max_moment_unconditional(m, p, t) == pytest.approx(q, rel=1e-8)


def test_unconditional_moment_errors():
    with pytest.raises(ValueError):
        unc.max_moment_unconditional(1, UNIT, 1.0, v0=-1)
    with pytest.raises(ValueError):
        unc.max_moment_unconditional(0, UNIT, 1.0)


def test_large_lambda_t_is_finite():
    # Kac-type scaling: lam = c^2 with c = 100
    p = ProcessParams(1.0e4, 100.0)
    b = np.linspace(0.0, 5.0, 51)
    for v0 in (1, -1):
        d, atoms = unc.max_law(b, v0, p, 1.0)
        assert np.all(np.isfinite(d)) and np.all(d >= 0)
        assert all(0 <= x.mass < 1e-1 for x in atoms)


def test_parity_validation():
    with pytest.raises(ValueError):
        unc.max_parity_law(0.3, 1, "both", UNIT, 1.0)
    with pytest.raises(ValueError):
        unc.max_parity_law(0.3, 0, "even", UNIT, 1.0)
