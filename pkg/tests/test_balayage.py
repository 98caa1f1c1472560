import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from chargesweep.balayage import (balayage_genus0, balayage_genus01, balayage_genus1,
                                  default_r0, density_on_grid, distribution_oracle,
                                  two_sided_balayage)
from chargesweep.errors import EligibilityError
from chargesweep.kernels import genus1_charge
from chargesweep.lindelof import axis_real_integrand
from chargesweep.measure import (ChargeDistribution, Region, axis_distribution, restrict,
                                 variation_mass)

Y = np.linspace(-25, 25, 1001)


def mu_of(*pairs, axis=()):
    return ChargeDistribution.from_atoms(pairs, axis)


def poisson(z, y):
    return z.real / (z.real**2 + (y - z.imag) ** 2) / math.pi


def test_single_atom_genus0():
    res = balayage_genus0(mu_of((1, 1)))
    assert np.allclose(density_on_grid(res, Y), 1 / (math.pi * (1 + Y**2)), rtol=1e-14, atol=0)
    assert variation_mass(res.result) == pytest.approx(1.0, abs=1e-12)
    assert res.source_mass_right == 1.0


def test_left_atom_untouched():
    mu = mu_of((-2, 5))
    res = balayage_genus0(mu)
    assert res.result == mu and res.axis.density is None


def test_variation_equality_single_negative():
    res = balayage_genus0(mu_of((3, -2)))
    assert variation_mass(res.result, mode="total") == pytest.approx(2.0, abs=1e-10)


def test_genus1_distribution_linear_decrease():
    res = balayage_genus1(mu_of((1, 1)))
    for T in (1.0, 3.0, 50.0):
        F = axis_distribution(res.result, [-T, T])
        expect = 2 * math.atan(T) / math.pi - 2 * T / math.pi
        assert F[1] - F[0] == pytest.approx(expect, abs=1e-12)
    F = axis_distribution(res.result, [-1.0, 1.0])
    assert F[1] - F[0] == pytest.approx(0.5 - 2 / math.pi, abs=1e-14)


def test_axis_atoms_pass_through():
    mu = mu_of(axis=[(2.0, 3.0)])
    for f in (balayage_genus0, balayage_genus1, balayage_genus01, two_sided_balayage):
        assert f(mu).result.axis.atoms == ((2.0, 3.0),)


def test_genus1_eligibility():
    with pytest.raises(EligibilityError):
        balayage_genus1(mu_of(axis=[(0.0, 1.0)]))
    with pytest.raises(EligibilityError):
        balayage_genus1(mu_of((1e-13, 1)))
    balayage_genus0(mu_of(axis=[(0.0, 1.0)]))


def test_genus01_composition():
    res = balayage_genus01(mu_of((0.5, 1), (4, 1)), r0=1.0)
    expect = poisson(0.5 + 0j, Y) + poisson(4 + 0j, Y) - 0.25 / math.pi
    assert np.allclose(density_on_grid(res, Y), expect, rtol=1e-13, atol=1e-15)
    inner = ChargeDistribution.from_atoms([(0.5, 1)])
    assert variation_mass(balayage_genus01(inner, 1.0).result) == pytest.approx(1.0, abs=1e-12)


def test_genus01_equals_genus1_away_from_origin():
    rng = np.random.default_rng(2)
    pts = 2 + rng.uniform(0, 10, 15) * np.exp(1j * rng.uniform(-1.4, 1.4, 15))
    mu = mu_of(*zip(pts, rng.normal(size=15)))
    a = density_on_grid(balayage_genus01(mu, 1.0), Y)
    b = density_on_grid(balayage_genus1(mu), Y)
    assert np.max(np.abs(a - b)) <= 1e-12


def test_default_r0():
    assert default_r0(mu_of((0.1, 1), (5, 1))) == pytest.approx(0.05)
    assert default_r0(mu_of((10, 1))) == 1.0
    assert default_r0(ChargeDistribution()) == 1.0
    assert balayage_genus01(ChargeDistribution()).result.is_empty


def test_two_sided_examples():
    one = mu_of((1, 1))
    assert np.array_equal(density_on_grid(two_sided_balayage(one), Y),
                          density_on_grid(balayage_genus01(one), Y))
    res = two_sided_balayage(mu_of((1, 1), (-1, 1)))
    d = density_on_grid(res, Y)
    assert np.allclose(d, 2 / math.pi * (1 / (1 + Y**2) - 1), rtol=1e-13)
    assert np.allclose(d, density_on_grid(res, -Y), rtol=0, atol=1e-15)
    assert not res.result.atoms


def test_mirror_symmetry():
    rng = np.random.default_rng(8)
    pts = rng.uniform(-5, 5, 12) + 1j * rng.uniform(-5, 5, 12)
    mu = mu_of(*zip(pts, rng.normal(size=12)))
    a = density_on_grid(two_sided_balayage(mu.conjugated(), 0.3), Y)
    b = density_on_grid(two_sided_balayage(mu, 0.3), -Y)
    assert np.max(np.abs(a - b)) <= 1e-12


def test_oracle_examples():
    assert distribution_oracle(mu_of((1, 1)), (-1, 1), 0) == pytest.approx(0.5, abs=1e-9)
    assert distribution_oracle(mu_of((2, 3)), (0, 2), 1) == pytest.approx(3 * genus1_charge(2 + 0j, (0, 2)),
                                                                          abs=1e-8)
    assert distribution_oracle(ChargeDistribution(), (0, 1), 0) == 0


right_atoms = st.lists(st.tuples(st.floats(0.05, 20), st.floats(-20, 20),
                                 st.floats(-3, 3).filter(lambda w: abs(w) > 1e-3)),
                       min_size=1, max_size=8)


def build(items):
    return ChargeDistribution.from_atoms([(complex(x, y), w) for x, y, w in items])


@settings(max_examples=60, deadline=None)
@given(right_atoms, st.floats(-30, 30), st.floats(0.1, 30))
def test_genus1_matches_oracle(items, y1, length):
    mu = build(items)
    F = axis_distribution(balayage_genus1(mu).result, [y1, y1 + length])
    assert F[1] - F[0] == pytest.approx(distribution_oracle(mu, (y1, y1 + length), 1), abs=1e-8)


@settings(max_examples=60, deadline=None)
@given(right_atoms, st.lists(st.tuples(st.floats(-9, -0.1), st.floats(-9, 9), st.floats(0.5, 2)),
                             max_size=3))
def test_variation_non_increase(items, left):
    mu = build(items) + build(left)
    tv = variation_mass(balayage_genus0(mu).result, mode="total")
    assert tv <= variation_mass(mu, mode="total") + 1e-10
    same = build([(x, y, abs(w)) for x, y, w in items])
    assert variation_mass(balayage_genus0(same).result, mode="total") == pytest.approx(
        variation_mass(same, mode="total"), abs=1e-9)


@settings(max_examples=60, deadline=None)
@given(st.floats(1e-3, 100), st.floats(-100, 100), st.floats(0.01, 10))
def test_mass_per_atom(x, y, w):
    res = balayage_genus0(build([(x, y, w)]))
    assert variation_mass(res.result) == pytest.approx(w, rel=1e-9)


@settings(max_examples=40, deadline=None)
@given(right_atoms, right_atoms, st.floats(-2, 2), st.floats(-2, 2))
def test_linearity(a_items, b_items, a, b):
    mu, nu = build(a_items), build(b_items)
    if not (a and b):
        return
    combo = mu.scaled(a) + nu.scaled(b)
    lhs = density_on_grid(balayage_genus1(combo), Y) if not combo.is_empty else np.zeros_like(Y)
    da, db = a * density_on_grid(balayage_genus1(mu), Y), b * density_on_grid(balayage_genus1(nu), Y)
    # merged coincident atoms reorder the sums; allow rounding relative to the parts
    assert np.max(np.abs(lhs - (da + db))) <= 1e-12 * (1 + np.max(np.abs(da) + np.abs(db)))


def test_left_fixedness():
    mu = mu_of((1 + 2j, 1), (-1 - 1j, 2), (-4, -3), axis=[(1.0, 1.0)])
    left = Region.named("left_open")
    for f in (balayage_genus0, balayage_genus1, balayage_genus01):
        assert restrict(f(mu).result, left) == restrict(mu, left)


def test_axis_real_part_vanishes_pointwise():
    y = np.concatenate([np.geomspace(1e-12, 1e12, 200), -np.geomspace(1e-12, 1e12, 200)])
    assert np.all(axis_real_integrand(y) == 0.0)
