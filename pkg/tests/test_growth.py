import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from chargesweep.errors import InsufficientSamplesError, ValidationError
from chargesweep.growth import (GrowthReport, RadialProfile, convergence_integral, growth_report,
                                log_grid, order_estimate, profile_of, type_estimate)
from chargesweep.measure import ChargeDistribution


def unit_atoms(n):
    return ChargeDistribution.from_atoms([(complex(k), 1.0) for k in range(1, n + 1)])


def test_profile_examples():
    assert list(profile_of(unit_atoms(100), [10, 50, 100]).values) == [10, 50, 100]
    assert np.all(profile_of(ChargeDistribution(), [1, 2, 3]).values == 0)
    one = ChargeDistribution.from_atoms([(2, -3)])
    assert list(profile_of(one, [1, 2]).values) == [0, 3]


def test_order_examples():
    r = log_grid(1, 1e4)
    assert order_estimate(RadialProfile(r, r)) == pytest.approx(1, abs=0.05)
    assert order_estimate(RadialProfile(r, r**2)) == pytest.approx(2, abs=0.05)
    wide = log_grid(1, 1e6)
    assert wide[wide.size // 2] == pytest.approx(1e3)
    assert order_estimate(RadialProfile(wide, np.full(wide.size, 5.0))) <= 0.3


def test_type_examples():
    r = log_grid(1, 1e4)
    assert type_estimate(RadialProfile(r, 3 * r), 1) == pytest.approx(3, abs=1e-12)
    wide = log_grid(1, 1e6)
    assert type_estimate(RadialProfile(wide, np.full(wide.size, 7.0)), 1) <= 0.007 + 1e-15
    assert type_estimate(RadialProfile(r, np.zeros(r.size)), 1) == 0


def test_too_few_samples():
    with pytest.raises(InsufficientSamplesError):
        order_estimate(RadialProfile([2.0, 3.0], [1.0, 1.0]))
    with pytest.raises(ValidationError):
        RadialProfile([2.0, 1.0], [1.0, 1.0])


def test_convergence_single_atom():
    mu = ChargeDistribution.from_atoms([(2, 1)])
    val, flag = convergence_integral(mu, 2)
    assert val == pytest.approx(1 / 8, abs=1e-12)
    assert flag is False
    assert convergence_integral(ChargeDistribution(), 2) == (0.0, False)


def test_convergence_piecewise_oracle():
    # step function integrated segment by segment by hand
    mu = ChargeDistribution.from_atoms([(3, 1), (-5j, -2), (1 + 1j, 0.5)])
    r1, r2, r3 = math.sqrt(2), 3.0, 5.0
    p = 1
    F = lambda a, b: 1 / a - 1 / b  # noqa: E731
    expect = 0.5 * F(r1, r2) + 1.5 * F(r2, r3) + 3.5 * F(r3, 40)
    val, _ = convergence_integral(mu, p, 1.0, 40.0)
    assert val == pytest.approx(expect, rel=1e-14)


def test_convergence_geometric_atoms():
    mu = ChargeDistribution.from_atoms([(2.0**k, 2.0**k) for k in range(1, 21)])
    val, flag = convergence_integral(mu, 2)
    assert flag is False and math.isfinite(val)
    val2, flag2 = convergence_integral(mu, 2, 1.0, 2.0**21)
    assert flag2 is False and val2 < val


def test_divergent_flag():
    mu = unit_atoms(10**4)
    _, flag = convergence_integral(mu, 1, 1.0, 1e4)
    assert flag is True
    val, flag = convergence_integral(ChargeDistribution.from_atoms([(2, 1)]), 0)
    assert math.isinf(val) and flag


def test_unit_integers():
    rep = growth_report(unit_atoms(10**4), log_grid(1, 1e4), p=1)
    assert 0.95 <= rep.type_estimate <= 1.05
    assert 0.9 <= rep.order_estimate <= 1.05
    assert rep.tail_window == pytest.approx((100, 1e4))
    row = rep.csv_row()
    assert list(row) == list(GrowthReport.CSV_FIELDS)


profiles = st.lists(st.floats(0, 1e6), min_size=8, max_size=40).map(
    lambda v: RadialProfile(np.geomspace(1, 1e4, len(v)), np.sort(v)))


@settings(max_examples=200, deadline=None)
@given(profiles, st.floats(0, 2), st.floats(0, 2))
def test_type_monotone_in_p(prof, p1, p2):
    lo, hi = min(p1, p2), max(p1, p2)
    assert type_estimate(prof, hi) <= type_estimate(prof, lo)


@settings(max_examples=100, deadline=None)
@given(st.lists(st.tuples(st.floats(-50, 50), st.floats(-50, 50), st.floats(0.1, 5)),
                min_size=1, max_size=15))
def test_scaling(items):
    items = [(complex(a, b), w) for a, b, w in items if complex(a, b) != 0]
    if not items:
        return
    grid = log_grid(1, 1e4)
    mu = ChargeDistribution.from_atoms(items)
    t = type_estimate(profile_of(mu, grid), 1)
    heavy = ChargeDistribution.from_atoms([(z, 2 * w) for z, w in items])
    assert type_estimate(profile_of(heavy, grid), 1) == 2 * t
    wide = ChargeDistribution.from_atoms([(2 * z, w) for z, w in items])
    assert type_estimate(profile_of(wide, 2 * grid), 1) == t / 2
    # finite-type detection
    C = max(np.max(profile_of(mu, grid).values / grid), 0.0)
    assert t <= C
