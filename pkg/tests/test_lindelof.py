import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from chargesweep.balayage import balayage_genus1
from chargesweep.errors import InsufficientSamplesError, ValidationError
from chargesweep.growth import log_grid
from chargesweep.lindelof import annulus_sums, boundedness_verdict, default_grid, lindelof_scan
from chargesweep.measure import ChargeDistribution


def test_symmetric_axis_pairs_cancel():
    mu = ChargeDistribution.from_atoms(axis_atoms=[(s * k, 1.0) for k in range(2, 51) for s in (1, -1)])
    rep = lindelof_scan(mu, "full")
    assert np.all(rep.partial_values == 0)


def test_harmonic_partial_sums():
    n = 10**4
    mu = ChargeDistribution.from_atoms([(complex(k), 1.0) for k in range(2, n + 1)])
    rep = lindelof_scan(mu, "re")
    k = np.arange(2, n + 1)
    expect = np.array([np.sum(1.0 / k[k <= r]) for r in rep.radii])
    assert np.allclose(rep.partial_values, expect, rtol=1e-12)
    assert rep.trend_slope == pytest.approx(1.0, abs=0.05)
    assert boundedness_verdict(rep, 0.1) is False


def test_left_measure_re_plus_zero():
    mu = ChargeDistribution.from_atoms([(complex(-k, k), 1.0) for k in range(1, 30)])
    assert np.all(lindelof_scan(mu, "re_plus").partial_values == 0)
    assert np.any(lindelof_scan(mu, "re").partial_values != 0)


def test_verdicts():
    assert boundedness_verdict(lindelof_scan(ChargeDistribution(), "full"), 0.1)
    # alternating +-1 contributions: partial sums oscillate between 0 and 1
    mu = ChargeDistribution.from_atoms([(complex(k), (-1) ** k * k) for k in range(2, 10**4)])
    rep = lindelof_scan(mu, "re")
    assert set(np.round(rep.partial_values, 9)) <= {0.0, 1.0}
    assert boundedness_verdict(rep, 0.1)


def test_verdict_needs_samples():
    rep = lindelof_scan(ChargeDistribution(), "re", [1.0, 2.0, 3.0])
    with pytest.raises(InsufficientSamplesError):
        boundedness_verdict(rep)


def test_annulus_convention():
    mu = ChargeDistribution.from_atoms([(1, 1.0), (3, 1.0)])
    rep = lindelof_scan(mu, "re", [1.0, 2.0, 3.0, 4.0])
    assert list(rep.partial_values) == [0, 0, 1 / 3, 1 / 3]


def test_bad_kind_and_grid():
    with pytest.raises(ValidationError):
        lindelof_scan(ChargeDistribution(), "imag")
    with pytest.raises(ValidationError):
        lindelof_scan(ChargeDistribution(), "re", [0.5, 2.0])
    assert lindelof_scan(ChargeDistribution(), "replus").kind == "re_plus"


def test_default_grid():
    g = default_grid()
    assert g[0] == 1 and g[-1] == pytest.approx(1e4) and g.size == 257


def test_axis_density_im_part_closed_form():
    # genus-1 sweep of one atom: compare the Im integral with quadrature
    from scipy import integrate

    res = balayage_genus1(ChargeDistribution.from_atoms([(2 + 1j, 1.0)]))
    dens = res.axis.density
    r = 7.5
    ref = sum(integrate.quad(lambda y: -dens(y) / y, a, b, epsabs=1e-13, limit=200)[0]
              for a, b in ((1, r), (-r, -1)))
    got = annulus_sums(res.result, "im", [r]).imag[0]
    assert got == pytest.approx(ref, abs=1e-11)
    assert annulus_sums(res.result, "re", [r]).real[0] == 0.0


planar = st.lists(st.tuples(st.floats(-50, 50), st.floats(-50, 50), st.floats(-3, 3)),
                  max_size=20).map(lambda xs: ChargeDistribution.from_atoms(
                      [(complex(a, b), w) for a, b, w in xs if w != 0 and complex(a, b) != 0]))


@settings(max_examples=100, deadline=None)
@given(planar)
def test_full_below_re_plus_im(mu):
    r = log_grid(1, 100, 16)
    full = lindelof_scan(mu, "full", r).partial_values
    re = lindelof_scan(mu, "re", r).partial_values
    im = lindelof_scan(mu, "im", r).partial_values
    assert np.all(full <= re + im + 1e-12)


@settings(max_examples=100, deadline=None)
@given(planar)
def test_re_plus_equals_re_on_right(mu):
    right = ChargeDistribution.from_atoms([(a.location, a.weight) for a in mu.atoms if a.location.real > 0])
    a = lindelof_scan(right, "re_plus").partial_values
    b = lindelof_scan(right, "re").partial_values
    assert np.array_equal(a, b)


@settings(max_examples=50, deadline=None)
@given(st.lists(st.tuples(st.floats(-80, 80), st.floats(-3, 3)), max_size=20))
def test_re_vanishes_on_axis_charges(items):
    mu = ChargeDistribution.from_atoms(axis_atoms=[(y, w) for y, w in items if w != 0])
    assert np.all(lindelof_scan(mu, "re").partial_values == 0)
    assert math.isfinite(lindelof_scan(mu, "im").sup_value)
