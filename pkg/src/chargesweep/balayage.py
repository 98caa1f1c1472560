"""Balayage (sweeping out) of charge distributions from the right half-plane.

Each atom ``(z, w)`` with ``Re z > 0`` is replaced by the axis density
``w * kernel_density(z, ., genus)``; atoms in the open left half-plane and all
mass already on the imaginary axis stay where they are.  Output densities are
kept symbolically as :class:`~chargesweep.density.KernelSum` terms, so their
distribution functions are exact arctangent expressions (minus a linear term
for genus 1) at any ``y``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .density import KernelSum, KernelTerm
from .errors import EligibilityError, ValidationError
from .kernels import as_interval, quadrature_oracle
from .measure import AxisCharge, ChargeDistribution

# numerical stand-in for "0 not in supp nu"
ORIGIN_TOL = 1e-12


@dataclass(frozen=True)
class BalayageResult:
    result: ChargeDistribution
    genus_used: str
    split_radius_r0: float | None
    source_mass_right: float

    @property
    def axis(self) -> AxisCharge:
        return self.result.axis


def _right_atoms(mu: ChargeDistribution):
    return [a for a in mu.atoms if a.location.real > 0]


def _sweep(mu: ChargeDistribution, genus_of, label: str, r0=None) -> BalayageResult:
    right = _right_atoms(mu)
    terms = tuple(KernelTerm(a.location, a.weight, genus_of(a.location)) for a in right)
    left = [(a.location, a.weight) for a in mu.atoms if a.location.real < 0]
    dens = mu.axis.density
    if terms:
        swept = KernelSum(terms)
        dens = swept if dens is None else dens + swept
    result = ChargeDistribution.from_atoms(left, mu.axis.atoms, dens)
    mass = float(sum(abs(a.weight) for a in right))
    return BalayageResult(result, label, r0, mass)


def _check_genus1(mu: ChargeDistribution, atoms=None):
    if mu.charges_origin():
        raise EligibilityError("genus-1 balayage needs 0 outside the support (axis atom at 0)")
    for a in atoms if atoms is not None else _right_atoms(mu):
        if abs(a.location) < ORIGIN_TOL:
            raise EligibilityError("right half-plane atom too close to the origin",
                                   z=str(a.location), threshold=ORIGIN_TOL)


def balayage_genus0(mu: ChargeDistribution) -> BalayageResult:
    """Classical balayage: right atoms replaced by their Poisson densities."""
    return _sweep(mu, lambda z: 0, "0")


def balayage_genus1(mu: ChargeDistribution) -> BalayageResult:
    """Genus-1 balayage; raises :class:`EligibilityError` if mu charges the origin."""
    _check_genus1(mu)
    return _sweep(mu, lambda z: 1, "1")


def default_r0(mu: ChargeDistribution) -> float:
    """Half the smallest right-atom modulus, clamped to ``[1e-6, 1]``."""
    mods = [abs(a.location) for a in _right_atoms(mu)]
    if not mods:
        return 1.0
    return min(max(0.5 * min(mods), 1e-6), 1.0)


def balayage_genus01(mu: ChargeDistribution, r0: float | None = None) -> BalayageResult:
    """Genus-0 sweep of the part in the open disk ``|z| < r0``, genus-1 of the rest.

    Built term by term, which equals the sum of the two balayages of the
    restrictions because balayage is linear and leaves the left half-plane
    and the axis fixed.
    """
    r0 = default_r0(mu) if r0 is None else float(r0)
    if not r0 > 0 or not math.isfinite(r0):
        raise ValidationError("split radius r0 must be positive and finite", r0=r0)
    outer = [a for a in _right_atoms(mu) if abs(a.location) >= r0]
    _check_genus1(ChargeDistribution(), outer)
    return _sweep(mu, lambda z: 0 if abs(z) < r0 else 1, "01", r0)


def two_sided_balayage(mu: ChargeDistribution, r0: float | None = None) -> BalayageResult:
    """Genus-01 sweep from the right, then the mirrored sweep from the left.

    The result is supported on the imaginary axis.  The left sweep reflects
    ``z -> -conj(z)``, which keeps the imaginary coordinate, so each left atom
    contributes the kernel density of its mirror point.
    """
    if r0 is None:
        mods = [abs(a.location) for a in mu.atoms]
        r0 = min(max(0.5 * min(mods), 1e-6), 1.0) if mods else 1.0
    first = balayage_genus01(mu, r0)
    second = balayage_genus01(first.result.mirrored(), r0)
    return BalayageResult(second.result, "two-sided", r0,
                          first.source_mass_right + second.source_mass_right)


def distribution_oracle(mu: ChargeDistribution, iv, genus: int) -> float:
    """Swept mass of ``i(y1, y2]`` by per-atom adaptive quadrature.

    Independent of the closed forms used by the balayage constructors; covers
    only the right-half-plane atoms of ``mu``.
    """
    iv = as_interval(iv)
    total = 0.0
    for a in _right_atoms(mu):
        total += a.weight * quadrature_oracle(a.location, iv, genus)
    return total


def density_on_grid(res: BalayageResult, y) -> np.ndarray:
    return np.asarray(res.axis.density_at(np.asarray(y, dtype=float)), dtype=float)
