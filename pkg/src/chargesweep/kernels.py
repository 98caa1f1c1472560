"""Harmonic measure and genus-1 harmonic charge of the right half-plane.

Points are Python complex numbers ``z = x + iv``; intervals ``(y1, y2]`` lie on
the imaginary axis and are given by their imaginary coordinates.  The closed
arctangent forms are the production path, :func:`quadrature_oracle` integrates
the kernel densities numerically and exists only to cross-check them.
"""

from __future__ import annotations

import math
from typing import NamedTuple

import numpy as np

from .errors import DomainError, ValidationError
from .quadrature import adaptive_quad


class Interval(NamedTuple):
    """Interval ``i(y1, y2]`` of the imaginary axis (``y1 < y2``)."""

    y1: float
    y2: float


def as_interval(iv) -> Interval:
    y1, y2 = (float(t) for t in iv)
    if math.isnan(y1) or math.isnan(y2) or not y1 < y2:
        raise ValidationError("interval needs y1 < y2", y1=y1, y2=y2)
    return Interval(y1, y2)


def atan_diff(x, v, y1, y2):
    """``arctan((y2-v)/x) - arctan((y1-v)/x)`` for ``x > 0``, vectorized.

    Finite endpoints go through a single ``atan2`` so that far-away intervals
    keep their relative accuracy; infinite endpoints use the +-pi/2 limits.
    The result is oriented (negative when ``y2 < y1``).
    """
    x, v, y1, y2 = np.broadcast_arrays(*(np.asarray(t, dtype=float) for t in (x, v, y1, y2)))
    finite = np.isfinite(y1) & np.isfinite(y2)
    with np.errstate(over="ignore", invalid="ignore"):
        a = y1 - v
        b = y2 - v
        num = (b - a) * x
        den = x * x + a * b
        stable = np.arctan2(np.abs(num), den) * np.sign(num)
        plain = np.arctan(b / x) - np.arctan(a / x)
    out = np.where(finite, stable, plain)
    return out if out.ndim else float(out)


def _check_closed_right(z: complex) -> complex:
    z = complex(z)
    if not (math.isfinite(z.real) and math.isfinite(z.imag)):
        raise DomainError("point must be finite", z=str(z))
    if z.real < 0:
        raise DomainError("point lies in the open left half-plane", z=str(z))
    return z


def harmonic_measure(z: complex, iv) -> float:
    """Harmonic measure of ``i(y1, y2]`` seen from ``z`` with ``Re z >= 0``.

    For ``Re z > 0`` this is the visual angle of the interval divided by pi;
    on the imaginary axis it is the indicator of ``Im z`` in ``(y1, y2]``.
    """
    z = _check_closed_right(z)
    iv = as_interval(iv)
    if z.real == 0:
        return 1.0 if iv.y1 < z.imag <= iv.y2 else 0.0
    value = atan_diff(z.real, z.imag, iv.y1, iv.y2) / math.pi
    return min(max(value, 0.0), 1.0)


def genus1_charge(z: complex, iv) -> float:
    """Genus-1 harmonic charge: harmonic measure minus ``(y2-y1)/pi * Re(1/z)``.

    Defined on the closed right half-plane without the origin; may be negative.
    """
    z = _check_closed_right(z)
    if z == 0:
        raise DomainError("genus-1 charge is undefined at the origin", z=str(z))
    iv = as_interval(iv)
    omega = harmonic_measure(z, iv)
    if z.real == 0:
        return omega
    return omega - (iv.y2 - iv.y1) / math.pi * (1.0 / z).real


def kernel_density(z: complex, y, genus: int = 0):
    """Density in ``y`` of the genus-0 (Poisson) or genus-1 kernel at ``z``."""
    z = complex(z)
    if not z.real > 0:
        raise DomainError("kernel density needs Re z > 0", z=str(z))
    if genus not in (0, 1):
        raise ValidationError("genus must be 0 or 1", genus=genus)
    x, v = z.real, z.imag
    y = np.asarray(y, dtype=float)
    out = x / (math.pi * (x * x + (y - v) ** 2))
    if genus == 1:
        out = out - (1.0 / z).real / math.pi
    return out if out.ndim else float(out)


def quadrature_oracle(
    z: complex,
    iv,
    genus: int = 0,
    epsabs: float = 1e-13,
    epsrel: float = 1e-11,
    limit: int = 200,
) -> float:
    """Integrate :func:`kernel_density` over ``iv`` with adaptive Gauss-Kronrod.

    Raises :class:`~chargesweep.errors.QuadratureError`, carrying the achieved
    error estimate, when the subdivision cap or tolerance is not met.
    """
    z = complex(z)
    if not z.real > 0:
        raise DomainError("quadrature oracle needs Re z > 0", z=str(z))
    if genus not in (0, 1):
        raise ValidationError("genus must be 0 or 1", genus=genus)
    iv = as_interval(iv)
    x, v = z.real, z.imag
    shift = (1.0 / z).real / math.pi if genus == 1 else 0.0
    xx = x * x
    c = x / math.pi

    def f(y):
        d = y - v
        return c / (xx + d * d) - shift

    if not (math.isfinite(iv.y1) and math.isfinite(iv.y2)):
        raise ValidationError("quadrature oracle needs a bounded interval", y1=iv.y1, y2=iv.y2)
    # split at the kernel peak and at +-x around it, where curvature changes
    return adaptive_quad(f, iv.y1, iv.y2, points=(v - x, v, v + x),
                         epsabs=epsabs, epsrel=epsrel, limit=limit)
