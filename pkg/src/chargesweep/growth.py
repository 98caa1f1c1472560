"""Finite-sample estimates of order, type and the convergence-class integral.

The limsup functionals are read off a tail window of a log-spaced radius
grid: each estimator is the maximum of the corresponding ratio over the
window.  These are upper-envelope estimates on the sampled range, never
certified limits.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass

import numpy as np

from .errors import InsufficientSamplesError, ValidationError
from .measure import ChargeDistribution, radial_counting
from .quadrature import adaptive_quad

DEFAULT_PER_DECADE = 64
DEFAULT_TAIL_FRACTION = 0.5


def log_grid(start: float, stop: float, per_decade: int = DEFAULT_PER_DECADE) -> np.ndarray:
    """Log-spaced grid from ``start`` to ``stop`` inclusive."""
    if not 0 < start < stop:
        raise ValidationError("log grid needs 0 < start < stop", start=start, stop=stop)
    n = max(int(round(per_decade * math.log10(stop / start))), 1)
    return start * (stop / start) ** (np.arange(n + 1) / n)


@dataclass(frozen=True)
class RadialProfile:
    radii: np.ndarray
    values: np.ndarray

    def __post_init__(self):
        r = np.asarray(self.radii, dtype=float)
        v = np.asarray(self.values, dtype=float)
        if r.ndim != 1 or r.shape != v.shape:
            raise ValidationError("radii and values must be 1-d of equal length")
        if r.size and (np.any(r <= 0) or np.any(np.diff(r) <= 0)):
            raise ValidationError("radii must be positive and strictly increasing")
        object.__setattr__(self, "radii", r)
        object.__setattr__(self, "values", v)

    def tail(self, tail_fraction: float) -> slice:
        if not 0 < tail_fraction <= 1:
            raise ValidationError("tail_fraction must lie in (0, 1]", tail_fraction=tail_fraction)
        n = self.radii.size
        k = int(math.ceil(tail_fraction * n))
        return slice(n - k, n)


def profile_of(mu: ChargeDistribution, radii) -> RadialProfile:
    """Total-variation counting function ``|nu|(r closed disk)`` on ``radii``."""
    radii = np.asarray(radii, dtype=float)
    return RadialProfile(radii, np.atleast_1d(radial_counting(mu, 0j, radii, "total")))


def _tail(p: RadialProfile, tail_fraction: float, min_samples: int = 3):
    sl = p.tail(tail_fraction)
    r, v = p.radii[sl], p.values[sl]
    if r.size < min_samples:
        raise InsufficientSamplesError("too few tail samples", have=int(r.size), need=min_samples)
    return r, v


def order_estimate(p: RadialProfile, tail_fraction: float = DEFAULT_TAIL_FRACTION) -> float:
    """Max of ``ln(1 + m+(r)) / ln r`` over the tail window (``r > 1`` only)."""
    r, v = _tail(p, tail_fraction)
    keep = r > 1
    if np.count_nonzero(keep) < 3:
        raise InsufficientSamplesError("order needs at least 3 tail radii above 1")
    return float(np.max(np.log1p(np.maximum(v[keep], 0.0)) / np.log(r[keep])))


def type_estimate(p: RadialProfile, order_p: float = 1.0,
                  tail_fraction: float = DEFAULT_TAIL_FRACTION) -> float:
    """Max of ``m+(r) / r**order_p`` over the tail window."""
    if not order_p >= 0:
        raise ValidationError("order must be nonnegative", order_p=order_p)
    r, v = _tail(p, tail_fraction)
    return float(np.max(np.maximum(v, 0.0) / r**order_p))


def _power_integral(a, b, p):
    """Integral of ``t**-(p+1)`` over ``[a, b]``; ``b`` may be infinite for ``p > 0``."""
    if p == 0:
        return math.log(b / a)
    return (a ** -p - (0.0 if math.isinf(b) else b ** -p)) / p


def convergence_integral(mu: ChargeDistribution, p: int, r_min: float = 1.0,
                         r_max: float = math.inf) -> tuple[float, bool]:
    """``int_{r_min}^{r_max} |nu|^rad(t) / t**(p+1) dt`` and a divergence flag.

    For atomic measures the counting function is a step function and the
    integral is summed in closed form between atom radii, including the tail
    beyond the last atom when ``r_max`` is infinite.  Axis densities fall back
    to adaptive quadrature.  The flag is raised when the last decade
    ``[r_max/10, r_max]`` carries more than 1% of the total, or when the
    integral is infinite.
    """
    if not 1 <= r_min < r_max:
        raise ValidationError("need 1 <= r_min < r_max", r_min=r_min, r_max=r_max)
    if p < 0:
        raise ValidationError("p must be nonnegative", p=p)

    mods = np.concatenate([np.abs(mu.points), np.abs(mu.axis.atom_y)])
    ws = np.abs(np.concatenate([mu.weights, mu.axis.atom_w]))
    order = np.argsort(mods, kind="stable")
    mods, ws = mods[order], ws[order]
    cum = np.cumsum(ws)

    def atomic(lo, hi):
        if not lo < hi:
            return 0.0
        cuts = [lo] + [m for m in mods if lo < m < hi] + [hi]
        total = 0.0
        for a, b in zip(cuts[:-1], cuts[1:]):
            k = np.searchsorted(mods, a, side="right")
            level = float(cum[k - 1]) if k else 0.0
            if level == 0.0:
                continue
            if math.isinf(b) and p == 0:
                return math.inf
            total += level * _power_integral(a, b, p)
        return total

    def dens_part(lo, hi):
        dens = mu.axis.density
        if dens is None or not lo < hi:
            return 0.0
        f = lambda t: float(dens.abs_integral(-t, t)) / t ** (p + 1)  # noqa: E731
        return adaptive_quad(f, lo, hi)

    total = float(atomic(r_min, r_max) + dens_part(r_min, r_max))
    if math.isinf(total):
        return total, True
    if math.isinf(r_max):
        # closed-form tail: no truncation, hence no divergence suspicion
        return total, False
    last_lo = max(r_min, r_max / 10.0)
    last = atomic(last_lo, r_max) + dens_part(last_lo, r_max)
    return total, bool(total > 0 and last > 0.01 * total)


@dataclass(frozen=True)
class GrowthReport:
    order_estimate: float
    type_estimate: float
    p: float
    tail_window: tuple[float, float]
    convergence_integral: float
    diverging_flag: bool

    CSV_FIELDS = ("order_estimate", "type_estimate", "p", "tail_lo", "tail_hi",
                  "convergence_integral", "diverging_flag")

    def csv_row(self) -> dict:
        d = asdict(self)
        lo, hi = d.pop("tail_window")
        d["tail_lo"], d["tail_hi"] = lo, hi
        return {k: d[k] for k in self.CSV_FIELDS}


def growth_report(mu: ChargeDistribution, radii, p: float = 1.0,
                  tail_fraction: float = DEFAULT_TAIL_FRACTION, class_p: int = 2) -> GrowthReport:
    prof = profile_of(mu, radii)
    sl = prof.tail(tail_fraction)
    r = prof.radii[sl]
    r_lo = max(1.0, float(prof.radii[0]))
    integral, flag = convergence_integral(mu, class_p, r_lo, float(prof.radii[-1]))
    return GrowthReport(
        order_estimate(prof, tail_fraction),
        type_estimate(prof, p, tail_fraction),
        float(p),
        (float(r[0]), float(r[-1])),
        integral,
        flag,
    )
