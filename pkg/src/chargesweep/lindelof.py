"""Lindelof-type functionals: annulus integrals of ``1/z`` against a charge.

For each radius ``r`` of a grid the scan integrates over ``inner < |z| <= r``
one of ``Re(1/z)``, ``Im(1/z)``, ``1/z`` (modulus of the complex result) or
``Re+(1/z)``.  Atoms are summed exactly.  On the imaginary axis
``1/(iy) = -i/y``, so ``Re`` and ``Re+`` vanish identically there and the
``Im`` part is ``-int density(y)/y dy``, taken in closed form.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InsufficientSamplesError, ValidationError
from .growth import log_grid
from .measure import ChargeDistribution

KINDS = ("re", "im", "full", "re_plus")
_ALIASES = {"replus": "re_plus", "re+": "re_plus"}


def normalize_kind(kind: str) -> str:
    kind = _ALIASES.get(kind, kind)
    if kind not in KINDS:
        raise ValidationError("unknown Lindelof kind", kind=kind)
    return kind


def default_grid(r_min: float = 1.0, r_max: float = 1e4, per_decade: int = 64) -> np.ndarray:
    return log_grid(r_min, r_max, per_decade)


@dataclass(frozen=True)
class LindelofReport:
    kind: str
    radii: np.ndarray
    partial_values: np.ndarray
    complex_partials: np.ndarray
    sup_value: float
    trend_slope: float
    inner: float = 1.0

    def tail(self, tail_fraction: float = 0.5):
        n = self.radii.size
        k = int(np.ceil(tail_fraction * n))
        return self.radii[n - k:], self.partial_values[n - k:]


def _kernel_values(z: np.ndarray, kind: str) -> np.ndarray:
    inv = 1.0 / z
    if kind == "re":
        return inv.real.astype(complex)
    if kind == "im":
        return (1j * inv.imag)
    if kind == "re_plus":
        return np.maximum(inv.real, 0.0).astype(complex)
    return inv


def axis_real_integrand(y) -> np.ndarray:
    """``Re(1/(iy))`` evaluated in floating point; identically zero."""
    y = np.asarray(y, dtype=float)
    return (1.0 / (1j * y)).real


def annulus_sums(mu: ChargeDistribution, kind: str, radii, inner: float = 1.0) -> np.ndarray:
    """Complex annulus integrals ``int_{inner<|z|<=r} f dnu`` for each ``r``.

    The value for ``kind='im'`` is returned as ``i * Im``-part so that real and
    imaginary parts line up with the ``full`` kind.
    """
    kind = normalize_kind(kind)
    radii = np.asarray(radii, dtype=float)
    out = np.zeros(radii.shape, dtype=complex)

    pts = np.concatenate([mu.points, 1j * mu.axis.atom_y])
    ws = np.concatenate([mu.weights, mu.axis.atom_w])
    # only atoms beyond the inner radius ever count; this also skips z = 0
    keep = np.abs(pts) > inner
    pts, ws = pts[keep], ws[keep]
    if pts.size:
        mods = np.abs(pts)
        order = np.argsort(mods, kind="stable")
        mods, vals = mods[order], (ws * _kernel_values(pts, kind))[order]
        cum = np.concatenate([[0.0], np.cumsum(vals)])
        out += cum[np.searchsorted(mods, radii, side="right")]

    dens = mu.axis.density
    if dens is not None and kind in ("im", "full"):
        r = np.maximum(radii, inner)
        # int_{inner<|y|<=r} (-1/y) f(y) dy
        axis_im = -(dens.inv_integral(np.full(r.shape, inner), r)
                    + dens.inv_integral(-r, np.full(r.shape, -inner)))
        out += 1j * np.asarray(axis_im)
    return out


def _partial(csum: np.ndarray, kind: str) -> np.ndarray:
    if kind == "re" or kind == "re_plus":
        return np.abs(csum.real)
    if kind == "im":
        return np.abs(csum.imag)
    return np.abs(csum)


def _slope(radii, values, tail_fraction=0.5):
    n = radii.size
    k = int(np.ceil(tail_fraction * n))
    if k < 2:
        return 0.0
    x = np.log(radii[n - k:])
    y = values[n - k:]
    x = x - x.mean()
    den = float(np.dot(x, x))
    return float(np.dot(x, y - y.mean()) / den) if den > 0 else 0.0


def lindelof_scan(mu: ChargeDistribution, kind: str = "full", radii=None,
                  inner: float = 1.0) -> LindelofReport:
    """Partial values ``|int_{inner<|z|<=r} f dnu|`` over the radius grid."""
    kind = normalize_kind(kind)
    radii = default_grid() if radii is None else np.asarray(radii, dtype=float)
    if radii.size == 0 or np.any(radii < inner) or np.any(np.diff(radii) <= 0):
        raise ValidationError("radii must be increasing and >= inner radius", inner=inner)
    csum = annulus_sums(mu, kind, radii, inner)
    partial = _partial(csum, kind)
    return LindelofReport(kind, radii, partial, csum, float(partial.max()),
                          _slope(radii, partial), float(inner))


def boundedness_verdict(rep: LindelofReport, slope_tol: float = 0.1) -> bool:
    """Evidence (not proof) of boundedness: tail trend slope within ``slope_tol``."""
    _, tail = rep.tail()
    if tail.size < 8:
        raise InsufficientSamplesError("boundedness verdict needs 8 tail samples", have=int(tail.size))
    return abs(rep.trend_slope) <= slope_tol
