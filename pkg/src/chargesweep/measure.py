"""Signed measures: finitely many planar atoms plus a charge on the imaginary axis."""

from __future__ import annotations

import json
import math
from collections import defaultdict
from dataclasses import dataclass, field
from typing import Iterable

import numpy as np

from .density import Box, Clipped, Density, DensitySum, KernelSum, Windowed
from .errors import ValidationError

INF = math.inf


def _finite(*vals) -> bool:
    return all(math.isfinite(v) for v in vals)


def _merge(pairs) -> tuple:
    """Sum weights at equal keys, drop zero totals, sort by key."""
    acc = defaultdict(float)
    order = []
    for key, w in pairs:
        if key not in acc:
            order.append(key)
        acc[key] += w
    return tuple((k, acc[k]) for k in sorted(order, key=_sort_key) if acc[k] != 0.0)


def _sort_key(k):
    if isinstance(k, complex):
        return (k.real, k.imag)
    return (k,)


@dataclass(frozen=True)
class Atom:
    location: complex
    weight: float


@dataclass(frozen=True)
class AxisCharge:
    """Charge carried by the imaginary axis.

    ``density`` is a closed-form :class:`~chargesweep.density.Density` in the
    imaginary coordinate (``None`` for no density); ``atoms`` are ``(y, w)``
    pairs, merged and sorted on construction.
    """

    density: Density | None = None
    atoms: tuple[tuple[float, float], ...] = ()

    def __post_init__(self):
        for y, w in self.atoms:
            if not _finite(y, w):
                raise ValidationError("axis atom must be finite", y=y, w=w)
        object.__setattr__(self, "atoms", _merge((float(y), float(w)) for y, w in self.atoms))

    @property
    def is_empty(self) -> bool:
        return self.density is None and not self.atoms

    @property
    def atom_y(self) -> np.ndarray:
        return np.array([y for y, _ in self.atoms], dtype=float)

    @property
    def atom_w(self) -> np.ndarray:
        return np.array([w for _, w in self.atoms], dtype=float)

    def __add__(self, other: "AxisCharge") -> "AxisCharge":
        if self.density is None:
            dens = other.density
        elif other.density is None:
            dens = self.density
        else:
            dens = DensitySum.of(self.density, other.density)
        return AxisCharge(dens, self.atoms + other.atoms)

    def scaled(self, factor: float) -> "AxisCharge":
        dens = None if self.density is None else self.density.scaled(factor)
        return AxisCharge(dens, tuple((y, w * factor) for y, w in self.atoms))

    def reflected(self) -> "AxisCharge":
        dens = None if self.density is None else self.density.reflected()
        return AxisCharge(dens, tuple((-y, w) for y, w in self.atoms))

    def density_at(self, y):
        if self.density is None:
            return np.zeros_like(np.asarray(y, dtype=float))
        return self.density(y)

    def density_mass(self, intervals, mode: str = "signed") -> float:
        """Density integrated over a union of intervals (endpoints irrelevant)."""
        if self.density is None:
            return 0.0
        total = 0.0
        for lo, hi in intervals:
            if mode == "signed":
                total += float(self.density.integral(lo, hi))
            else:
                total += float(self.density.abs_integral(lo, hi))
        return total


@dataclass(frozen=True)
class Region:
    """Measurable planar set of one of a few fixed shapes.

    Kinds: ``closed_disk``, ``open_disk`` (``center``, ``r``), ``annulus``
    (``r1 < |z| <= r2``), ``exterior`` (``|z| >= r``), ``right_open``,
    ``left_closed``, ``left_open``, ``sector`` (``Re z <= a|z|``),
    ``axis_interval`` (``i(y1, y2]``) and ``plane``.
    """

    kind: str
    center: complex = 0j
    r: float = 0.0
    r1: float = 0.0
    r2: float = 0.0
    a: float = 0.0
    y1: float = 0.0
    y2: float = 0.0

    KINDS = ("closed_disk", "open_disk", "annulus", "exterior", "right_open",
             "left_closed", "left_open", "sector", "axis_interval", "plane")

    def __post_init__(self):
        if self.kind not in self.KINDS:
            raise ValidationError("unknown region kind", kind=self.kind)
        if self.kind in ("closed_disk", "open_disk", "exterior") and not self.r >= 0:
            raise ValidationError("radius must be nonnegative", r=self.r)
        if self.kind == "annulus" and not 0 <= self.r1 < self.r2:
            raise ValidationError("annulus needs 0 <= r1 < r2", r1=self.r1, r2=self.r2)
        if self.kind == "sector" and not 0 < self.a < 1:
            raise ValidationError("sector parameter must lie in (0, 1)", a=self.a)
        if self.kind == "axis_interval" and not self.y1 < self.y2:
            raise ValidationError("axis interval needs y1 < y2", y1=self.y1, y2=self.y2)

    @classmethod
    def closed_disk(cls, center=0j, r=1.0):
        return cls("closed_disk", center=complex(center), r=float(r))

    @classmethod
    def open_disk(cls, center=0j, r=1.0):
        return cls("open_disk", center=complex(center), r=float(r))

    @classmethod
    def annulus(cls, r1, r2):
        return cls("annulus", r1=float(r1), r2=float(r2))

    @classmethod
    def exterior(cls, r):
        return cls("exterior", r=float(r))

    @classmethod
    def sector(cls, a):
        return cls("sector", a=float(a))

    @classmethod
    def axis_interval(cls, y1, y2):
        return cls("axis_interval", y1=float(y1), y2=float(y2))

    @classmethod
    def named(cls, kind):
        return cls(kind)

    def contains(self, z) -> np.ndarray:
        z = np.asarray(z, dtype=complex)
        k = self.kind
        if k == "closed_disk":
            return np.abs(z - self.center) <= self.r
        if k == "open_disk":
            return np.abs(z - self.center) < self.r
        if k == "annulus":
            m = np.abs(z)
            return (m > self.r1) & (m <= self.r2)
        if k == "exterior":
            return np.abs(z) >= self.r
        if k == "right_open":
            return z.real > 0
        if k == "left_closed":
            return z.real <= 0
        if k == "left_open":
            return z.real < 0
        if k == "sector":
            return z.real <= self.a * np.abs(z)
        if k == "axis_interval":
            return (z.real == 0) & (z.imag > self.y1) & (z.imag <= self.y2)
        return np.ones(z.shape, dtype=bool)

    def axis_intervals(self) -> list[tuple[float, float]]:
        """Region intersected with the imaginary axis, up to endpoints."""
        k = self.kind
        if k in ("closed_disk", "open_disk"):
            cx = self.center.real
            if self.r < abs(cx) or (k == "open_disk" and self.r == abs(cx)):
                return []
            h = math.sqrt(self.r * self.r - cx * cx)
            return [(self.center.imag - h, self.center.imag + h)] if h > 0 else []
        if k == "annulus":
            return [(-self.r2, -self.r1), (self.r1, self.r2)]
        if k == "exterior":
            return [(-INF, -self.r), (self.r, INF)] if self.r > 0 else [(-INF, INF)]
        if k in ("right_open", "left_open"):
            return []
        if k == "axis_interval":
            return [(self.y1, self.y2)]
        return [(-INF, INF)]


@dataclass(frozen=True)
class ChargeDistribution:
    """Finite set of planar atoms off the imaginary axis plus an :class:`AxisCharge`.

    Atoms with ``Re z == 0`` given to :meth:`from_atoms` are moved to the axis
    component.  Zero weights are rejected; atoms at equal locations are merged
    and zero totals dropped, so
    equal measures have equal atom tuples.  Instances are immutable.
    """

    atoms: tuple[Atom, ...] = ()
    axis: AxisCharge = field(default_factory=AxisCharge)
    origin_free: bool = False

    def __post_init__(self):
        for at in self.atoms:
            if at.location.real == 0:
                raise ValidationError("planar atoms must lie off the imaginary axis; use from_atoms",
                                      z=str(at.location))
        if self.origin_free and self.charges_origin():
            raise ValidationError("measure flagged origin-free charges the origin")

    @classmethod
    def from_atoms(cls, atoms: Iterable = (), axis_atoms: Iterable = (),
                   density: Density | None = None, origin_free: bool = False):
        planar, on_axis = [], list((float(y), float(w)) for y, w in axis_atoms)
        if any(w == 0.0 for _, w in on_axis):
            raise ValidationError("axis atoms must carry nonzero weight")
        for item in atoms:
            z, w = (item.location, item.weight) if isinstance(item, Atom) else item
            z, w = complex(z), float(w)
            if not _finite(z.real, z.imag, w):
                raise ValidationError("atom must be finite", z=str(z), w=w)
            if w == 0.0:
                raise ValidationError("atoms must carry nonzero weight", z=str(z))
            if z.real == 0:
                on_axis.append((z.imag, w))
            else:
                planar.append((z, w))
        merged = tuple(Atom(z, w) for z, w in _merge(planar))
        return cls(merged, AxisCharge(density, tuple(on_axis)), origin_free)

    @classmethod
    def empty(cls):
        return cls()

    # array views
    @property
    def points(self) -> np.ndarray:
        return np.array([a.location for a in self.atoms], dtype=complex)

    @property
    def weights(self) -> np.ndarray:
        return np.array([a.weight for a in self.atoms], dtype=float)

    @property
    def is_empty(self) -> bool:
        return not self.atoms and self.axis.is_empty

    def charges_origin(self) -> bool:
        return any(y == 0 for y, _ in self.axis.atoms)

    def __add__(self, other: "ChargeDistribution") -> "ChargeDistribution":
        return ChargeDistribution.from_atoms(
            [(a.location, a.weight) for a in self.atoms + other.atoms],
            self.axis.atoms + other.axis.atoms,
            (self.axis + other.axis).density,
        )

    def scaled(self, factor: float) -> "ChargeDistribution":
        if factor == 0:
            return ChargeDistribution()
        ax = self.axis.scaled(factor)
        return ChargeDistribution.from_atoms([(a.location, a.weight * factor) for a in self.atoms],
                                             ax.atoms, ax.density)

    def conjugated(self) -> "ChargeDistribution":
        """Image under ``z -> conj(z)`` (reflection in the real axis)."""
        ax = self.axis.reflected()
        return ChargeDistribution.from_atoms([(a.location.conjugate(), a.weight) for a in self.atoms],
                                             ax.atoms, ax.density)

    def mirrored(self) -> "ChargeDistribution":
        """Image under ``z -> -conj(z)`` (reflection in the imaginary axis)."""
        return ChargeDistribution.from_atoms([(-a.location.conjugate(), a.weight) for a in self.atoms],
                                             self.axis.atoms, self.axis.density)

    # serialization
    def to_dict(self) -> dict:
        if self.axis.density is not None:
            raise ValidationError("axis densities have no file representation")
        out = {
            "atoms": [{"re": a.location.real, "im": a.location.imag, "w": a.weight} for a in self.atoms],
            "axis_atoms": [{"y": y, "w": w} for y, w in self.axis.atoms],
        }
        if self.origin_free:
            out["origin_free"] = True
        return out

    @classmethod
    def from_dict(cls, data: dict) -> "ChargeDistribution":
        if not isinstance(data, dict):
            raise ValidationError("measure file must hold a JSON object")
        unknown = set(data) - {"atoms", "axis_atoms", "origin_free"}
        if unknown:
            raise ValidationError("unknown keys in measure file", keys=sorted(unknown))
        try:
            atoms = [(complex(float(a["re"]), float(a["im"])), float(a["w"])) for a in data.get("atoms", [])]
            axis = [(float(a["y"]), float(a["w"])) for a in data.get("axis_atoms", [])]
        except (KeyError, TypeError, ValueError) as exc:
            raise ValidationError(f"malformed atom entry: {exc}") from exc
        for z, w in atoms:
            if not _finite(z.real, z.imag, w):
                raise ValidationError("non-finite atom", re=z.real, im=z.imag, w=w)
        for y, w in axis:
            if not _finite(y, w):
                raise ValidationError("non-finite axis atom", y=y, w=w)
        return cls.from_atoms(atoms, axis, origin_free=bool(data.get("origin_free", False)))

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=1, sort_keys=True) + "\n"

    @classmethod
    def load(cls, path) -> "ChargeDistribution":
        try:
            with open(path) as fh:
                data = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ValidationError(f"invalid JSON: {exc}", path=str(path)) from exc
        return cls.from_dict(data)


def jordan_parts(mu: ChargeDistribution) -> tuple[ChargeDistribution, ChargeDistribution]:
    """Upper and lower variations ``(nu+, nu-)``, both nonnegative, ``nu = nu+ - nu-``."""
    pos = [(a.location, a.weight) for a in mu.atoms if a.weight > 0]
    neg = [(a.location, -a.weight) for a in mu.atoms if a.weight < 0]
    ax = mu.axis
    pos_ax = [(y, w) for y, w in ax.atoms if w > 0]
    neg_ax = [(y, -w) for y, w in ax.atoms if w < 0]
    dp = dn = None
    if ax.density is not None:
        dp, dn = Clipped(ax.density, 1), Clipped(ax.density, -1)
    return (ChargeDistribution.from_atoms(pos, pos_ax, dp),
            ChargeDistribution.from_atoms(neg, neg_ax, dn))


def restrict(mu: ChargeDistribution, region: Region) -> ChargeDistribution:
    """Restriction of ``mu`` to ``region``; retained masses are unchanged."""
    keep = region.contains(mu.points) if mu.atoms else np.zeros(0, dtype=bool)
    atoms = [(a.location, a.weight) for a, k in zip(mu.atoms, keep) if k]
    ax = mu.axis
    axis_atoms = [(y, w) for y, w in ax.atoms if region.contains(1j * y)]
    dens = ax.density
    if dens is not None:
        windows = region.axis_intervals()
        if not windows:
            dens = None
        elif windows != [(-INF, INF)]:
            dens = Windowed(dens, tuple(windows))
    return ChargeDistribution.from_atoms(atoms, axis_atoms, dens, origin_free=mu.origin_free)


def variation_mass(mu: ChargeDistribution, region: Region | None = None, mode: str = "signed") -> float:
    """``nu(region)`` (``mode='signed'``) or ``|nu|(region)`` (``mode='total'``)."""
    if mode not in ("signed", "total"):
        raise ValidationError("mode must be 'signed' or 'total'", mode=mode)
    region = region or Region("plane")
    total = 0.0
    if mu.atoms:
        w = mu.weights[region.contains(mu.points)]
        total += float(np.sum(w if mode == "signed" else np.abs(w)))
    ax = mu.axis
    if ax.atoms:
        w = ax.atom_w[region.contains(1j * ax.atom_y)]
        total += float(np.sum(w if mode == "signed" else np.abs(w)))
    if ax.density is not None:
        total += ax.density_mass(region.axis_intervals(), mode)
    return total


def radial_counting(mu: ChargeDistribution, center: complex, r, mode: str = "signed"):
    """Mass of the closed disk of radius ``r`` about ``center``; vectorized in ``r``.

    Right-continuous in ``r``: an atom at distance exactly ``r`` is counted.
    """
    if mode not in ("signed", "total"):
        raise ValidationError("mode must be 'signed' or 'total'", mode=mode)
    center = complex(center)
    r = np.asarray(r, dtype=float)
    if np.any(r < 0):
        raise ValidationError("radius must be nonnegative")
    flat = r.ravel()
    out = np.zeros(flat.shape)

    def add_atoms(dist, w):
        nonlocal out
        if dist.size == 0:
            return
        order = np.argsort(dist, kind="stable")
        ds = dist[order]
        ws = w[order] if mode == "signed" else np.abs(w[order])
        cum = np.concatenate([[0.0], np.cumsum(ws)])
        out = out + cum[np.searchsorted(ds, flat, side="right")]

    add_atoms(np.abs(mu.points - center), mu.weights)
    ax = mu.axis
    add_atoms(np.abs(1j * ax.atom_y - center), ax.atom_w)
    if ax.density is not None:
        cx, cy = center.real, center.imag
        h = np.sqrt(np.clip(flat * flat - cx * cx, 0.0, None))
        lo, hi = cy - h, cy + h
        if mode == "signed":
            vals = ax.density.integral(lo, hi)
        else:
            vals = ax.density.abs_integral(lo, hi)
        out = out + np.where(h > 0, vals, 0.0)
    out = out.reshape(r.shape)
    return float(out) if out.ndim == 0 else out


def axis_distribution(mu: ChargeDistribution, y, axis: str = "imaginary"):
    """Distribution function ``F`` on an axis, normalized by ``F(0) = 0``.

    ``F(y2) - F(y1)`` is the mass of the half-open axis interval ``(y1, y2]``,
    so an atom at ``t`` enters ``F(y)`` exactly for ``y >= t`` (``t > 0``).
    Vectorized in ``y``.
    """
    y = np.asarray(y, dtype=float)
    if axis == "imaginary":
        pos = mu.axis.atom_y
        w = mu.axis.atom_w
        dens = mu.axis.density
    elif axis == "real":
        pts = mu.points
        on = pts.imag == 0 if pts.size else np.zeros(0, dtype=bool)
        pos = np.concatenate([pts.real[on], [0.0] * sum(1 for yy, _ in mu.axis.atoms if yy == 0)])
        w = np.concatenate([mu.weights[on], [ww for yy, ww in mu.axis.atoms if yy == 0]])
        dens = None
    else:
        raise ValidationError("axis must be 'real' or 'imaginary'", axis=axis)
    flat = y.ravel()
    # (0, y] for y > 0 counts atoms with 0 < t <= y; F(y) = -nu((y, 0]) for y < 0
    a = pos[None, :]
    yy = flat[:, None]
    up = ((a > 0) & (a <= yy)).astype(float) @ w if w.size else np.zeros(flat.shape)
    down = ((a > yy) & (a <= 0)).astype(float) @ w if w.size else np.zeros(flat.shape)
    out = up - down
    if dens is not None:
        out = out + dens.integral(np.zeros_like(flat), flat)
    out = out.reshape(y.shape)
    return float(out) if out.ndim == 0 else out


def sector_clear(mu: ChargeDistribution, a: float) -> bool:
    """True iff the closed sector ``{Re z <= a|z|}`` misses the support of ``mu``."""
    if not 0 < a < 1:
        raise ValidationError("sector parameter must lie in (0, 1)", a=a)
    if not mu.axis.is_empty:
        return False
    pts = mu.points
    return bool(np.all(pts.real > a * np.abs(pts))) if pts.size else True


def constant_axis_density(value: float, lo: float = -INF, hi: float = INF) -> Density:
    """Density equal to ``value`` on ``[lo, hi]`` and zero elsewhere."""
    return KernelSum(boxes=(Box(float(value), float(lo), float(hi)),))
