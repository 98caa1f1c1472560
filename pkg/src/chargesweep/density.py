"""Closed-form densities on the imaginary axis.

Every axis density produced by this library is built from a few primitives:

* :class:`KernelSum` -- a weighted sum of genus-0 / genus-1 kernel densities
  plus piecewise-constant boxes.  Integrals, and integrals against ``1/y``, have
  exact antiderivatives.
* :class:`Clipped` -- the positive or negative part of another density.
* :class:`Windowed` -- another density multiplied by the indicator of a finite
  union of intervals.
* :class:`DensitySum` -- a sum of densities.

All of them expose oriented integrals ``integral(a, b)`` and
``inv_integral(a, b)`` (integral of ``f(y)/y``), vectorized over ``a`` and
``b``.  Absolute integrals go through a sign decomposition of the real line,
computed once per density: sign changes are bracketed on a dense set of seed
points adapted to the kernel widths and refined with Brent's method, so the
integral of ``|f|`` reduces to a signed sum of exact piece integrals.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np
from scipy.optimize import brentq

from .errors import QuadratureError, ValidationError
from .kernels import atan_diff

INF = math.inf

# seed points around each kernel bump: tangent ladder near the peak, geometric
# ladder for the far field where a Poisson tail can cross a constant level
_TAN_SEEDS = np.tan(np.linspace(-np.pi / 2, np.pi / 2, 97)[1:-1])
_GEO_SEEDS = 2.0 ** (np.arange(0, 161) / 4.0)
_FAR_SEEDS = np.concatenate([-_GEO_SEEDS[::-1], _GEO_SEEDS])


@dataclass(frozen=True)
class KernelTerm:
    """``weight`` times the genus-``genus`` kernel density of a point ``z``."""

    z: complex
    weight: float
    genus: int = 0


@dataclass(frozen=True)
class Box:
    """Constant density ``value`` on ``[lo, hi]`` (bounds may be infinite)."""

    value: float
    lo: float = -INF
    hi: float = INF


def _pair(a, b):
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    return np.broadcast_arrays(a, b)


def _scalar(out):
    out = np.asarray(out, dtype=float)
    return float(out) if out.ndim == 0 else out


def _log_ratio(a, b):
    """``ln(b/a)`` for same-sign ``a, b``; infinite if one end is infinite."""
    with np.errstate(divide="ignore", invalid="ignore"):
        return np.log(np.abs(b)) - np.log(np.abs(a))


class Density:
    """Interface shared by all axis densities."""

    def __call__(self, y, side: int = 1):
        """Evaluate at ``y``; at a jump, ``side=+1`` is the right limit."""
        raise NotImplementedError

    def integral(self, a, b):
        raise NotImplementedError

    def inv_integral(self, a, b):
        raise NotImplementedError

    def breakpoints(self) -> np.ndarray:
        """Points where the density may jump or have a kink."""
        raise NotImplementedError

    def seeds(self) -> np.ndarray:
        raise NotImplementedError

    @cached_property
    def pieces(self) -> tuple[np.ndarray, np.ndarray]:
        """``(edges, signs)``: the line split into intervals of constant sign."""
        return sign_pieces(self)

    @property
    def roots(self) -> np.ndarray:
        edges, signs = self.pieces
        return edges[1:-1]

    def _piecewise(self, method, a, b, select):
        a, b = _pair(a, b)
        edges, signs = self.pieces
        out = np.zeros(a.shape)
        for lo, hi, s in zip(edges[:-1], edges[1:], signs):
            coef = select(s)
            if coef == 0:
                continue
            out = out + coef * method(np.clip(a, lo, hi), np.clip(b, lo, hi))
        return _scalar(out)

    def abs_integral(self, a, b):
        """Oriented integral of ``|f|`` from ``a`` to ``b``."""
        return self._piecewise(self.integral, a, b, lambda s: s)

    def part_integral(self, a, b, sign: int):
        """Integral of ``f+`` (``sign=+1``) or ``f-`` (``sign=-1``)."""
        return self._piecewise(self.integral, a, b, lambda s: sign if s == sign else 0)

    def abs_inv_integral(self, a, b):
        """Oriented integral of ``|f(y)|/y`` over an interval not containing 0."""
        return self._piecewise(self.inv_integral, a, b, lambda s: s)

    def __add__(self, other):
        if other is None:
            return self
        return DensitySum.of(self, other)

    __radd__ = __add__

    def scaled(self, factor: float) -> "Density":
        raise NotImplementedError

    def reflected(self) -> "Density":
        """Density of the mirror image ``y -> -y``."""
        raise NotImplementedError


@dataclass(frozen=True, eq=False)
class KernelSum(Density):
    terms: tuple[KernelTerm, ...] = ()
    boxes: tuple[Box, ...] = ()
    _x: np.ndarray = field(init=False, repr=False)
    _v: np.ndarray = field(init=False, repr=False)
    _w: np.ndarray = field(init=False, repr=False)
    _const: float = field(init=False, repr=False)

    def __post_init__(self):
        for t in self.terms:
            if not t.z.real > 0:
                raise ValidationError("kernel term needs Re z > 0", z=str(t.z))
            if t.genus not in (0, 1):
                raise ValidationError("kernel genus must be 0 or 1", genus=t.genus)
        for bx in self.boxes:
            if not bx.lo < bx.hi:
                raise ValidationError("box needs lo < hi", lo=bx.lo, hi=bx.hi)
        x = np.array([t.z.real for t in self.terms], dtype=float)
        v = np.array([t.z.imag for t in self.terms], dtype=float)
        w = np.array([t.weight for t in self.terms], dtype=float)
        # genus-1 terms all share the infinite constant -w Re(1/z)/pi
        const = -sum(t.weight * (1.0 / t.z).real for t in self.terms if t.genus == 1) / math.pi
        for name, val in (("_x", x), ("_v", v), ("_w", w), ("_const", const)):
            object.__setattr__(self, name, val)

    @property
    def constant(self) -> float:
        """Constant density contributed by the genus-1 terms."""
        return self._const

    def __call__(self, y, side: int = 1):
        y = np.asarray(y, dtype=float)
        yy = y[..., None]
        out = (self._w * self._x / (math.pi * (self._x**2 + (yy - self._v) ** 2))).sum(-1)
        out = out + self._const
        for bx in self.boxes:
            if side >= 0:
                inside = (y >= bx.lo) & (y < bx.hi)
            else:
                inside = (y > bx.lo) & (y <= bx.hi)
            out = out + np.where(inside, bx.value, 0.0)
        return _scalar(out)

    def integral(self, a, b):
        a, b = _pair(a, b)
        aa, bb = a[..., None], b[..., None]
        out = (self._w * atan_diff(self._x, self._v, aa, bb)).sum(-1) / math.pi
        if self._const != 0.0:
            with np.errstate(invalid="ignore"):
                lin = self._const * (b - a)
            out = out + np.where(a == b, 0.0, lin)
        for bx in self.boxes:
            out = out + bx.value * (np.clip(b, bx.lo, bx.hi) - np.clip(a, bx.lo, bx.hi))
        return _scalar(out)

    def inv_integral(self, a, b):
        """Oriented integral of ``f(y)/y``; ``[a, b]`` must not contain 0."""
        a, b = _pair(a, b)
        with np.errstate(all="ignore"):
            return self._inv_integral(a, b)

    def _inv_integral(self, a, b):
        if np.any((np.minimum(a, b) <= 0) & (np.maximum(a, b) >= 0) & (a != b)):
            raise ValidationError("1/y integral over an interval containing 0")
        aa, bb = a[..., None], b[..., None]
        x, v, w = self._x, self._v, self._w
        mod2 = x * x + v * v

        def log_part(y):
            # ln|y| - ln sqrt((y-v)^2 + x^2), tending to 0 at infinity
            with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
                r = np.log(np.abs(y)) - 0.5 * np.log((y - v) ** 2 + x * x)
            return np.where(np.isinf(y), 0.0, r)

        same = aa == bb
        terms = (x / (math.pi * mod2)) * (
            log_part(bb) - log_part(aa) + (v / x) * atan_diff(x, v, aa, bb)
        )
        out = (w * np.where(same, 0.0, terms)).sum(-1)
        if self._const != 0.0:
            out = out + np.where(a == b, 0.0, self._const * _log_ratio(a, b))
        for bx in self.boxes:
            ca, cb = np.clip(a, bx.lo, bx.hi), np.clip(b, bx.lo, bx.hi)
            out = out + np.where(ca == cb, 0.0, bx.value * _log_ratio(ca, cb))
        return _scalar(out)

    def breakpoints(self):
        pts = [p for bx in self.boxes for p in (bx.lo, bx.hi) if math.isfinite(p)]
        return np.unique(np.array(pts, dtype=float))

    def seeds(self):
        parts = [self.breakpoints()]
        for x, v in zip(self._x, self._v):
            parts.append(v + x * _TAN_SEEDS)
            parts.append(v + x * _FAR_SEEDS)
        if not self.terms:
            parts.append(_FAR_SEEDS)
        return np.concatenate(parts)

    def scaled(self, factor):
        return KernelSum(
            tuple(KernelTerm(t.z, t.weight * factor, t.genus) for t in self.terms),
            tuple(Box(bx.value * factor, bx.lo, bx.hi) for bx in self.boxes),
        )

    def reflected(self):
        return KernelSum(
            tuple(KernelTerm(t.z.conjugate(), t.weight, t.genus) for t in self.terms),
            tuple(Box(bx.value, -bx.hi, -bx.lo) for bx in self.boxes),
        )


@dataclass(frozen=True, eq=False)
class Clipped(Density):
    """Positive (``sign=+1``) or negative (``sign=-1``) part of ``base``."""

    base: Density
    sign: int

    def __call__(self, y, side: int = 1):
        return _scalar(np.maximum(self.sign * np.asarray(self.base(y, side)), 0.0))

    def integral(self, a, b):
        return self.base._piecewise(self.base.integral, a, b,
                                    lambda s: self.sign if s == self.sign else 0)

    def inv_integral(self, a, b):
        return self.base._piecewise(self.base.inv_integral, a, b,
                                    lambda s: self.sign if s == self.sign else 0)

    def breakpoints(self):
        return np.unique(np.concatenate([self.base.breakpoints(), self.base.roots]))

    def seeds(self):
        return np.concatenate([self.base.seeds(), self.base.roots])

    def scaled(self, factor):
        if factor >= 0:
            return Clipped(self.base.scaled(factor), self.sign)
        return DensitySum((self,), factor=factor)

    def reflected(self):
        return Clipped(self.base.reflected(), self.sign)


@dataclass(frozen=True, eq=False)
class Windowed(Density):
    """``base`` restricted to a union of disjoint intervals ``[lo, hi]``."""

    base: Density
    windows: tuple[tuple[float, float], ...]

    def __call__(self, y, side: int = 1):
        y = np.asarray(y, dtype=float)
        inside = np.zeros(y.shape, dtype=bool)
        for lo, hi in self.windows:
            if side >= 0:
                inside |= (y >= lo) & (y < hi)
            else:
                inside |= (y > lo) & (y <= hi)
        return _scalar(np.where(inside, self.base(y, side), 0.0))

    def _windowed(self, method, a, b):
        a, b = _pair(a, b)
        out = np.zeros(a.shape)
        for lo, hi in self.windows:
            out = out + method(np.clip(a, lo, hi), np.clip(b, lo, hi))
        return _scalar(out)

    def integral(self, a, b):
        return self._windowed(self.base.integral, a, b)

    def inv_integral(self, a, b):
        return self._windowed(self.base.inv_integral, a, b)

    def breakpoints(self):
        edges = [p for w in self.windows for p in w if math.isfinite(p)]
        return np.unique(np.concatenate([self.base.breakpoints(), np.array(edges, dtype=float)]))

    def seeds(self):
        return np.concatenate([self.base.seeds(), self.breakpoints()])

    def scaled(self, factor):
        return Windowed(self.base.scaled(factor), self.windows)

    def reflected(self):
        return Windowed(self.base.reflected(), tuple((-hi, -lo) for lo, hi in reversed(self.windows)))


@dataclass(frozen=True, eq=False)
class DensitySum(Density):
    parts: tuple[Density, ...]
    factor: float = 1.0

    @staticmethod
    def of(*densities) -> Density:
        parts = []
        for d in densities:
            if d is None:
                continue
            if isinstance(d, DensitySum) and d.factor == 1.0:
                parts.extend(d.parts)
            else:
                parts.append(d)
        if len(parts) == 1:
            return parts[0]
        return DensitySum(tuple(parts))

    def _sum(self, fn):
        out = 0.0
        for p in self.parts:
            out = out + np.asarray(fn(p))
        return _scalar(self.factor * out)

    def __call__(self, y, side: int = 1):
        return self._sum(lambda p: p(y, side))

    def integral(self, a, b):
        return self._sum(lambda p: p.integral(a, b))

    def inv_integral(self, a, b):
        return self._sum(lambda p: p.inv_integral(a, b))

    def breakpoints(self):
        return np.unique(np.concatenate([p.breakpoints() for p in self.parts]))

    def seeds(self):
        return np.concatenate([p.seeds() for p in self.parts])

    def scaled(self, factor):
        return DensitySum(self.parts, self.factor * factor)

    def reflected(self):
        return DensitySum(tuple(p.reflected() for p in self.parts), self.factor)


def _sign(v: float, tol: float) -> int:
    if v > tol:
        return 1
    if v < -tol:
        return -1
    return 0


def sign_pieces(density: Density) -> tuple[np.ndarray, np.ndarray]:
    """Split the real line into maximal intervals on which ``density`` keeps one sign.

    Returns ``edges`` (starting at -inf, ending at +inf) and ``signs`` in
    {-1, 0, +1}.  Roots are located to near machine precision; a pair of roots
    closer together than the local seed spacing can go unnoticed, which is the
    accepted resolution limit of the seed ladders.
    """
    pts = np.unique(np.concatenate([density.seeds(), density.breakpoints()]))
    pts = pts[np.isfinite(pts)]
    if pts.size == 0:
        pts = np.array([0.0])
    right = np.asarray(density(pts, 1), dtype=float)
    left = np.asarray(density(pts, -1), dtype=float)
    # exact zero only: far Poisson tails are tiny but carry mass
    tol = 0.0

    roots = []
    for i in range(pts.size - 1):
        p, q = pts[i], pts[i + 1]
        fp, fq = right[i], left[i + 1]
        sp, sq = _sign(fp, tol), _sign(fq, tol)
        if sp * sq >= 0:
            continue

        def g(y, p=p, q=q, fp=fp, fq=fq):
            if y <= p:
                return fp
            if y >= q:
                return fq
            return float(density(y))

        try:
            roots.append(brentq(g, p, q, xtol=1e-15 * max(1.0, abs(p), abs(q)), rtol=1e-15))
        except (ValueError, RuntimeError) as exc:
            raise QuadratureError("sign-change refinement failed", lo=float(p), hi=float(q)) from exc

    cuts = np.unique(np.concatenate([pts, np.array(roots, dtype=float)]))
    edges = np.concatenate([[-INF], cuts, [INF]])
    mids = np.empty(edges.size - 1)
    mids[1:-1] = 0.5 * (edges[1:-2] + edges[2:-1])
    mids[0] = cuts[0] - (1.0 + abs(cuts[0]))
    mids[-1] = cuts[-1] + (1.0 + abs(cuts[-1]))
    vals = np.asarray(density(mids), dtype=float)
    signs = np.array([_sign(v, tol) for v in vals], dtype=int)

    # merge neighbours with equal sign
    keep = np.concatenate([[True], signs[1:] != signs[:-1]])
    starts = edges[:-1][keep]
    signs = signs[keep]
    edges = np.concatenate([starts, [INF]])
    return edges, signs
