"""Seeded desk-scale instances of the sector theorem and checks of its conclusions.

An instance is a finite atomic charge in the open sector ``Re z > a|z|``
outside the closed disk of radius ``2d``.  For each instance the harness

* estimates the linear-growth constant ``C`` bounding
  ``|nu|^rad(t) + |nu^bal1|^rad(t) <= C t``,
* scans ``|int_{d<|z|<=r} Im(1/z) d(nu - nu^bal1)|`` over ``r > 2`` and
  compares its supremum with ``7C + 3C/d``,
* confirms that the axis charge contributes nothing to the ``Re`` scan,
* measures ``sup_y sup_t |nu^bal01|_{iy}^rad(t) / t`` on two nested y-grids,
* compares growth orders of the source and of its balayage.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import asdict, dataclass, field, fields, replace
from typing import NamedTuple

import numpy as np

from . import kernels
from .balayage import BalayageResult, balayage_genus01, balayage_genus1
from .errors import HypothesisError, ValidationError
from .growth import log_grid, order_estimate, profile_of, type_estimate
from .lindelof import annulus_sums, axis_real_integrand, boundedness_verdict, lindelof_scan
from .measure import ChargeDistribution, radial_counting, sector_clear

WEIGHT_BUDGET = 10.0


def _default_r_grid():
    return log_grid(2.5, 1e4, 64)


def symmetric_log_grid(y_max: float, y_min: float = 1e-2, per_decade: int = 16) -> np.ndarray:
    pos = 10.0 ** (np.arange(math.floor(math.log10(y_min) * per_decade),
                             math.floor(math.log10(y_max) * per_decade) + 1) / per_decade)
    return np.concatenate([-pos[::-1], [0.0], pos])


def _default_t_grid():
    return 2.0 ** -np.arange(0, 11, dtype=float)


def parse_law(text: str) -> tuple[str, tuple[float, ...]]:
    """``'geometric:1.25'`` -> ``('geometric', (1.25,))``."""
    name, *args = text.split(":")
    try:
        return name, tuple(float(a) for a in args)
    except ValueError as exc:
        raise ValidationError("bad law parameters", law=text) from exc


@dataclass(frozen=True)
class HarnessConfig:
    seed: int = 0
    n_atoms: int = 20
    sector_a: float = 0.5
    d: float = 0.5
    radius_law: str = "geometric:1.25"
    weight_law: str = "alternating"
    # magnitudes grow like |z|**weight_growth before budgeting
    weight_growth: float = 0.5
    slope_tol: float = 0.1
    r_grid: np.ndarray = field(default_factory=_default_r_grid, compare=False)
    y_grid: np.ndarray = field(default_factory=lambda: symmetric_log_grid(10.0), compare=False)
    y_grid_wide: np.ndarray = field(default_factory=lambda: symmetric_log_grid(1000.0), compare=False)
    t_grid: np.ndarray = field(default_factory=_default_t_grid, compare=False)
    growth_grid: np.ndarray = field(default_factory=lambda: log_grid(1.0, 1e4, 64), compare=False)

    def __post_init__(self):
        if self.n_atoms < 0:
            raise ValidationError("n_atoms must be nonnegative", n_atoms=self.n_atoms)
        if not 0 < self.sector_a < 1:
            raise ValidationError("sector_a must lie in (0, 1)", sector_a=self.sector_a)
        if not 0 < self.d <= 1:
            raise ValidationError("d must lie in (0, 1]", d=self.d)
        for name in ("r_grid", "y_grid", "y_grid_wide", "t_grid", "growth_grid"):
            g = np.asarray(getattr(self, name), dtype=float)
            if g.size == 0:
                raise ValidationError("grids must be nonempty", grid=name)
            object.__setattr__(self, name, g)
        if np.any(self.t_grid <= 0) or np.any(self.t_grid > 1):
            raise ValidationError("t_grid must lie in (0, 1]")
        law, args = parse_law(self.radius_law)
        if law == "geometric":
            if len(args) != 1 or not args[0] > 1:
                raise ValidationError("geometric radius law needs a ratio > 1", law=self.radius_law)
        elif law == "uniform_log":
            if len(args) != 2 or not 2 * self.d < args[0] < args[1]:
                raise ValidationError("uniform_log needs 2d < rmin < rmax", law=self.radius_law)
        else:
            raise ValidationError("unknown radius law", law=self.radius_law)
        wlaw, wargs = parse_law(self.weight_law)
        if wlaw not in ("alternating", "random_sign") or (wlaw == "alternating" and wargs) \
                or (wlaw == "random_sign" and len(wargs) > 1):
            raise ValidationError("unknown weight law", law=self.weight_law)

    def params(self) -> dict:
        return {f.name: getattr(self, f.name) for f in fields(self) if f.compare}


def sample_sector_measure(cfg: HarnessConfig) -> ChargeDistribution:
    """Deterministic sector measure for ``cfg``.

    Radii follow the radius law starting beyond ``2d``; arguments are uniform
    in the open sector ``|arg z| < arccos(a)``.  Under the ``alternating`` law
    consecutive atoms share an argument and carry opposite signs, with the
    second magnitude chosen so the pair's ``w Re(1/z)`` cancels; partial sums
    of ``w Re(1/z)`` then alternate between zero and one leader term; ``random_sign`` draws signs
    independently.  Weights are finally scaled down, if needed, so that
    ``sum |w| Re(1/z) <= 10``.
    """
    n = cfg.n_atoms
    if n == 0:
        return ChargeDistribution(origin_free=True)
    rng = np.random.default_rng(cfg.seed)
    law, args = parse_law(cfg.radius_law)
    two_d = 2.0 * cfg.d
    if law == "geometric":
        radii = two_d * args[0] ** np.arange(1, n + 1, dtype=float)
    else:
        radii = np.sort(np.exp(rng.uniform(math.log(args[0]), math.log(args[1]), n)))

    theta_max = math.acos(cfg.sector_a)
    wlaw, wargs = parse_law(cfg.weight_law)
    if wlaw == "alternating":
        pair_angles = rng.uniform(-theta_max, theta_max, (n + 1) // 2)
        angles = np.repeat(pair_angles, 2)[:n]
        signs = np.where(np.arange(n) % 2 == 0, 1.0, -1.0)
        scale = 1.0
    else:
        angles = rng.uniform(-theta_max, theta_max, n)
        signs = rng.choice([-1.0, 1.0], n)
        scale = wargs[0] if wargs else 1.0
    # uniform() may return the left endpoint; keep the sector strict
    angles = np.clip(angles, -theta_max * (1 - 1e-9), theta_max * (1 - 1e-9))
    pts = radii * np.exp(1j * angles)
    mags = (radii / radii[0]) ** cfg.weight_growth
    if wlaw == "alternating":
        # partner magnitude cancels the leader's w Re(1/z) exactly
        lead = np.arange(n) - np.arange(n) % 2
        mags = mags[lead] * radii / radii[lead]
    w = scale * signs * mags
    load = float(np.sum(np.abs(w) * (1.0 / pts).real))
    if load > WEIGHT_BUDGET:
        w = w * (WEIGHT_BUDGET / load)
    return ChargeDistribution.from_atoms(zip(pts, w), origin_free=True)


def gate_hypotheses(mu: ChargeDistribution, cfg: HarnessConfig) -> None:
    """Raise :class:`HypothesisError` unless ``mu`` meets every theorem hypothesis."""
    if not sector_clear(mu, cfg.sector_a):
        raise HypothesisError("support meets the closed sector Re z <= a|z|", a=cfg.sector_a)
    check_clearance(mu, cfg.d)
    if mu.atoms:
        rep = lindelof_scan(mu, "re_plus", log_grid(1.0, float(cfg.r_grid[-1]), 64))
        if not boundedness_verdict(rep, cfg.slope_tol):
            raise HypothesisError("Re+ Lindelof scan is trending", slope=rep.trend_slope,
                                  slope_tol=cfg.slope_tol)


def check_clearance(mu: ChargeDistribution, d: float) -> None:
    if not 0 < d <= 1:
        raise HypothesisError("inner clearance d must lie in (0, 1]", d=d)
    if not mu.axis.is_empty or any(a.location.real <= 0 for a in mu.atoms):
        raise HypothesisError("measure must be concentrated in the open right half-plane")
    if mu.atoms and float(np.min(np.abs(mu.points))) <= 2 * d:
        raise HypothesisError("support meets the closed disk of radius 2d", d=d,
                              min_modulus=float(np.min(np.abs(mu.points))))


def c_grid(mu: ChargeDistribution, extra=()) -> np.ndarray:
    """Radii for estimating ``C``: a wide log grid plus every atom modulus.

    Atom counting functions jump at atom moduli, where ``m(t)/t`` peaks.
    """
    parts = [log_grid(1e-3, 1e6, 32), np.abs(mu.points), np.asarray(extra, dtype=float)]
    g = np.unique(np.concatenate(parts))
    return g[g > 0]


def estimate_C(mu: ChargeDistribution, bal: BalayageResult, t_grid) -> float:
    """``max_t (|nu|^rad(t) + |bal|^rad(t)) / t`` over ``t_grid``."""
    t = np.asarray(t_grid, dtype=float)
    if t.size == 0 or np.any(t <= 0):
        raise ValidationError("t_grid must be positive and nonempty")
    if mu.is_empty and bal.result.is_empty:
        return 0.0
    counts = radial_counting(mu, 0j, t, "total") + radial_counting(bal.result, 0j, t, "total")
    return float(np.max(counts / t))


class DifferenceCheck(NamedTuple):
    sup: float
    bound: float
    passed: bool
    re_sup: float
    axis_re_zero: bool


def check_difference_lindelof(mu: ChargeDistribution, d: float, r_grid, bal: BalayageResult | None = None,
                              C_hat: float | None = None) -> DifferenceCheck:
    """Sup over ``r > 2`` of the ``Im`` annulus integral of ``nu - nu^bal1`` against ``7C + 3C/d``."""
    check_clearance(mu, d)
    bal = balayage_genus1(mu) if bal is None else bal
    if C_hat is None:
        C_hat = estimate_C(mu, bal, c_grid(mu))
    r = np.asarray(r_grid, dtype=float)
    r = r[r > 2]
    if r.size == 0:
        raise ValidationError("r_grid needs radii above 2")
    bound = 7.0 * C_hat + 3.0 * C_hat / d

    diff_im = annulus_sums(mu, "im", r, inner=d).imag - annulus_sums(bal.result, "im", r, inner=d).imag
    sup = float(np.max(np.abs(diff_im)))

    axis_re = annulus_sums(bal.result, "re", r, inner=d).real
    ys = np.concatenate([bal.result.axis.atom_y, np.linspace(-r[-1], r[-1], 257)])
    ys = ys[ys != 0]
    axis_re_zero = bool(np.all(axis_re == 0.0) and np.all(axis_real_integrand(ys) == 0.0))
    diff_re = annulus_sums(mu, "re", r, inner=d).real - axis_re
    re_sup = float(np.max(np.abs(diff_re)))
    return DifferenceCheck(sup, bound, bool(sup <= bound + 1e-8), re_sup, axis_re_zero)


def check_trnuair(bal: BalayageResult, y_grid, t_grid) -> float:
    """``max_{y, t} |bal|_{iy}^rad(t) / t`` over the grids (``t`` in ``(0, 1]``)."""
    y = np.asarray(y_grid, dtype=float)
    t = np.asarray(t_grid, dtype=float)
    if np.any(t <= 0) or np.any(t > 1):
        raise ValidationError("t_grid must lie in (0, 1]")
    res = bal.result
    if res.is_empty:
        return 0.0
    best = 0.0
    centers = 1j * y
    pts, ws = res.points, np.abs(res.weights)
    ay, aw = res.axis.atom_y, np.abs(res.axis.atom_w)
    for tt in t:
        mass = np.zeros(y.shape)
        if pts.size:
            mass += (np.abs(pts[None, :] - centers[:, None]) <= tt) @ ws
        if ay.size:
            mass += (np.abs(ay[None, :] - y[:, None]) <= tt) @ aw
        if res.axis.density is not None:
            mass += res.axis.density.abs_integral(y - tt, y + tt)
        best = max(best, float(np.max(mass)) / tt)
    return best


@dataclass(frozen=True)
class KernelBoundsReport:
    n_samples: int
    charge_violations: int
    charge_min_slack: float
    log_ratio_violations: int
    log_ratio_min_slack: float
    interval_violations: int
    interval_min_slack: float

    @property
    def passed(self) -> bool:
        return self.charge_violations == 0 and self.log_ratio_violations == 0 and self.interval_violations == 0


def check_kernel_bounds(n_samples: int, seed: int = 0, tol: float = 1e-12) -> KernelBoundsReport:
    """Random checks of three kernel inequalities within their hypothesis regions.

    * ``Omega(z, [-t, t]) <= 2 t^2/|z|^2`` for ``2t <= |z|``, ``Re z >= 0``;
    * ``|ln|(z - id)/(z + id)|| <= 4d/|z|`` for ``|z| >= 2d``;
    * ``omega(z, [-d, d]) <= 2 d Re z / (pi (|z|^2 - d^2))`` for ``|z| >= 2d``, ``Re z > 0``.

    Slack is ``bound - value``; a violation is slack below ``-tol``.  A quarter
    of the samples sit on the hypothesis edge ``2t = |z|`` (``2d = |z|``).
    """
    if n_samples < 1:
        raise ValidationError("n_samples must be >= 1", n_samples=n_samples)
    rng = np.random.default_rng(seed)
    n = n_samples

    def random_points(allow_axis):
        mod = 10.0 ** rng.uniform(-3, 4, n)
        ang = rng.uniform(-np.pi / 2, np.pi / 2, n)
        z = mod * np.exp(1j * ang)
        if allow_axis:
            # a few exact boundary points, where the indicator branch applies
            edge = rng.random(n) < 0.05
            z = np.where(edge, 1j * mod * np.where(ang < 0, -1.0, 1.0), z)
        return z

    def scale(z):
        s = rng.uniform(0, 0.5, n)
        s[: n // 4] = 0.5
        return s * np.abs(z)

    # genus-1 charge of a symmetric interval
    z = random_points(allow_axis=True)
    t = scale(z)
    x, v = z.real, z.imag
    omega = np.where(
        x > 0,
        kernels.atan_diff(np.where(x > 0, x, 1.0), v, -t, t) / np.pi,
        ((v > -t) & (v <= t)).astype(float),
    )
    Omega = omega - 2 * t / np.pi * (1.0 / z).real
    Omega = np.where(t > 0, Omega, 0.0)
    charge_slack = 2 * t**2 / np.abs(z) ** 2 - Omega

    # logarithm of the ratio of distances to +-id
    z = random_points(allow_axis=False)
    dd = scale(z)
    lg = np.abs(np.log(np.abs(z - 1j * dd)) - np.log(np.abs(z + 1j * dd)))
    log_ratio_slack = 4 * dd / np.abs(z) - lg

    # harmonic measure of [-d, d]
    z = random_points(allow_axis=False)
    dd = scale(z)
    om = kernels.atan_diff(z.real, z.imag, -dd, dd) / np.pi
    interval_slack = 2 * dd * z.real / (np.pi * (np.abs(z) ** 2 - dd**2)) - om

    return KernelBoundsReport(
        n,
        int(np.sum(charge_slack < -tol)), float(np.min(charge_slack)),
        int(np.sum(log_ratio_slack < -tol)), float(np.min(log_ratio_slack)),
        int(np.sum(interval_slack < -tol)), float(np.min(interval_slack)),
    )


@dataclass(frozen=True)
class TheoremReport:
    seed: int
    n_atoms: int
    C_hat: float
    diff_im_sup: float
    diff_im_bound: float
    diff_re_sup: float
    axis_re_zero: bool
    trnuair_sup: float
    trnuair_sup_wide: float
    bal_type: float
    src_order: float
    bal_order: float
    im_bound_pass: bool
    trnuair_finite_pass: bool
    trnuair_stable_pass: bool
    type_pass: bool
    order_pass: bool

    def __post_init__(self):
        for f in fields(self):
            cast = {"int": int, "float": float, "bool": bool}[f.type]
            object.__setattr__(self, f.name, cast(getattr(self, f.name)))

    @property
    def passed(self) -> bool:
        return (self.im_bound_pass and self.axis_re_zero and self.trnuair_finite_pass
                and self.trnuair_stable_pass and self.type_pass and self.order_pass)

    @classmethod
    def csv_fields(cls) -> list[str]:
        return [f.name for f in fields(cls)]


def run_instance(cfg: HarnessConfig) -> TheoremReport:
    """Sample, gate and check one seeded instance."""
    mu = sample_sector_measure(cfg)
    gate_hypotheses(mu, cfg)
    bal1 = balayage_genus1(mu)
    bal01 = balayage_genus01(mu)
    grid = c_grid(mu, cfg.growth_grid)
    C_hat = estimate_C(mu, bal1, grid)
    diff = check_difference_lindelof(mu, cfg.d, cfg.r_grid, bal1, C_hat)
    tr = check_trnuair(bal01, cfg.y_grid, cfg.t_grid)
    tr_wide = check_trnuair(bal01, cfg.y_grid_wide, cfg.t_grid)

    src_prof = profile_of(mu, cfg.growth_grid)
    bal_prof = profile_of(bal01.result, cfg.growth_grid)
    bal_type = type_estimate(bal_prof, 1.0)
    if mu.is_empty:
        src_order = bal_order = 0.0
    else:
        src_order, bal_order = order_estimate(src_prof), order_estimate(bal_prof)

    finite = math.isfinite(tr) and math.isfinite(tr_wide)
    return TheoremReport(
        seed=cfg.seed,
        n_atoms=len(mu.atoms),
        C_hat=C_hat,
        diff_im_sup=diff.sup,
        diff_im_bound=diff.bound,
        diff_re_sup=diff.re_sup,
        axis_re_zero=diff.axis_re_zero,
        trnuair_sup=tr,
        trnuair_sup_wide=tr_wide,
        bal_type=bal_type,
        src_order=src_order,
        bal_order=bal_order,
        im_bound_pass=diff.passed,
        trnuair_finite_pass=finite,
        trnuair_stable_pass=finite and tr_wide <= 2.0 * tr + 1e-12,
        type_pass=math.isfinite(bal_type) and bal_type <= C_hat + 1e-12,
        order_pass=bal_order <= src_order + 0.1,
    )


def run_seeds(cfg: HarnessConfig, seeds) -> list[TheoremReport]:
    return [run_instance(replace(cfg, seed=int(s))) for s in seeds]


def _fmt(v) -> str:
    if isinstance(v, (bool, np.bool_)):
        return "true" if v else "false"
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    return format(float(v), ".17g")


def reports_csv(reports) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    cols = TheoremReport.csv_fields()
    w.writerow(cols)
    for rep in reports:
        d = asdict(rep)
        w.writerow([_fmt(d[c]) for c in cols])
    return buf.getvalue()


def summarize(reports) -> dict:
    n = len(reports)
    return {
        "instances": n,
        "passed": sum(r.passed for r in reports),
        "im_bound_pass": sum(r.im_bound_pass for r in reports),
        "axis_re_zero": sum(r.axis_re_zero for r in reports),
        "trnuair_stable_pass": sum(r.trnuair_stable_pass for r in reports),
        "order_pass": sum(r.order_pass for r in reports),
        "max_im_ratio": max((r.diff_im_sup / r.diff_im_bound for r in reports if r.diff_im_bound > 0),
                            default=0.0),
        "note": "finite grids give evidence for the suprema, not certificates",
    }
