"""Command-line front end.

Every command writes its outputs plus ``manifest.json`` into ``--out``.
Exit codes: 0 success, 2 invalid input, 3 numeric or hypothesis failure;
failures print ``{"code", "message", "context"}`` as JSON on stderr.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import re
import sys
import tempfile
from pathlib import Path

import numpy as np

from . import __version__
from .balayage import (balayage_genus0, balayage_genus01, balayage_genus1,
                       two_sided_balayage)
from .errors import ChargeSweepError, DomainError, ValidationError
from .growth import growth_report, log_grid
from .harness import HarnessConfig, reports_csv, run_seeds, summarize
from .kernels import genus1_charge, harmonic_measure
from .lindelof import lindelof_scan
from .measure import ChargeDistribution, axis_distribution, jordan_parts, variation_mass

EXIT_OK, EXIT_INPUT, EXIT_NUMERIC = 0, 2, 3


def fmt(v) -> str:
    if isinstance(v, (bool, np.bool_)):
        return "true" if v else "false"
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    return format(float(v), ".17g")


def parse_complex(text: str) -> complex:
    try:
        re_, im = text.split(",")
        return complex(float(re_), float(im))
    except ValueError as exc:
        raise ValidationError("complex values are written re,im", value=text) from exc


def parse_grid(text: str) -> np.ndarray:
    """``start:stop:step`` (inclusive when step divides) or ``log:start:stop:per_decade``."""
    parts = text.split(":")
    is_log = parts[0] == "log" and len(parts) == 4
    if not is_log and len(parts) != 3:
        raise ValidationError("grids are start:stop:step or log:start:stop:per_decade", grid=text)
    try:
        nums = [float(p) for p in parts[1:]] if is_log else [float(p) for p in parts]
    except ValueError as exc:
        raise ValidationError("malformed grid", grid=text) from exc
    if is_log:
        return log_grid(nums[0], nums[1], int(nums[2]))
    start, stop, step = nums
    if not step > 0 or not stop > start or not np.isfinite([start, stop]).all():
        raise ValidationError("grid needs finite start < stop and step > 0", grid=text)
    n = int(np.floor((stop - start) / step + 1e-9))
    return start + step * np.arange(n + 1)


def write_atomic(path: Path, text: str) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.")
    try:
        with os.fdopen(fd, "w", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def csv_text(header, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([fmt(v) for v in row])
    return buf.getvalue()


def dump_json(obj) -> str:
    return json.dumps(obj, indent=1, sort_keys=True) + "\n"


def write_manifest(args, out: Path, input_path=None, seed=None) -> None:
    params = {k: str(v) for k, v in sorted(vars(args).items())
              if k not in ("func", "command", "out", "input", "action") and v is not None}
    manifest = {
        "command": args.command,
        "input_path": None if input_path is None else str(input_path),
        "output_dir": str(out),
        "params": params,
        "tool_version": __version__,
        "seed": seed,
    }
    write_atomic(out / "manifest.json", dump_json(manifest))


def argv_from_manifest(manifest: dict, output_dir=None) -> list[str]:
    """Rebuild the argument vector recorded in a manifest."""
    argv = [manifest["command"]]
    if manifest.get("input_path"):
        argv.append(manifest["input_path"])
    for key, val in manifest["params"].items():
        flag = "--" + key.replace("_", "-")
        if val == "True":
            argv.append(flag)
        elif val != "False":
            argv += [flag, val]
    argv += ["--out", str(output_dir or manifest["output_dir"])]
    return argv


def _load(path) -> ChargeDistribution:
    try:
        return ChargeDistribution.load(path)
    except OSError as exc:
        raise ValidationError(f"cannot read measure file: {exc.strerror}", path=str(path)) from exc


# commands


def cmd_kernel(args) -> int:
    z = parse_complex(args.z)
    iv = (args.y1, args.y2)
    val = harmonic_measure(z, iv) if args.genus == 0 else genus1_charge(z, iv)
    print(fmt(val))
    if args.out:
        out = Path(args.out)
        write_atomic(out / "kernel.csv", csv_text(["value"], [[val]]))
        write_manifest(args, out)
    return EXIT_OK


def _balayage(mu, genus, r0):
    if genus == "0":
        return balayage_genus0(mu)
    if genus == "1":
        return balayage_genus1(mu)
    if genus == "01":
        return balayage_genus01(mu, r0)
    return two_sided_balayage(mu, r0)


def cmd_balayage(args) -> int:
    mu = _load(args.input)
    res = _balayage(mu, args.genus, args.r0)
    y = parse_grid(args.ygrid)
    axis = res.axis
    dens = axis.density_at(y) if axis.density is not None else np.zeros_like(y)
    dist = axis_distribution(res.result, y)
    out = Path(args.out)
    write_atomic(out / "balayage.csv", csv_text(["y", "density", "distribution"],
                                                zip(y, np.atleast_1d(dens), np.atleast_1d(dist))))
    sidecar = {
        "genus_used": res.genus_used,
        "r0": res.split_radius_r0,
        "source_mass_right": res.source_mass_right,
        "source_signed_mass": variation_mass(mu),
        "source_total_variation": variation_mass(mu, mode="total"),
        "grid_riemann_mass": float(np.sum(np.atleast_1d(dens)[:-1] * np.diff(y))) if y.size > 1 else 0.0,
    }
    write_atomic(out / "balayage.json", dump_json(sidecar))
    write_manifest(args, out, args.input)
    return EXIT_OK


def cmd_growth(args) -> int:
    mu = _load(args.input)
    radii = log_grid(args.rmin, args.rmax, args.per_decade)
    rep = growth_report(mu, radii, args.p, args.tail_fraction, args.class_p)
    row = rep.csv_row()
    out = Path(args.out)
    write_atomic(out / "growth.csv", csv_text(list(row), [list(row.values())]))
    write_manifest(args, out, args.input)
    return EXIT_OK


def cmd_lindelof(args) -> int:
    mu = _load(args.input)
    radii = log_grid(args.rmin, args.rmax, args.per_decade)
    rep = lindelof_scan(mu, args.kind, radii, args.inner)
    sup = np.maximum.accumulate(rep.partial_values)
    rows = zip(rep.radii, rep.partial_values, sup, rep.complex_partials.real, rep.complex_partials.imag)
    out = Path(args.out)
    write_atomic(out / "lindelof.csv",
                 csv_text(["r", "partial", "sup_so_far", "complex_re", "complex_im"], rows))
    write_atomic(out / "lindelof.json", dump_json({
        "kind": rep.kind, "sup": rep.sup_value, "trend_slope": rep.trend_slope, "inner": rep.inner,
    }))
    write_manifest(args, out, args.input)
    return EXIT_OK


def cmd_harness(args) -> int:
    cfg = HarnessConfig(seed=args.seed, n_atoms=args.n_atoms, sector_a=args.a, d=args.d,
                        radius_law=args.radius_law, weight_law=args.weight_law,
                        weight_growth=args.weight_growth)
    seeds = range(args.seed, args.seed + args.seeds)
    reports = run_seeds(cfg, seeds)
    out = Path(args.out)
    write_atomic(out / "harness.csv", reports_csv(reports))
    write_atomic(out / "summary.json", dump_json(summarize(reports)))
    write_manifest(args, out, seed=args.seed)
    return EXIT_OK


def cmd_validate(args) -> int:
    mu = _load(args.input)
    pos, neg = jordan_parts(mu)
    totals = {
        "atoms": len(mu.atoms),
        "axis_atoms": len(mu.axis.atoms),
        "signed_mass": variation_mass(mu),
        "positive_mass": variation_mass(pos),
        "negative_mass": variation_mass(neg),
        "total_variation": variation_mass(mu, mode="total"),
    }
    print(json.dumps(totals, sort_keys=True))
    if args.canonical:
        write_atomic(Path(args.canonical), mu.to_json())
    if args.out:
        out = Path(args.out)
        write_atomic(out / "validate.json", dump_json(totals))
        write_manifest(args, out, args.input)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="chargesweep", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("kernel", help="evaluate the harmonic measure or the genus-1 charge")
    p.add_argument("action", nargs="?", choices=["eval"], default="eval")
    p.add_argument("--z", required=True, help="point as re,im")
    p.add_argument("--y1", type=float, required=True)
    p.add_argument("--y2", type=float, required=True)
    p.add_argument("--genus", type=int, choices=[0, 1], default=0)
    p.add_argument("--out")
    p.set_defaults(func=cmd_kernel)

    p = sub.add_parser("balayage", help="sweep a measure onto the imaginary axis")
    p.add_argument("input")
    p.add_argument("--genus", choices=["0", "1", "01", "two-sided"], default="01")
    p.add_argument("--r0", type=float)
    p.add_argument("--ygrid", default="-10:10:0.01")
    p.add_argument("--out", default="out")
    p.set_defaults(func=cmd_balayage)

    p = sub.add_parser("growth", help="order, type and convergence-class integral")
    p.add_argument("input")
    p.add_argument("--rmin", type=float, default=1.0)
    p.add_argument("--rmax", type=float, default=1e4)
    p.add_argument("--per-decade", type=int, default=64)
    p.add_argument("--p", type=float, default=1.0)
    p.add_argument("--tail-fraction", type=float, default=0.5)
    p.add_argument("--class-p", type=int, default=2)
    p.add_argument("--out", default="out")
    p.set_defaults(func=cmd_growth)

    p = sub.add_parser("lindelof", help="annulus integrals of 1/z over a radius grid")
    p.add_argument("input")
    p.add_argument("--kind", choices=["re", "im", "full", "replus"], default="full")
    p.add_argument("--rmin", type=float, default=1.0)
    p.add_argument("--rmax", type=float, default=1e4)
    p.add_argument("--per-decade", type=int, default=64)
    p.add_argument("--inner", type=float, default=1.0)
    p.add_argument("--out", default="out")
    p.set_defaults(func=cmd_lindelof)

    p = sub.add_parser("harness", help="seeded checks of the sector theorem")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--n-atoms", type=int, default=20)
    p.add_argument("--a", type=float, default=0.5)
    p.add_argument("--d", type=float, default=0.5)
    p.add_argument("--radius-law", default="geometric:1.25")
    p.add_argument("--weight-law", default="alternating")
    p.add_argument("--weight-growth", type=float, default=0.5)
    p.add_argument("--seeds", type=int, default=1, help="number of consecutive seeds")
    p.add_argument("--out", default="out")
    p.set_defaults(func=cmd_harness)

    p = sub.add_parser("validate", help="check a measure file and print its mass totals")
    p.add_argument("input")
    p.add_argument("--canonical", help="write the canonical form of the file here")
    p.add_argument("--out")
    p.set_defaults(func=cmd_validate)
    return parser


def _fail(err: ChargeSweepError) -> int:
    print(json.dumps(err.to_dict(), sort_keys=True, default=str), file=sys.stderr)
    return EXIT_INPUT if isinstance(err, (ValidationError, DomainError)) else EXIT_NUMERIC


_NEGATIVE_VALUE = re.compile(r"^-\.?\d")


def _attach_negative_values(argv):
    """Turn ``--flag -1,0`` into ``--flag=-1,0`` so argparse accepts it."""
    out = []
    for tok in argv:
        if out and _NEGATIVE_VALUE.match(tok) and out[-1].startswith("--") and "=" not in out[-1]:
            out[-1] = f"{out[-1]}={tok}"
        else:
            out.append(tok)
    return out


def run(argv=None) -> int:
    parser = build_parser()
    argv = _attach_negative_values(sys.argv[1:] if argv is None else list(argv))
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_INPUT
    if getattr(args, "seeds", 1) < 1:
        return _fail(ValidationError("--seeds must be >= 1", seeds=args.seeds))
    try:
        return args.func(args)
    except ChargeSweepError as err:
        return _fail(err)
    except (FloatingPointError, ZeroDivisionError, OverflowError) as exc:
        print(json.dumps({"code": "numeric", "message": str(exc), "context": {}}), file=sys.stderr)
        return EXIT_NUMERIC


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
