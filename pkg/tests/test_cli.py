import csv
import json

import numpy as np
import pytest

from chargesweep.cli import argv_from_manifest, parse_grid, run
from chargesweep.errors import ValidationError


@pytest.fixture
def measure(tmp_path):
    path = tmp_path / "measure.json"
    path.write_text(json.dumps({
        "atoms": [{"re": 0.015, "im": 0.5, "w": 1.0}, {"re": 0.015, "im": -0.45, "w": -0.25},
                  {"re": -2.0, "im": 1.0, "w": 3.0}],
        "axis_atoms": [{"y": 4.0, "w": 0.5}],
    }))
    return path


def read_csv(path):
    with open(path, newline="") as fh:
        return list(csv.reader(fh))


def test_kernel_prints_half(capsys):
    assert run(["kernel", "--z", "1,0", "--y1", "-1", "--y2", "1", "--genus", "0"]) == 0
    assert capsys.readouterr().out.strip() == "0.5"


def test_kernel_eval_form(capsys):
    assert run(["kernel", "eval", "--z", "1,0", "--y1", "-1", "--y2", "1", "--genus", "1"]) == 0
    assert float(capsys.readouterr().out) == pytest.approx(0.5 - 2 / np.pi, abs=1e-16)


def test_validate_and_canonical(measure, tmp_path, capsys):
    canon = tmp_path / "canon.json"
    assert run(["validate", str(measure), "--canonical", str(canon)]) == 0
    totals = json.loads(capsys.readouterr().out)
    assert totals["signed_mass"] == pytest.approx(4.25)
    assert totals["total_variation"] == pytest.approx(4.75)
    again = tmp_path / "again.json"
    assert run(["validate", str(canon), "--canonical", str(again)]) == 0
    assert again.read_bytes() == canon.read_bytes()


def test_balayage_grid_mass(measure, tmp_path):
    out = tmp_path / "bal"
    assert run(["balayage", str(measure), "--genus", "01", "--r0", "1", "--ygrid", "-10:10:0.01",
                "--out", str(out)]) == 0
    rows = read_csv(out / "balayage.csv")
    assert rows[0] == ["y", "density", "distribution"]
    data = np.array(rows[1:], dtype=float)
    assert data.shape == (2001, 3)
    mass = np.sum(data[:-1, 1] * np.diff(data[:, 0]))
    assert mass == pytest.approx(0.75, abs=1e-3)
    side = json.loads((out / "balayage.json").read_text())
    assert side["r0"] == 1.0 and side["genus_used"] == "01"
    manifest = json.loads((out / "manifest.json").read_text())
    assert manifest["command"] == "balayage" and manifest["params"]["ygrid"] == "-10:10:0.01"
    assert b"\r" not in (out / "balayage.csv").read_bytes()


def test_manifest_replay(measure, tmp_path):
    first = tmp_path / "a"
    assert run(["lindelof", str(measure), "--kind", "im", "--rmax", "100", "--out", str(first)]) == 0
    manifest = json.loads((first / "manifest.json").read_text())
    second = tmp_path / "b"
    assert run(argv_from_manifest(manifest, second)) == 0
    assert (first / "lindelof.csv").read_bytes() == (second / "lindelof.csv").read_bytes()
    assert read_csv(first / "lindelof.csv")[0] == ["r", "partial", "sup_so_far", "complex_re", "complex_im"]


def test_growth_command(measure, tmp_path):
    assert run(["growth", str(measure), "--out", str(tmp_path)]) == 0
    head, row = read_csv(tmp_path / "growth.csv")
    assert head[0] == "order_estimate" and row[-1] in ("true", "false")


def test_harness_command(tmp_path):
    argv = ["harness", "--seed", "3", "--n-atoms", "10", "--seeds", "2"]
    assert run(argv + ["--out", str(tmp_path / "x")]) == 0
    assert run(argv + ["--out", str(tmp_path / "y")]) == 0
    a = (tmp_path / "x" / "harness.csv").read_bytes()
    assert a == (tmp_path / "y" / "harness.csv").read_bytes()
    assert len(a.decode().strip().split("\n")) == 3
    summary = json.loads((tmp_path / "x" / "summary.json").read_text())
    assert summary["instances"] == 2
    assert json.loads((tmp_path / "x" / "manifest.json").read_text())["seed"] == 3


def test_error_contract(tmp_path, capsys):
    assert run(["validate", str(tmp_path / "missing.json")]) == 2
    err = json.loads(capsys.readouterr().err)
    assert set(err) == {"code", "message", "context"} and err["code"] == "validation"

    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    assert run(["validate", str(bad)]) == 2
    assert json.loads(capsys.readouterr().err)["code"] == "validation"

    origin = tmp_path / "origin.json"
    origin.write_text(json.dumps({"axis_atoms": [{"y": 0.0, "w": 1.0}]}))
    assert run(["balayage", str(origin), "--genus", "1", "--out", str(tmp_path / "o")]) == 3
    assert json.loads(capsys.readouterr().err)["code"] == "eligibility"

    assert run(["harness", "--a", "0.99", "--d", "0.5", "--n-atoms", "3", "--radius-law", "geometric:0.5"]) == 2
    assert run(["kernel", "--z", "-1,0", "--y1", "0", "--y2", "1"]) == 2
    assert run(["nosuch"]) == 2


def test_grid_syntax():
    assert np.allclose(parse_grid("0:1:0.25"), [0, 0.25, 0.5, 0.75, 1])
    assert np.allclose(parse_grid("log:1:100:1"), [1, 10, 100])
    assert parse_grid("log:1:100:64").size == 129
    for bad in ("1:0:1", "a:b:c", "1:2", "log:1:10"):
        with pytest.raises(ValidationError):
            parse_grid(bad)
