import csv
import json
import subprocess
import sys

import numpy as np
import pytest

from vaxfront import cli


def write_model(tmp_path, doc, name="m.json"):
    p = tmp_path / name
    p.write_text(json.dumps(doc))
    return str(p)


@pytest.fixture
def asym5(tmp_path):
    return write_model(tmp_path, {"type": "asym_circle", "params": {"N": 5}})


def test_parse_grid():
    g = cli.parse_grid("0:1:0.05")
    assert len(g) == 21 and g[3] == 0.15 and g[-1] == 1.0
    assert cli.parse_grid("0.2:0.2:0.1") == [0.2]
    for bad in ("0.5:0.2:0.1", "0:1:0", "0:1", "a:b:c", "0:2:0.5"):
        with pytest.raises(cli.ConfigError):
            cli.parse_grid(bad)


def test_frontier_asym_rows(asym5, tmp_path):
    out = tmp_path / "f.csv"
    rc = cli.main(["frontier", "--model", asym5, "--scan", "off", "--side", "pareto",
                   "--out", str(out)])
    assert rc == 0
    rows = cli.read_frontier_csv(out)
    assert len(rows) == 21
    for r in rows:
        assert r["side"] == "pareto" and r["source"] == "analytic"
        assert r["value"] == pytest.approx(max(0.0, 1 - 5 * r["cost"]) ** 0.2, abs=1e-11)
    with open(out) as fh:
        assert fh.readline().strip() == "cost,value,side,source,strategy"


def test_csv_round_trip_and_order(asym5, tmp_path):
    out = tmp_path / "f.csv"
    assert cli.main(["frontier", "--model", asym5, "--grid", "0:1:0.1", "--restarts", "2",
                     "--local-steps", "30", "--out", str(out)]) == 0
    with open(out, newline="") as fh:
        rows = list(csv.reader(fh))[1:]
    for r in rows:
        assert cli.fmt(float(r[0])) == r[0] and cli.fmt(float(r[1])) == r[1]
        assert all(cli.fmt(float(x)) == x for x in r[4].split(";"))
    keys = [(r[2], r[3], float(r[0])) for r in rows]
    assert keys == sorted(keys)
    assert {(r[2], r[3]) for r in rows} == {("anti", "analytic"), ("anti", "scan"),
                                            ("pareto", "analytic"), ("pareto", "scan")}


def test_sphere_rows(tmp_path):
    m = write_model(tmp_path, {"type": "sphere_affine",
                               "params": {"a": 1, "b": -1, "d": 2, "cells": 256}})
    out = tmp_path / "s.csv"
    assert cli.main(["frontier", "--model", m, "--scan", "off", "--grid", "0:1:0.25",
                     "--out", str(out)]) == 0
    rows = cli.read_frontier_csv(out)
    anti = [r for r in rows if r["side"] == "anti"]
    assert [r["value"] for r in anti] == pytest.approx([1 - r["cost"] for r in anti], abs=1e-12)
    pareto = [r for r in rows if r["side"] == "pareto"]
    assert all(r["value"] <= 1 - r["cost"] + 1e-12 for r in pareto)


def test_exit_codes(asym5, tmp_path, capsys):
    assert cli.main(["frontier", "--model", asym5, "--grid", "0.5:0.2:0.1"]) == 2
    assert "--grid" in capsys.readouterr().err
    assert cli.main(["frontier", "--model", str(tmp_path / "missing.json")]) == 2
    bad = write_model(tmp_path, {"type": "assortative", "params": {"a": 5},
                                 "population": {"uniform": 3}}, "bad.json")
    assert cli.main(["frontier", "--model", bad]) == 2
    assert "params.b" in capsys.readouterr().err
    assert cli.main(["frontier", "--model", asym5, "--seed", "-1"]) == 2
    assert cli.main(["frontier", "--model", asym5, "--side", "up"]) == 2
    dense = write_model(tmp_path, {"type": "dense", "params": {"K": [[1, 2], [0.5, 1]]}}, "d.json")
    assert cli.main(["frontier", "--model", dense, "--scan", "off"]) == 3
    assert cli.main(["verify", "no-such-suite"]) == 2


def test_verify_ok_and_output(capsys):
    assert cli.main(["verify", "fourier-square", "sphere-spectra"]) == 0
    out = capsys.readouterr().out
    assert "[PASS] fourier-square" in out and "measured" in out and "limit" in out


def test_verify_failure_exit(monkeypatch):
    from vaxfront import verify
    failing = ("always fails", lambda: [verify.Check("x", False, 1.0, 0.0)], None)
    monkeypatch.setitem(verify.SUITES, "broken", failing)
    assert cli.main(["verify", "broken"]) == 4


def test_model_defaults_and_override(tmp_path):
    m = write_model(tmp_path, {"type": "asym_circle", "params": {"N": 3},
                               "defaults": {"grid": "0:1:0.5", "scan": "off", "side": "anti"}})
    out = tmp_path / "a.csv"
    assert cli.main(["frontier", "--model", m, "--out", str(out)]) == 0
    assert len(cli.read_frontier_csv(out)) == 3
    assert cli.main(["frontier", "--model", m, "--grid", "0:1:0.25", "--out", str(out)]) == 0
    assert len(cli.read_frontier_csv(out)) == 5


def test_plotdata(tmp_path):
    m = write_model(tmp_path, {"type": "staircase_rank2", "params": {"N": 11},
                               "population": {"grid": 1024}})
    out = tmp_path / "plots"
    args = ["plotdata", "--model", m, "--out", str(out), "--scan", "off",
            "--grid", "0:1:0.1", "--samples", "100", "--delta-points", "5000"]
    assert cli.main(args) == 0
    files = {p.name: p.read_text() for p in out.iterdir()}
    assert set(files) == {"frontier.csv", "cloud.csv", "delta.csv"}
    assert files["cloud.csv"].startswith("cost,value,kind\n")
    assert files["delta.csv"].startswith("t,delta\n")
    rows = list(csv.DictReader(files["cloud.csv"].splitlines()))
    for r in rows:
        if r["kind"] == "uniform":
            assert float(r["value"]) == pytest.approx(1 - float(r["cost"]), abs=1e-10)
    first = dict(files)
    assert cli.main(args) == 0
    assert {p.name: p.read_text() for p in out.iterdir()} == first
    assert not [p for p in out.iterdir() if p.name.startswith(".")]


def test_model_show(asym5, capsys):
    assert cli.main(["model", "show", "--model", asym5]) == 0
    info = json.loads(capsys.readouterr().out)
    assert info["type"] == "asym_circle" and info["classes"] == 5
    assert info["R0"] == pytest.approx(1.0)
    assert info["pareto_c_star"] == pytest.approx(0.2)


def test_module_entry_point(asym5):
    res = subprocess.run([sys.executable, "-m", "vaxfront", "frontier", "--model", asym5,
                          "--scan", "off", "--grid", "0:0.2:0.1", "--side", "pareto"],
                         capture_output=True, text=True)
    assert res.returncode == 0
    assert res.stdout.splitlines()[0] == "cost,value,side,source,strategy"
    res = subprocess.run([sys.executable, "-m", "vaxfront", "frontier"],
                         capture_output=True, text=True)
    assert res.returncode == 2
