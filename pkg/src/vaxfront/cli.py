"""vaxfront command line.

    vaxfront frontier --model m.json [--grid 0:1:0.05] [--side both] [--scan on] [--out f.csv]
    vaxfront plotdata --model m.json --out DIR
    vaxfront verify [suite ...]
    vaxfront model show --model m.json

Exit codes: 0 ok, 2 usage or config error, 3 unsupported operation,
4 verification failure.
"""

import argparse
import csv
import io
import json
import math
import os
from pathlib import Path
import sys
import tempfile

import numpy as np

from . import analytic, frontier, models, verify
from .analytic import ANTI, PARETO
from .config import ConfigError, load_model_file

EXIT_OK, EXIT_USAGE, EXIT_UNSUPPORTED, EXIT_VERIFY = 0, 2, 3, 4
FRONTIER_HEADER = ["cost", "value", "side", "source", "strategy"]
CLOUD_HEADER = ["cost", "value", "kind"]
DELTA_HEADER = ["t", "delta"]
DEFAULTS = {"grid": "0:1:0.05", "side": "both", "seed": 42, "scan": "on",
            "restarts": 32, "local_steps": 2000, "samples": 1000}


class Unsupported(RuntimeError):
    pass


def fmt(x):
    return f"{float(x):.12g}"


def parse_grid(text):
    """'start:stop:step' -> costs start, start+step, ... <= stop (stop included)."""
    try:
        start, stop, step = (float(p) for p in str(text).split(":"))
    except ValueError:
        raise ConfigError("--grid", f"expected start:stop:step, got {text!r}")
    if not all(map(math.isfinite, (start, stop, step))) or step <= 0:
        raise ConfigError("--grid", "step must be a positive finite number")
    if start < 0 or stop > 1:
        raise ConfigError("--grid", "costs must lie in [0, 1]")
    count = math.floor((stop - start) / step + 1e-9) + 1
    if count < 1:
        raise ConfigError("--grid", f"empty cost grid {text!r}")
    # snap to the step lattice so 0:1:0.05 gives exactly 0.05 k
    return [min(stop, round(start + k * step, 12)) for k in range(count)]


def parse_seed(value):
    try:
        seed = int(value)
    except (TypeError, ValueError):
        raise ConfigError("--seed", f"expected an integer, got {value!r}")
    if not 0 <= seed < 2 ** 64:
        raise ConfigError("--seed", "must be an unsigned 64-bit integer")
    return seed


def resolve(args, defaults):
    """Flag value, else model-file default, else built-in default."""
    out = {}
    for key, fallback in DEFAULTS.items():
        val = getattr(args, key, None)
        out[key] = val if val is not None else defaults.get(key, fallback)
    if out["side"] not in (PARETO, ANTI, "both"):
        raise ConfigError("--side", f"expected pareto, anti or both, got {out['side']!r}")
    if out["scan"] not in ("on", "off"):
        raise ConfigError("--scan", f"expected on or off, got {out['scan']!r}")
    out["seed"] = parse_seed(out["seed"])
    out["costs"] = parse_grid(out["grid"])
    for key in ("restarts", "local_steps", "samples"):
        try:
            out[key] = int(out[key])
        except (TypeError, ValueError):
            raise ConfigError(f"--{key.replace('_', '-')}", f"expected an integer, got {out[key]!r}")
    return out


def write_atomic(path, text):
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(prefix=f".{path.name}.", dir=path.parent)
    try:
        with os.fdopen(fd, "w", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def to_csv(header, rows):
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    return buf.getvalue()


def frontier_rows(model, opts):
    sides = [PARETO, ANTI] if opts["side"] == "both" else [opts["side"]]
    formulas = analytic.analytic_frontiers(model)
    missing = [s for s in sides if s not in formulas]
    if missing and opts["scan"] == "off":
        raise Unsupported(f"no analytic formula for side {', '.join(missing)} of "
                          f"model {model.tag!r} and --scan is off")
    rows = []
    for side in sides:
        if side in formulas:
            f = formulas[side]
            for c in opts["costs"]:
                rows.append((side, "analytic", c, f.evaluate(c), f.strategy_at(c)))
        if opts["scan"] == "on":
            cfg = frontier.ScanConfig(opts["costs"], restarts=opts["restarts"],
                                      local_steps=opts["local_steps"], seed=opts["seed"])
            for p in frontier.scan(model, side, cfg):
                rows.append((side, "scan", p.cost, p.value, p.strategy))
    rows.sort(key=lambda r: (r[0], r[1], r[2]))
    return [[fmt(c), fmt(v), side, src, ";".join(fmt(x) for x in eta)]
            for side, src, c, v, eta in rows]


def read_frontier_csv(path):
    """Parse a frontier CSV back into dicts with float cost/value and an array strategy."""
    with open(path, newline="") as fh:
        r = csv.reader(fh)
        header = next(r)
        if header != FRONTIER_HEADER:
            raise ValueError(f"unexpected header {header}")
        return [{"cost": float(c), "value": float(v), "side": s, "source": src,
                 "strategy": np.array([float(x) for x in eta.split(";")])}
                for c, v, s, src, eta in r]


def emit(text, out):
    if out in (None, "-"):
        sys.stdout.write(text)
    else:
        write_atomic(out, text)


def cmd_frontier(args):
    model, defaults = load_model_file(args.model)
    opts = resolve(args, defaults)
    emit(to_csv(FRONTIER_HEADER, frontier_rows(model, opts)), args.out)
    return EXIT_OK


def cmd_plotdata(args):
    model, defaults = load_model_file(args.model)
    opts = resolve(args, defaults)
    if opts["samples"] < 1:
        raise ConfigError("--samples", "must be >= 1")
    out = Path(args.out)
    if out.exists() and not out.is_dir():
        raise ConfigError("--out", f"{out} exists and is not a directory")
    front = to_csv(FRONTIER_HEADER, frontier_rows(model, opts))
    cloud = []
    for kind in ("random", "uniform"):
        pts = frontier.outcome_cloud(model, opts["samples"], seed=opts["seed"], kind=kind)
        cloud += [[fmt(c), fmt(v), kind] for c, v in pts]
    write_atomic(out / "frontier.csv", front)
    write_atomic(out / "cloud.csv", to_csv(CLOUD_HEADER, cloud))
    if isinstance(model, models.RankTwo):
        curve = analytic.delta_curve(model, grid=args.delta_points)
        write_atomic(out / "delta.csv",
                     to_csv(DELTA_HEADER, [[fmt(t), fmt(d)] for t, d in curve]))
    return EXIT_OK


def cmd_verify(args):
    ids = args.suites or list(verify.SUITES)
    unknown = [s for s in ids if s not in verify.SUITES]
    if unknown:
        print(f"error: unknown suite id(s) {', '.join(unknown)}; "
              f"choose from {', '.join(verify.SUITES)}", file=sys.stderr)
        return EXIT_USAGE
    ok = True
    for sid in ids:
        res = verify.run_suite(sid)
        ok &= res.passed
        print(f"[{'PASS' if res.passed else 'FAIL'}] {sid}: {res.title} ({res.seconds:.2f} s)")
        for check in res.checks:
            print(f"    {check.line()}")
    return EXIT_OK if ok else EXIT_VERIFY


def describe(model):
    formulas = analytic.analytic_frontiers(model)
    info = {"type": model.tag, "classes": model.n, "R0": model.R0,
            "symmetric": model.symmetric,
            "analytic_sides": sorted(formulas)}
    for side, f in sorted(formulas.items()):
        info[f"{side}_c_star"] = f.c_star
        info[f"{side}_c_upper_star"] = f.c_upper_star
    return info


def cmd_model_show(args):
    model, _ = load_model_file(args.model)
    print(json.dumps(describe(model), indent=2))
    return EXIT_OK


def build_parser():
    p = argparse.ArgumentParser(prog="vaxfront", description=__doc__.split("\n")[0])
    sub = p.add_subparsers(dest="command", required=True)

    def run_flags(sp):
        sp.add_argument("--model", required=True, help="model file (JSON)")
        sp.add_argument("--grid", help="cost grid start:stop:step, stop included (default 0:1:0.05)")
        sp.add_argument("--side", help="pareto, anti or both (default both)")
        sp.add_argument("--seed", help="unsigned 64-bit seed (default 42)")
        sp.add_argument("--scan", help="on or off: run the numerical scan (default on)")
        sp.add_argument("--restarts", help="scan restarts per cost (default 32)")
        sp.add_argument("--local-steps", dest="local_steps", help="scan steps per restart (default 2000)")

    f = sub.add_parser("frontier", help="analytic and scanned frontier as CSV")
    run_flags(f)
    f.add_argument("--out", help="output CSV (default stdout)")
    f.set_defaults(func=cmd_frontier)

    d = sub.add_parser("plotdata", help="frontier.csv, cloud.csv and delta.csv for plotting")
    run_flags(d)
    d.add_argument("--out", required=True, help="output directory")
    d.add_argument("--samples", help="outcome-cloud points per kind (default 1000)")
    d.add_argument("--delta-points", type=int, default=100_000, help="delta curve grid size")
    d.set_defaults(func=cmd_plotdata)

    v = sub.add_parser("verify", help="run acceptance suites")
    v.add_argument("suites", nargs="*", help=f"suite ids (default all): {', '.join(verify.SUITES)}")
    v.set_defaults(func=cmd_verify)

    m = sub.add_parser("model", help="model utilities")
    msub = m.add_subparsers(dest="action", required=True)
    show = msub.add_parser("show", help="summary of a model file")
    show.add_argument("--model", required=True)
    show.set_defaults(func=cmd_model_show)
    return p


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (models.UnsupportedStrategyShape, Unsupported) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_UNSUPPORTED
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
