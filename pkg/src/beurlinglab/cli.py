"""Command line runner: ``beurlinglab <experiment> [options]``.

Settings are resolved as flags > config file > built-in defaults.
Exit status: 0 when every checked row passes, 1 when any row fails,
2 for usage errors (argparse), 3 when the config or report file cannot be
read or written.
"""
from __future__ import annotations

import argparse
import sys
import time
from dataclasses import asdict

from .experiments import EXPERIMENTS
from .report import ExperimentConfig, ExperimentReport, emit, render

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_IO = 0, 1, 2, 3

# experiment-specific flags: name -> (flag, type, help)
EXTRA = {
    "kappa": [("n", int, "order n"), ("p", float, "exponent p"), ("nmax", int, "table size for the scan")],
    "lehto": [("n", int, "order n (1 or 2)"), ("p", float, "exponent p > 2"), ("alpha", float, "alpha < 1/p")],
    "beltrami": [("K", float, "stretch distortion K")],
    "sharpness": [("alphas", str, "comma separated alphas in [0, 2)")],
    "spectrum": [("theta", float, "lattice-exact angle")],
    "apply": [("direct", int, "1 to include the direct kernel check")],
}


def _tol_pair(text: str) -> tuple[str, float]:
    name, sep, value = text.partition("=")
    if not sep:
        raise argparse.ArgumentTypeError(f"expected NAME=VALUE, got {text!r}")
    try:
        return name.strip(), float(value)
    except ValueError:
        raise argparse.ArgumentTypeError(f"tolerance {name!r} is not a number") from None


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--grid", type=int, help="grid size N (power of two)")
    common.add_argument("--extent", type=float, help="box side L")
    common.add_argument("--seed", type=int, help="RNG seed")
    common.add_argument("--out", help="write the report to this path")
    common.add_argument("--format", choices=("json", "csv"), help="report format")
    common.add_argument("--tol", type=_tol_pair, action="append", default=[], metavar="NAME=VALUE", help="override a named tolerance")
    common.add_argument("--config", help="INI file with [run], [params] and [tol] sections")

    ap = argparse.ArgumentParser(prog="beurlinglab", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="experiment", required=True, metavar="experiment")
    for name in list(EXPERIMENTS) + ["all"]:
        sp = sub.add_parser(name, parents=[common])
        for flag, kind, text in EXTRA.get(name, []):
            sp.add_argument(f"--{flag}", type=kind, help=text)
    return ap


def resolve(args: argparse.Namespace) -> ExperimentConfig:
    if args.config:
        with open(args.config) as fh:
            cfg = ExperimentConfig.from_ini(fh.read())
        cfg.experiment = args.experiment
    else:
        cfg = ExperimentConfig(args.experiment)
    for attr, flag in (("size", "grid"), ("extent", "extent"), ("seed", "seed"), ("out", "out"), ("format", "format")):
        v = getattr(args, flag)
        if v is not None:
            setattr(cfg, attr, v)
    for flag, _, _ in EXTRA.get(args.experiment, []):
        v = getattr(args, flag, None)
        if v is not None:
            cfg.params[flag] = str(v)
    cfg.tol.update(dict(args.tol))
    return cfg


def run(cfg: ExperimentConfig) -> ExperimentReport:
    names = list(EXPERIMENTS) if cfg.experiment == "all" else [cfg.experiment]
    t0 = time.perf_counter()
    rep = ExperimentReport(cfg.experiment, asdict(cfg))
    for name in names:
        part = EXPERIMENTS[name](cfg)
        for r in part.rows:
            if len(names) > 1:
                r.quantity = f"{name}.{r.quantity}"
            rep.rows.append(r)
    rep.elapsed_s = round(time.perf_counter() - t0, 3)
    return rep


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = resolve(args)
    except (OSError, KeyError, ValueError) as exc:
        print(f"beurlinglab: cannot read config: {exc}", file=sys.stderr)
        return EXIT_IO
    rep = run(cfg)
    try:
        if cfg.out:
            emit(rep, cfg.out, cfg.format)
        else:
            sys.stdout.write(render(rep, cfg.format))
    except OSError as exc:
        print(f"beurlinglab: cannot write report: {exc}", file=sys.stderr)
        return EXIT_IO
    for r in rep.rows:
        if r.verdict == "fail":
            print(f"FAIL {r.quantity}: measured {r.measured}, reference {r.reference}", file=sys.stderr)
    return EXIT_FAIL if rep.failed else EXIT_OK
