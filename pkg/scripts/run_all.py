"""Run every experiment and write one JSON report per experiment into a directory."""
import argparse
from pathlib import Path

from beurlinglab.cli import run
from beurlinglab.experiments import EXPERIMENTS
from beurlinglab.report import ExperimentConfig, emit


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--outdir", default="reports")
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()
    out = Path(args.outdir)
    out.mkdir(parents=True, exist_ok=True)
    failed = []
    for name in EXPERIMENTS:
        rep = run(ExperimentConfig(name, seed=args.seed))
        emit(rep, out / f"{name}.json")
        status = "FAIL" if rep.failed else "ok"
        print(f"{name:10s} {status:4s} {len(rep.rows):3d} rows  {rep.elapsed_s:7.2f} s")
        if rep.failed:
            failed.append(name)
    raise SystemExit(1 if failed else 0)


if __name__ == "__main__":
    main()
