"""Weighted ratio ||Tf|| / ||f|| for the sector field against the A2 growth of |z|^alpha."""
import argparse

import numpy as np

from beurlinglab.field import make_grid
from beurlinglab.weights import SquareFamily, a2_estimate, power_weight, sharpness_experiment


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--grid", type=int, default=512)
    ap.add_argument("--extent", type=float, default=4.0)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--alphas", default="0,0.5,1,1.5,1.9")
    args = ap.parse_args()
    g = make_grid(args.extent, args.grid)
    fam = SquareFamily.build(g, np.random.default_rng(args.seed))
    print(f"{'alpha':>6s} {'norm_sq':>10s} {'rel_err':>9s} {'ratio':>8s} {'a2':>8s} {'a2^0.8':>8s}")
    for a in (float(t) for t in args.alphas.split(",")):
        r = sharpness_experiment(a, g)
        a2 = a2_estimate(power_weight(a, g), fam)
        print(f"{a:6.2f} {r.norm_f_sq:10.5f} {r.rel_error:9.2e} {r.ratio:8.4f} {a2:8.3f} {a2 ** 0.8:8.3f}")


if __name__ == "__main__":
    main()
