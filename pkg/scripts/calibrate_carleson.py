"""Recompute the Carleson constant calibration over the stress family of dyadic weights."""
import argparse

from beurlinglab.dyadic import CARLESON_C0, calibrate_carleson_constant


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--depth", type=int, default=8)
    ap.add_argument("--count", type=int, default=200)
    args = ap.parse_args()
    cal = calibrate_carleson_constant(args.seed, args.depth, args.count)
    print(f"weights={cal.weights} alphas={cal.alphas}")
    print(f"smallest local Bellman constant c_min = {cal.c_min:.8f}")
    print(f"calibrated C0 = 2 / c_min = {cal.c0:.6f} (frozen value {CARLESON_C0})")


if __name__ == "__main__":
    main()
