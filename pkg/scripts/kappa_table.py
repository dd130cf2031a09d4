"""Print kappa_n(p), the bound n^{1-2/p}(p-1) and their ratio for small n and p."""
import argparse

import numpy as np

from beurlinglab.norm_lab import LOWER_RATIO, kappa, kappa_bound, ratio_scan


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--nmax", type=int, default=8)
    ap.add_argument("--ps", default="2,3,4,8,16,64")
    args = ap.parse_args()
    ps = [float(p) for p in args.ps.split(",")]
    print("  n " + "".join(f"{'p=' + format(p, 'g'):>22s}" for p in ps))
    for n in range(1, args.nmax + 1):
        cells = (f"{kappa(n, p):10.4f} ({kappa(n, p) / kappa_bound(n, p):.4f})" for p in ps)
        print(f"{n:3d} " + "".join(f"{c:>22s}" for c in cells))
    scan = ratio_scan(10_000, np.arange(2, 65))
    print(f"\nratio over n <= 1e4, p = 2..64: [{scan.min():.6f}, {scan.max():.6f}]; lower bound {LOWER_RATIO:.6f}")


if __name__ == "__main__":
    main()
