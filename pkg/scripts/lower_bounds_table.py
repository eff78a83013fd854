#!/usr/bin/env python3
"""Print the minimal-period lower-bound table by caustic type."""

import argparse

from confocal.periodic import kappa_table

if __name__ == "__main__":
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--n", type=int, default=2)
    args = ap.parse_args()
    table = kappa_table(args.n)
    width = 2 * args.n + 6
    print(f"{'sigma':<{width}} kappa")
    for sigma, kappa in sorted(table.items()):
        print(f"{','.join(map(str, sigma)):<{width}} {kappa}")
    print(f"mean: {sum(table.values()) / len(table):g} "
          f"(expected 3n/2+2 = {1.5 * args.n + 2:g})")
