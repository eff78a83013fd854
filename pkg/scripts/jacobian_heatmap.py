#!/usr/bin/env python3
"""Heatmap of the normalized frequency-map Jacobian over one type box."""

import argparse

from confocal.cli import main as cli_main

if __name__ == "__main__":
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--axes", default="1,0.58,0.46")
    ap.add_argument("--sigma", default="h1h1")
    ap.add_argument("--res", default="32")
    ap.add_argument("--out", default="jacobian_heatmap")
    args = ap.parse_args()
    raise SystemExit(cli_main([
        "freq-grid", "--axes", args.axes, "--sigma", args.sigma,
        "--res", args.res, "--out", args.out + ".csv",
        "--svg", args.out + ".svg"]))
