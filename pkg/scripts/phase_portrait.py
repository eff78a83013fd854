#!/usr/bin/env python3
"""Render the planar phase portrait with invariant curves and separatrix."""

import argparse

from confocal.cli import main as cli_main

if __name__ == "__main__":
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--axes", default="1,4/9")
    ap.add_argument("--out", default="phase_portrait.svg")
    args = ap.parse_args()
    raise SystemExit(cli_main([
        "phase-portrait", "--axes", args.axes, "--out", args.out]))
