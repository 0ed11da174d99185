#!/usr/bin/env python3
"""Reproduce the wall-profile figure data.

Runs the two built-in wall presets: figure1 (profiles at b=3 and b=10,
L=9) and figure2 (b=10 sharpness comparison over L in {3, 6, 9}), and
drops the CSV output into one directory.
"""

import argparse

from kessence.cli import run_wall
from kessence.config import preset_config


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out", default="out/figures", help="output directory")
    ap.add_argument("--quiet", action="store_true")
    args = ap.parse_args()

    import os
    os.makedirs(args.out, exist_ok=True)
    for name in ("figure1", "figure2"):
        run_wall(preset_config(name), args.out, quiet=args.quiet)


if __name__ == "__main__":
    main()
