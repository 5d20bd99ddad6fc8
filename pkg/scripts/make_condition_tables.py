#!/usr/bin/env python3
"""Regenerate the three condition-number tables as CSV files.

Sweeps n = 1..30 for the generable schemes on the disk (plain Zernike
basis), the hexagon (1/R-weighted basis), and the annulus a=0.5, A=1 with
inner-node shift 0.01 (sqrt-Jacobian basis).  Supply --node-dir to add the
file-based lebesgue/fekete columns.
"""

import argparse
import pathlib
import sys

from zernkit.cli import main as zernkit_main

SCHEMES = "cuyt,carnicer,ocs"


def run(out_dir, node_dir=None, orders="1..30"):
    out_dir = pathlib.Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    extra = ["--node-dir", node_dir] if node_dir else []
    schemes = SCHEMES + (",lebesgue,fekete" if node_dir else "")
    jobs = [
        ("disk_zernike.csv", ["--domain", "disk", "--basis", "Z"]),
        ("hexagon_weighted.csv", ["--domain", "hexagon", "--basis", "H"]),
        ("annulus_sqrt_jacobian.csv",
         ["--domain", "annulus", "--basis", "O", "--a", "0.5", "--eps", "0.01"]),
    ]
    for name, args in jobs:
        target = out_dir / name
        code = zernkit_main(
            ["condition-table", "--schemes", schemes, "--orders", orders,
             "--output", str(target)] + args + extra
        )
        if code != 0:
            return code
        print(f"wrote {target}", file=sys.stderr)
    return 0


if __name__ == "__main__":
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--out-dir", default="results")
    parser.add_argument("--node-dir", default=None)
    parser.add_argument("--orders", default="1..30")
    ns = parser.parse_args()
    raise SystemExit(run(ns.out_dir, ns.node_dir, ns.orders))
