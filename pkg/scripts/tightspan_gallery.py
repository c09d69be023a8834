#!/usr/bin/env python3
"""Hulls of small metric spaces: cell counts, dimensions, and figures."""

import argparse
import sys
from pathlib import Path

import numpy as np

from geocomb.fileio import complex_to_json, dump_json
from geocomb.metric import validate_metric
from geocomb.spaces import random_graph_metric
from geocomb.svg import complex_svg, write_svg
from geocomb.tightspan import combinatorial_dimension, enumerate_cells


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out", type=str, default="hulls")
    ap.add_argument("--seeds", type=int, nargs="*", default=[0, 1, 2])
    ap.add_argument("--points", type=int, default=5)
    args = ap.parse_args()
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)

    cases = {
        "segment": validate_metric([[0, 1], [1, 0]]),
        "equilateral3": validate_metric(2.0 * (np.ones((3, 3)) - np.eye(3))),
    }
    for seed in args.seeds:
        cases[f"random{args.points}p-{seed}"] = random_graph_metric(
            args.points, np.random.default_rng(seed)
        )

    for name, dm in cases.items():
        cx = enumerate_cells(dm)
        by_dim = {}
        for c in cx.cells:
            by_dim[c.dim] = by_dim.get(c.dim, 0) + 1
        flag = " (degenerate ties)" if cx.degenerate else ""
        print(
            f"{name:16s} n={dm.n}  dim={combinatorial_dimension(cx)}  "
            f"cells by dim {dict(sorted(by_dim.items()))}{flag}"
        )
        dump_json(complex_to_json(cx), out / f"{name}.json")
        if dm.n <= 4:
            write_svg(out / f"{name}.svg", complex_svg(cx))
    print(f"complex files in {out}/")
    return 0


if __name__ == "__main__":
    sys.exit(main())
