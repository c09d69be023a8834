#!/usr/bin/env python3
"""Batch verification across the built-in models.

Validates every model atlas, runs the five-checker suite on the natural
bicombing of each space, and prints one line per check.  Exit status is 0
iff everything passed.
"""

import argparse
import sys
import time

import numpy as np

from geocomb.bicombing import linear_bicombing, make_plan, run_checker_suite, shortest_arc_bicombing, solver_bicombing
from geocomb.localglobal import validate_atlas
from geocomb.models import make_cycle, make_cylinder, make_rectangle, make_tree, make_tripod, random_tree_edges


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--pairs", type=int, default=20)
    args = ap.parse_args()
    rng = np.random.default_rng(args.seed)

    models = [
        make_cycle(12),
        make_cylinder(12, 4),
        make_rectangle(3, 2),
        make_tree(random_tree_edges(7, np.random.default_rng(args.seed + 1))),
        make_tripod(1.0, 2.0, 1.5),
    ]
    handles = {
        "cycle": lambda m: shortest_arc_bicombing(m.space, ball=(0.0, 2.0)),
        "cylinder": lambda m: shortest_arc_bicombing(m.space, ball=(np.array([0.0, 1.0]), 2.0)),
        "rectangle": lambda m: linear_bicombing(m.space),
        "tree": lambda m: shortest_arc_bicombing(m.space),
        "tripod": lambda m: solver_bicombing(m.space, depth=6),
    }

    all_ok = True
    for model in models:
        t0 = time.perf_counter()
        reports = validate_atlas(model.atlas, rng, n_pairs=6)
        for rep in reports:
            all_ok &= rep.passed
            mark = "ok " if rep.passed else "FAIL"
            print(f"{model.name:10s} atlas      {rep.name:18s} {mark} residual {rep.worst_residual:9.2e}")
        ball = handles[model.name](model)
        if ball.domain == "global":
            plan = make_plan(model.space, rng, n_pairs=args.pairs, n_quadruples=args.pairs)
        else:
            _, center, radius = ball.domain
            plan = make_plan(model.space, rng, n_pairs=args.pairs, n_quadruples=args.pairs, ball=(center, radius))
        for rep in run_checker_suite(ball, plan):
            all_ok &= rep.passed
            mark = "ok " if rep.passed else "FAIL"
            print(f"{model.name:10s} bicombing  {rep.name:18s} {mark} residual {rep.worst_residual:9.2e}")
        print(f"{model.name:10s} ({time.perf_counter() - t0:.1f}s)")
        print()
    print("ALL PASS" if all_ok else "FAILURES PRESENT")
    return 0 if all_ok else 1


if __name__ == "__main__":
    sys.exit(main())
