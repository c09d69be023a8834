"""Independent oracles used across the test suite.

Everything here is deliberately separate from the library's own algorithms:
brute-force scans, LP feasibility via scipy, combinatorial tree arcs, and
closed-form developments.  The implementation under test must agree with
these, never the other way around.
"""

from __future__ import annotations

from itertools import combinations

import numpy as np
from scipy.optimize import linprog

from geocomb.hyperconvex import Witness
from geocomb.metric import DistanceMatrix


def brute_force_metric_check(d: np.ndarray, tol: float = 1e-9) -> bool:
    n = d.shape[0]
    for i in range(n):
        if abs(d[i, i]) > tol:
            return False
        for j in range(n):
            if d[i, j] < -tol or abs(d[i, j] - d[j, i]) > tol:
                return False
            if i != j and d[i, j] <= tol:
                return False
            for k in range(n):
                if d[i, j] > d[i, k] + d[k, j] + tol:
                    return False
    return True


def cycle_distance(n: int, a: float, b: float) -> float:
    delta = abs(a - b) % n
    return min(delta, n - delta)


def strip_line(circumference: float, start, end_lift, ts):
    """Straight segment in the plane strip, mapped back to the cylinder."""
    start = np.asarray(start, float)
    end_lift = np.asarray(end_lift, float)
    seg = start[None, :] + np.asarray(ts)[:, None] * (end_lift - start)[None, :]
    seg[:, 0] = np.mod(seg[:, 0], circumference)
    return [row.copy() for row in seg]


def tripod_arc_distance(legs, p, q) -> float:
    """Arc length between tripod points given as (leg index, offset)."""
    (i, s), (j, t) = p, q
    return abs(s - t) if i == j else s + t


def tripod_arc_point(legs, p, q, frac: float):
    """(leg, offset) of the point at parameter frac on the arc p -> q."""
    (i, s), (j, t) = p, q
    if i == j:
        return (i, s + frac * (t - s))
    total = s + t
    run = frac * total
    if run <= s:
        return (i, s - run)
    return (j, run - s)


# -- LP-feasibility cell oracle ------------------------------------------------


def _covers(pattern, n: int) -> bool:
    touched = set()
    for i, j in pattern:
        touched.update((i, j))
    return len(touched) == n


def lp_cell_oracle(dm: DistanceMatrix, tol: float = 1e-7) -> dict[frozenset, int]:
    """All exactly realized covering tight patterns with their dimensions.

    For every subset of pair constraints: maximize the uniform strict slack t
    of the off-pattern constraints subject to equality on the pattern.  The
    pattern labels a cell exactly when the optimum is positive; the cell's
    affine dimension is the nullity of its equality system.
    """
    n = dm.n
    pairs = [(i, j) for i in range(n) for j in range(i, n)]
    m = len(pairs)
    rows = np.zeros((m, n))
    rhs = np.zeros(m)
    for r, (i, j) in enumerate(pairs):
        rows[r, i] += 1.0
        rows[r, j] += 1.0
        rhs[r] = dm.d[i, j]

    out: dict[frozenset, int] = {}
    for mask in range(1, 2**m):
        pattern = [pairs[k] for k in range(m) if mask >> k & 1]
        if not _covers(pattern, n):
            continue
        on = [k for k in range(m) if mask >> k & 1]
        off = [k for k in range(m) if not mask >> k & 1]
        # variables: f_1..f_n, t; maximize t
        c = np.zeros(n + 1)
        c[-1] = -1.0
        a_eq = np.hstack([rows[on], np.zeros((len(on), 1))])
        b_eq = rhs[on]
        a_ub = None
        b_ub = None
        if off:
            a_ub = np.hstack([-rows[off], np.ones((len(off), 1))])
            b_ub = -rhs[off]
        res = linprog(
            c,
            A_ub=a_ub,
            b_ub=b_ub,
            A_eq=a_eq,
            b_eq=b_eq,
            bounds=[(None, None)] * n + [(None, 1.0)],
            method="highs",
        )
        if res.status != 0 or -res.fun <= tol:
            continue
        dim = n - np.linalg.matrix_rank(rows[on], tol=1e-8)
        out[frozenset(pattern)] = int(dim)
    return out


def finite_enumeration_witness(dm: DistanceMatrix, centers, radii):
    """Exhaustive scan of a finite metric space for a ball-family witness."""
    best, best_slack = None, -np.inf
    for p in range(dm.n):
        slack = min(r - dm.d[c, p] for c, r in zip(centers, radii))
        if slack > best_slack:
            best, best_slack = p, slack
    return best, best_slack


def box_intersection(centers, radii):
    """Coordinatewise interval intersection of sup-norm balls (lo, hi)."""
    centers = np.asarray(centers, float)
    radii = np.asarray(radii, float)
    lo = np.max(centers - radii[:, None], axis=0)
    hi = np.min(centers + radii[:, None], axis=0)
    return lo, hi


def dense_net_witness(space, net, family) -> Witness:
    best, best_slack = None, -np.inf
    for p in net:
        s = family.slacks(p)
        if s.min() > best_slack:
            best_slack, best = float(s.min()), p
    return Witness(best, family.slacks(best))


def hull_sampled_injectivity(dm, n_trials: int = 200, max_size: int = 6, seed: int = 0) -> float:
    """Worst witness slack over random pairwise-feasible ball families with
    hull centers: box intersection in the ambient sup-norm space followed by
    the hull retraction must land in every ball."""
    from geocomb.hyperconvex import BallFamily, helly_witness_linf
    from geocomb.spaces import LinfBox
    from geocomb.tightspan import TightSpanSpace, enumerate_cells, retract_into_hull

    rng = np.random.default_rng(seed)
    hull = TightSpanSpace(enumerate_cells(dm))
    amb = LinfBox(np.full(dm.n, -100.0), np.full(dm.n, 100.0))
    worst = np.inf
    for _ in range(n_trials):
        size = int(rng.integers(2, max_size + 1))
        for _ in range(200):
            centers = [hull.sample_point(rng) for _ in range(size)]
            radii = [float(0.3 + rng.random() * 2.0) for _ in range(size)]
            fam = BallFamily(amb, centers, radii)
            gaps = [
                hull.distance(centers[i], centers[j]) - (radii[i] + radii[j])
                for i in range(size)
                for j in range(i + 1, size)
            ]
            if not gaps or max(gaps) <= 0:
                break
        w = helly_witness_linf(fam)
        point = retract_into_hull(np.asarray(w.point), dm)
        slack = min(r - hull.distance(c, point) for c, r in zip(centers, radii))
        worst = min(worst, slack)
    return float(worst)
