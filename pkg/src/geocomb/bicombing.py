"""Geodesic bicombings as evaluators, property checkers, and solvers.

A bicombing handle selects a path sigma(x, y, .) for each ordered pair of
points in its domain.  The checkers are sampling-based: each takes an
explicit plan (point pairs / quadruples plus a dyadic parameter grid),
reports the worst residual it saw, and returns a reproducible witness on
failure.  No checker claims more than its plan.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .paths import PolyLinePath, constant_path, dyadic_params
from .spaces import ConvexPolytopeLinf, LinfBox, Space
from .tightspan import TightSpanSpace, _project_rows
from .tolerances import DEPTH_MAX_SOLVER, TOL_GEO, TOL_METRIC


class DomainError(ValueError):
    pass


@dataclass
class BicombingHandle:
    """A selection of geodesics: evaluator (x, y, t) -> point.

    domain is "global" or ("ball", center, radius); the evaluator must hold
    sigma(x, y, 0) = x and sigma(x, y, 1) = y on its domain.
    """

    space: Space
    evaluator: Callable
    domain: object = "global"
    name: str = "bicombing"

    def __call__(self, x, y, t: float):
        return self.evaluator(x, y, float(t))

    def in_domain(self, p, tol: float = TOL_METRIC) -> bool:
        if self.domain == "global":
            return True
        _, center, radius = self.domain
        return self.space.distance(center, p) < radius + tol


@dataclass
class CheckReport:
    name: str
    passed: bool
    worst_residual: float
    tolerance: float
    witness: dict | None = None
    n_evaluations: int = 0

    def to_json(self) -> dict:
        return {
            "name": self.name,
            "passed": bool(self.passed),
            "worst_residual": float(self.worst_residual),
            "tolerance": float(self.tolerance),
            "witness": self.witness,
            "n_evaluations": int(self.n_evaluations),
        }


@dataclass
class SamplePlan:
    """Deterministic sampling plan for the checkers."""

    pairs: list = field(default_factory=list)
    quadruples: list = field(default_factory=list)
    t_depth: int = 4
    subsegments: list = field(default_factory=lambda: [(0.0, 1.0), (0.25, 0.75), (0.5, 0.5), (0.0, 0.5)])

    @property
    def t_grid(self) -> np.ndarray:
        return dyadic_params(self.t_depth)


def make_plan(
    space: Space,
    rng: np.random.Generator,
    n_pairs: int = 10,
    n_quadruples: int = 10,
    t_depth: int = 4,
    ball: tuple | None = None,
) -> SamplePlan:
    """Sample a plan; with ball=(center, radius) all points stay inside it."""

    def pick():
        if ball is None:
            return space.sample_point(rng)
        return space.sample_in_ball(ball[0], ball[1], rng)

    pairs = [(pick(), pick()) for _ in range(n_pairs)]
    quads = [(pick(), pick(), pick(), pick()) for _ in range(n_quadruples)]
    return SamplePlan(pairs, quads, t_depth)


def _witness(space: Space, label: str, points: list, params: list) -> dict:
    return {
        "kind": label,
        "points": [space.point_to_json(p) for p in points],
        "params": [float(t) for t in params],
    }


def check_geodesic(handle: BicombingHandle, plan: SamplePlan, tol: float = TOL_GEO) -> CheckReport:
    """Worst defect of d(c(s), c(t)) = |s - t| * d(c(0), c(1)) over the plan."""
    space = handle.space
    grid = plan.t_grid
    worst, witness, n_eval = 0.0, None, 0
    for x, y in plan.pairs:
        pts = [handle(x, y, t) for t in grid]
        n_eval += len(pts)
        total = space.distance(x, y)
        ends = max(space.distance(pts[0], x), space.distance(pts[-1], y))
        if ends > worst:
            worst = float(ends)
            witness = _witness(space, "endpoint-mismatch", [x, y], [0.0, 1.0])
        for i in range(len(grid) - 1):
            ds = space.dist_rows([pts[i]] * (len(grid) - i - 1), pts[i + 1 :])
            expect = (grid[i + 1 :] - grid[i]) * total
            defect = np.abs(ds - expect)
            j = int(np.argmax(defect))
            if defect[j] > worst:
                worst = float(defect[j])
                witness = _witness(space, "geodesic-defect", [x, y], [grid[i], grid[i + 1 + j]])
    return CheckReport("geodesic", worst <= tol, worst, tol, witness if worst > tol else None, n_eval)


def check_consistency(handle: BicombingHandle, plan: SamplePlan, tol: float = TOL_GEO) -> CheckReport:
    """Residual of sigma restricted to a subsegment against re-selection.

    Compares sigma between c(a) and c(b) at t with c((1 - t) a + t b).
    """
    space = handle.space
    grid = plan.t_grid
    worst, witness, n_eval = 0.0, None, 0
    for x, y in plan.pairs:
        for a, b in plan.subsegments:
            pa = handle(x, y, a)
            pb = handle(x, y, b)
            for t in grid:
                lhs = handle(pa, pb, t)
                rhs = handle(x, y, (1.0 - t) * a + t * b)
                n_eval += 2
                r = space.distance(lhs, rhs)
                if r > worst:
                    worst = float(r)
                    witness = _witness(space, "consistency", [x, y], [a, b, t])
    return CheckReport("consistency", worst <= tol, worst, tol, witness if worst > tol else None, n_eval)


def check_conical(handle: BicombingHandle, plan: SamplePlan, tol: float = TOL_GEO) -> CheckReport:
    """Endpoint inequality d(s_yz(t), s_y'z'(t)) <= (1-t) d(y, y') + t d(z, z')."""
    space = handle.space
    grid = plan.t_grid
    worst, witness, n_eval = -np.inf, None, 0
    for y, z, y2, z2 in plan.quadruples:
        dy = space.distance(y, y2)
        dz = space.distance(z, z2)
        for t in grid:
            lhs = space.distance(handle(y, z, t), handle(y2, z2, t))
            n_eval += 2
            r = lhs - ((1.0 - t) * dy + t * dz)
            if r > worst:
                worst = float(r)
                witness = _witness(space, "conical", [y, z, y2, z2], [t])
    worst = max(worst, 0.0) if np.isfinite(worst) else 0.0
    return CheckReport("conical", worst <= tol, worst, tol, witness if worst > tol else None, n_eval)


def check_convexity(handle: BicombingHandle, plan: SamplePlan, tol: float = TOL_GEO) -> CheckReport:
    """Midpoint convexity of t -> d(s_yz(t), s_y'z'(t)) over nested grids."""
    space = handle.space
    grid = plan.t_grid
    worst, witness, n_eval = -np.inf, None, 0
    for y, z, y2, z2 in plan.quadruples:
        phi = np.array([space.distance(handle(y, z, t), handle(y2, z2, t)) for t in grid])
        n_eval += 2 * grid.size
        m = grid.size
        for i in range(m):
            for j in range(i + 2, m, 2):
                mid = (i + j) // 2
                r = phi[mid] - 0.5 * (phi[i] + phi[j])
                if r > worst:
                    worst = float(r)
                    witness = _witness(space, "convexity", [y, z, y2, z2], [grid[i], grid[mid], grid[j]])
    worst = max(worst, 0.0) if np.isfinite(worst) else 0.0
    return CheckReport("convexity", worst <= tol, worst, tol, witness if worst > tol else None, n_eval)


def check_reversibility(handle: BicombingHandle, plan: SamplePlan, tol: float = TOL_GEO) -> CheckReport:
    """Residual of sigma_zy(t) = sigma_yz(1 - t)."""
    space = handle.space
    grid = plan.t_grid
    worst, witness, n_eval = 0.0, None, 0
    for y, z in plan.pairs:
        for t in grid:
            r = space.distance(handle(z, y, t), handle(y, z, 1.0 - t))
            n_eval += 2
            if r > worst:
                worst = float(r)
                witness = _witness(space, "reversibility", [y, z], [t])
    return CheckReport("reversibility", worst <= tol, worst, tol, witness if worst > tol else None, n_eval)


CHECKERS = {
    "geodesic": check_geodesic,
    "consistency": check_consistency,
    "conical": check_conical,
    "convexity": check_convexity,
    "reversibility": check_reversibility,
}


def run_checker_suite(
    handle: BicombingHandle,
    plan: SamplePlan,
    tol: float = TOL_GEO,
    names: tuple = ("geodesic", "consistency", "conical", "convexity", "reversibility"),
) -> list[CheckReport]:
    return [CHECKERS[name](handle, plan, tol) for name in names]


# ---------------------------------------------------------------------------
# Concrete bicombings
# ---------------------------------------------------------------------------


def linear_bicombing(polytope) -> BicombingHandle:
    """The affine bicombing (x, y, t) -> (1 - t) x + t y on a convex set."""
    if not isinstance(polytope, (LinfBox, ConvexPolytopeLinf)):
        raise DomainError("linear bicombing requires a convex polytope or box")

    def ev(x, y, t):
        if not polytope.contains(x) or not polytope.contains(y):
            raise DomainError("endpoint outside the convex set")
        return (1.0 - t) * np.asarray(x, float) + t * np.asarray(y, float)

    return BicombingHandle(polytope, ev, "global", "linear")


def shortest_arc_bicombing(space: Space, ball: tuple | None = None) -> BicombingHandle:
    """Locally unique shortest arcs (cycles, trees, boxes: space.interp)."""
    domain = "global" if ball is None else ("ball", ball[0], ball[1])

    def ev(x, y, t):
        return space.interp(x, y, t)

    return BicombingHandle(space, ev, domain, "shortest-arc")


class SolverError(RuntimeError):
    pass


def solve_convex_bicombing(
    space,
    x,
    y,
    depth: int = 8,
    tol: float = TOL_GEO,
    max_depth: int = DEPTH_MAX_SOLVER,
) -> PolyLinePath:
    """Geodesic between two hull (or convex-polytope) points by recursive
    dyadic midpoint subdivision.

    Midpoints on a hull are the centers of the admissible-midpoint box,
    re-projected to extremality; on convex polytopes they are affine.  The
    constructed dyadic chain is metrically additive by the midpoint property,
    so its geodesic defect is bounded by the projection residual.
    """
    depth = min(depth, max_depth)
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if isinstance(space, TightSpanSpace):
        if not space.contains(x) or not space.contains(y):
            raise SolverError("endpoint not on the hull")
        if space.geodesics.supported:
            # canonical selection: tree arcs plus a straight cell crossing
            if space.distance(x, y) <= tol:
                return constant_path(space, x)
            ts = dyadic_params(depth)
            return PolyLinePath(space, ts, space.interp_many(x, y, ts))

        def mids(pts):
            g = 0.5 * (pts[:-1] + pts[1:])
            return _project_rows(g, space.dm, TOL_METRIC, 10_000)

    elif isinstance(space, (LinfBox, ConvexPolytopeLinf)):
        if not space.contains(x) or not space.contains(y):
            raise SolverError("endpoint outside the convex set")

        def mids(pts):
            return 0.5 * (pts[:-1] + pts[1:])

    else:
        raise SolverError(f"no convex solver for {type(space).__name__}")

    if space.distance(x, y) <= tol:
        return constant_path(space, x)

    pts = np.array([x, y])
    for _ in range(depth):
        m = mids(pts)
        merged = np.empty((pts.shape[0] + m.shape[0], pts.shape[1]))
        merged[0::2] = pts
        merged[1::2] = m
        pts = merged
    path = PolyLinePath(space, dyadic_params(depth), list(pts))
    # additive midpoints make the dyadic chain a geodesic; verify cheaply on
    # the coarse nodes and fail loudly if the projection stagnated
    coarse = path.resample(dyadic_params(min(4, depth)))
    from .paths import geodesic_defect

    defect = geodesic_defect(coarse)
    if defect > 50 * tol:
        raise SolverError(f"midpoint subdivision stagnated (defect {defect:.3e})")
    return path


def solver_bicombing(space, depth: int = 8) -> BicombingHandle:
    """Bicombing handle backed by the convex solver, with per-pair caching.

    Evaluation at dyadic parameters up to the solve depth is exact; other
    parameters interpolate between adjacent dyadic samples.
    """
    cache: dict = {}

    def ev(x, y, t):
        key = (space.point_key(x, 9), space.point_key(y, 9))
        path = cache.get(key)
        if path is None:
            path = solve_convex_bicombing(space, x, y, depth=depth)
            if len(cache) > 4096:
                cache.clear()
            cache[key] = path
        return path.eval(t)

    return BicombingHandle(space, ev, "global", "convex-solver")
