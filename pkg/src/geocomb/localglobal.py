"""Chart atlases and the local-to-global geodesic machinery.

An atlas covers a space by metric balls, each carrying a convex chart-level
bicombing that maps the ball into itself.  Paths certified consistent with
the atlas can be perturbed at their endpoints (an alternating midpoint
iteration over a thirds split, contracting geometrically), continued along
arbitrary paths, and enumerated as cover points of the universal cover via
breadth-first continuation over a discrete endpoint net.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .bicombing import BicombingHandle, CheckReport, make_plan, run_checker_suite
from .paths import PolyLinePath, constant_path, dyadic_params, path_distance, path_length, geodesic_defect
from .spaces import ConvexPolytopeLinf, CycleSpace, CylinderSpace, LinfBox, Space, WeightedGraphSpace
from .tightspan import TightSpanSpace
from .tolerances import DELTA_MIN_STEP, N_MAX_PERTURB, TOL_GEO, TOL_ID


class CertificationError(ValueError):
    def __init__(self, reason: str, witness=None):
        self.reason = reason
        self.witness = witness
        super().__init__(f"{reason}: {witness}")


class PerturbationRangeError(ValueError):
    pass


class ContinuationError(RuntimeError):
    def __init__(self, reason: str, location: float):
        self.reason = reason
        self.location = location
        super().__init__(f"{reason} at parameter {location:.6f}")


# ---------------------------------------------------------------------------
# Atlases
# ---------------------------------------------------------------------------


@dataclass
class Chart:
    center: object
    radius: float
    handle: BicombingHandle

    def slack(self, space: Space, p) -> float:
        return self.radius - space.distance(self.center, p)


@dataclass
class ChartAtlas:
    space: Space
    charts: list[Chart]

    def center_distances(self, points: list) -> np.ndarray:
        """Matrix of distances from each point to each chart center."""
        return self.space.dist_matrix(points, [ch.center for ch in self.charts])

    def radii(self) -> np.ndarray:
        return np.array([ch.radius for ch in self.charts])

    def best_chart(self, points: list) -> tuple[int, float]:
        """Chart with maximal slack containing all given points."""
        dist = self.center_distances(points)
        slack = self.radii()[None, :] - dist
        worst = slack.min(axis=0)
        idx = int(np.argmax(worst))
        return idx, float(worst[idx])

    def chart_scale(self) -> float:
        return float(min(ch.radius for ch in self.charts))

    def sample_spacing(self) -> float:
        return min(0.25, self.chart_scale() / 8.0)


def validate_atlas(
    atlas: ChartAtlas,
    rng: np.random.Generator | None = None,
    n_pairs: int = 8,
    t_depth: int = 3,
    tol: float = TOL_GEO,
    overlap_tol: float = 1e-6,
) -> list[CheckReport]:
    """One report per atlas invariant: coverage, containment, chart-level
    geodesic / consistency / conicality, and overlap agreement."""
    rng = rng or np.random.default_rng(0)
    space = atlas.space
    reports: list[CheckReport] = []

    probes = space.coverage_probes()
    dist = atlas.center_distances(probes)
    slack = atlas.radii()[None, :] - dist
    covered = slack.max(axis=1)
    worst_idx = int(np.argmin(covered))
    worst = float(-covered[worst_idx])  # positive = uncovered by that margin
    reports.append(
        CheckReport(
            "coverage",
            worst < 0.0,
            max(worst, 0.0),
            0.0,
            None if worst < 0.0 else {"kind": "uncovered-point", "points": [space.point_to_json(probes[worst_idx])], "params": []},
            len(probes),
        )
    )

    worst_c, wit_c, n_eval = 0.0, None, 0
    grid = dyadic_params(t_depth)
    for ci, ch in enumerate(atlas.charts):
        for _ in range(max(2, n_pairs // 2)):
            y = space.sample_in_ball(ch.center, ch.radius, rng)
            z = space.sample_in_ball(ch.center, ch.radius, rng)
            for t in grid:
                out = ch.handle(y, z, t)
                n_eval += 1
                r = space.distance(ch.center, out) - ch.radius
                if r > worst_c:
                    worst_c, wit_c = float(r), {"kind": "escapes-chart", "chart": ci, "points": [space.point_to_json(y), space.point_to_json(z)], "params": [float(t)]}
    reports.append(CheckReport("containment", worst_c <= tol, worst_c, tol, wit_c if worst_c > tol else None, n_eval))

    for name in ("geodesic", "consistency", "conical"):
        worst_all, wit_all, n_all = 0.0, None, 0
        for ci, ch in enumerate(atlas.charts):
            plan = make_plan(space, rng, n_pairs=n_pairs, n_quadruples=n_pairs, t_depth=t_depth, ball=(ch.center, ch.radius))
            rep = run_checker_suite(ch.handle, plan, tol, names=(name,))[0]
            n_all += rep.n_evaluations
            if rep.worst_residual > worst_all:
                worst_all = rep.worst_residual
                wit_all = dict(rep.witness or {}, chart=ci)
        reports.append(CheckReport(f"chart-{name}", worst_all <= tol, worst_all, tol, wit_all if worst_all > tol else None, n_all))

    worst_o, wit_o, n_o = 0.0, None, 0
    for i, chi in enumerate(atlas.charts):
        for j in range(i + 1, len(atlas.charts)):
            chj = atlas.charts[j]
            gap = space.distance(chi.center, chj.center)
            if gap >= chi.radius + chj.radius:
                continue
            got = 0
            for _ in range(50):
                p = space.sample_in_ball(chi.center, chi.radius, rng)
                if space.distance(chj.center, p) >= chj.radius:
                    continue
                q = space.sample_in_ball(chi.center, chi.radius, rng)
                if space.distance(chj.center, q) >= chj.radius:
                    continue
                for t in (0.25, 0.5, 0.75):
                    r = space.distance(chi.handle(p, q, t), chj.handle(p, q, t))
                    n_o += 2
                    if r > worst_o:
                        worst_o, wit_o = float(r), {"kind": "overlap-disagreement", "charts": [i, j], "points": [space.point_to_json(p), space.point_to_json(q)], "params": [t]}
                got += 1
                if got >= 4:
                    break
    reports.append(CheckReport("overlap-agreement", worst_o <= overlap_tol, worst_o, overlap_tol, wit_o if worst_o > overlap_tol else None, n_o))
    return reports


# ---------------------------------------------------------------------------
# Certified local geodesics
# ---------------------------------------------------------------------------


@dataclass
class LocalGeodesicPath:
    """A sampled path plus chart assignments and a consistency certificate.

    epsilon is the certified perturbation radius: half the minimum chart
    slack along the path, recomputable after every continuation step.
    """

    path: PolyLinePath
    seg_charts: np.ndarray
    residual: float
    epsilon: float

    @property
    def start(self):
        return self.path.start

    @property
    def end(self):
        return self.path.end

    def length(self) -> float:
        return path_length(self.path)


def certify_local_geodesic(
    path: PolyLinePath,
    atlas: ChartAtlas,
    tol: float = TOL_GEO,
) -> LocalGeodesicPath:
    """Attach chart assignments and the subsegment-consistency residual.

    Fails if some consecutive sample pair fits no chart, or if a chart-sized
    subsegment disagrees with the chart geodesic between its endpoints beyond
    tol (witnessing parameters are reported).
    """
    space = atlas.space
    pts = path.points
    n = len(pts)
    dist = atlas.center_distances(pts)
    slack = atlas.radii()[None, :] - dist  # (n, charts)

    seg_slack = np.minimum(slack[:-1], slack[1:])
    seg_charts = np.argmax(seg_slack, axis=1)
    seg_best = seg_slack[np.arange(n - 1), seg_charts]
    if np.any(seg_best <= 0):
        k = int(np.argmin(seg_best))
        raise CertificationError(
            "unassignable-segment",
            {"segment": k, "points": [space.point_to_json(pts[k]), space.point_to_json(pts[k + 1])]},
        )

    worst = 0.0
    witness = None
    interp_backed = all(ch.handle.name in ("shortest-arc", "linear") for ch in atlas.charts)
    w = 2
    while w < n:
        win_slack = slack[: n - w].copy()
        for off in range(1, w + 1):
            win_slack = np.minimum(win_slack, slack[off : n - w + off])
        chart_idx = np.argmax(win_slack, axis=1)
        ok = win_slack[np.arange(n - w), chart_idx] > 0
        idx = np.nonzero(ok)[0]
        if idx.size == 0:
            w *= 2
            continue
        mids = idx + w // 2
        t_vals = (path.params[mids] - path.params[idx]) / (path.params[idx + w] - path.params[idx])
        if interp_backed and np.allclose(t_vals, t_vals[0]):
            # chart handles coincide with space.interp: batch the residuals
            expected = space.interp_rows([pts[i] for i in idx], [pts[i + w] for i in idx], float(t_vals[0]))
            if expected is not None:
                res = space.dist_rows(expected, [pts[k] for k in mids])
                kbest = int(np.argmax(res))
                if res[kbest] > worst:
                    worst = float(res[kbest])
                    i = int(idx[kbest])
                    witness = {"a": float(path.params[i]), "b": float(path.params[i + w]), "t": float(t_vals[0])}
                w *= 2
                continue
        for i in idx:
            ch = atlas.charts[chart_idx[i]]
            j = i + w
            k = i + w // 2
            t = (path.params[k] - path.params[i]) / (path.params[j] - path.params[i])
            r = space.distance(ch.handle(pts[i], pts[j], t), pts[k])
            if r > worst:
                worst = float(r)
                witness = {"a": float(path.params[i]), "b": float(path.params[j]), "t": float(t)}
        w *= 2

    if worst > tol:
        raise CertificationError("consistency-residual", dict(witness or {}, residual=worst, tol=tol))

    sample_slack = slack.max(axis=1)
    epsilon = 0.5 * float(sample_slack.min())
    return LocalGeodesicPath(path, seg_charts, worst, epsilon)


# ---------------------------------------------------------------------------
# Nearby-geodesic sub-solves (exact on the bundled model spaces)
# ---------------------------------------------------------------------------


def _resolution_depth(length: float, spacing: float) -> int:
    if length <= spacing:
        return 3
    return int(np.clip(np.ceil(np.log2(length / spacing)), 3, 11))


def nearby_geodesic(
    ref: PolyLinePath,
    p,
    q,
    atlas: ChartAtlas,
    depth_guard: int = 40,
) -> PolyLinePath:
    """The consistent local geodesic from p to q near a reference path.

    The reference fixes the branch: on cycles and cylinders the chart chain
    develops into the line / plane strip, where the answer is the straight
    segment between the lifted endpoints.  Trees, boxes, and hulls have
    globally unique selections.  Spaces without a developed form fall back to
    the recursive thirds scheme with single-chart solves at the bottom.
    """
    space = ref.space
    spacing = atlas.sample_spacing()

    if isinstance(space, CycleSpace):
        lifts = space.unwrap(ref.points)
        a = space.lift_near(lifts[0], p)
        b = space.lift_near(lifts[-1], q)
        depth = _resolution_depth(abs(b - a), spacing)
        ts = dyadic_params(depth)
        return PolyLinePath(space, ts, list(np.mod(a + ts * (b - a), space.n)))

    if isinstance(space, CylinderSpace):
        lifts = space.unwrap(ref.points)
        a = space.lift_near(lifts[0], p)
        b = space.lift_near(lifts[-1], q)
        depth = _resolution_depth(float(np.hypot(*(b - a))), spacing)
        ts = dyadic_params(depth)
        seg = a[None, :] + ts[:, None] * (b - a)[None, :]
        seg[:, 0] = np.mod(seg[:, 0], space.circumference)
        return PolyLinePath(space, ts, [row.copy() for row in seg])

    if isinstance(space, WeightedGraphSpace) and space.is_tree:
        depth = _resolution_depth(space.distance(p, q), spacing)
        ts = dyadic_params(depth)
        return PolyLinePath(space, ts, space.interp_many(p, q, ts))

    if isinstance(space, (LinfBox, ConvexPolytopeLinf)):
        depth = _resolution_depth(space.distance(p, q), spacing)
        ts = dyadic_params(depth)
        return PolyLinePath(space, ts, space.interp_many(p, q, ts))

    if isinstance(space, TightSpanSpace):
        from .bicombing import solve_convex_bicombing

        return solve_convex_bicombing(space, p, q, depth=max(6, _resolution_depth(space.distance(p, q), spacing)))

    return _solve_thirds(ref, p, q, atlas, depth_guard)


def _single_chart(ref: PolyLinePath, atlas: ChartAtlas, margin: float) -> int | None:
    idx, slack = atlas.best_chart(ref.points)
    return idx if slack > margin else None


def _chart_solve(atlas: ChartAtlas, chart_idx: int, p, q, spacing: float) -> PolyLinePath:
    ch = atlas.charts[chart_idx]
    depth = _resolution_depth(atlas.space.distance(p, q), spacing)
    ts = dyadic_params(depth)
    return PolyLinePath(atlas.space, ts, [ch.handle(p, q, t) for t in ts])


def _glue_halves(left: PolyLinePath, right: PolyLinePath, spacing: float) -> PolyLinePath:
    """Concatenate p -> mid(left-end) coverage with the tail of right."""
    space = left.space
    len_l = path_length(left)
    len_r = path_length(right)
    total = len_l + 0.5 * len_r
    depth = _resolution_depth(total, spacing)
    ts = dyadic_params(depth)
    pts = []
    for u in ts:
        s = u * total
        if s <= len_l:
            pts.append(left.eval_arclength(s))
        else:
            pts.append(right.eval_arclength(s - (total - len_r)))
    return PolyLinePath(space, ts, pts)


def _solve_thirds(ref: PolyLinePath, p, q, atlas: ChartAtlas, depth_guard: int, tol: float = TOL_GEO) -> PolyLinePath:
    """Recursive thirds scheme for spaces without a developed form."""
    if depth_guard <= 0:
        raise ContinuationError("thirds-recursion-depth", 0.0)
    space = ref.space
    spacing = atlas.sample_spacing()
    margin = max(space.distance(ref.start, p), space.distance(ref.end, q)) + spacing
    chart = _single_chart(ref, atlas, margin)
    if chart is not None:
        return _chart_solve(atlas, chart, p, q, spacing)
    left_ref = _sub_ref(ref, 0.0, 2.0 / 3.0)
    right_ref = _sub_ref(ref, 1.0 / 3.0, 1.0)
    pn, qn = ref.eval(1.0 / 3.0), ref.eval(2.0 / 3.0)
    left = right = None
    for _ in range(N_MAX_PERTURB):
        left = _solve_thirds(left_ref, p, qn, atlas, depth_guard - 1, tol)
        right = _solve_thirds(right_ref, pn, q, atlas, depth_guard - 1, tol)
        p_next = left.eval(0.5)
        q_next = right.eval(0.5)
        gap = space.distance(pn, p_next) + space.distance(qn, q_next)
        pn, qn = p_next, q_next
        if gap < tol:
            break
    return _glue_halves(left, right, spacing)


def _sub_ref(ref: PolyLinePath, a: float, b: float, n: int = 33) -> PolyLinePath:
    ts = np.linspace(a, b, n)
    pts = [ref.eval(t) for t in ts]
    return PolyLinePath(ref.space, (ts - a) / (b - a), pts)


# ---------------------------------------------------------------------------
# Endpoint perturbation (the contraction engine)
# ---------------------------------------------------------------------------


@dataclass
class PerturbResult:
    geodesic: LocalGeodesicPath
    gaps: list[float]
    iterations: int
    length_bound_slack: float = 0.0


def _thirds_generic(ref: PolyLinePath, xbar, ybar, atlas: ChartAtlas, inner_tol: float, gaps: list[float]) -> PolyLinePath:
    """Alternating midpoint iteration over a thirds split of the reference."""
    space = ref.space
    spacing = atlas.sample_spacing()
    left_ref = _sub_ref(ref, 0.0, 2.0 / 3.0)
    right_ref = _sub_ref(ref, 1.0 / 3.0, 1.0)
    pn = ref.eval(1.0 / 3.0)
    qn = ref.eval(2.0 / 3.0)
    left = right = None
    for _ in range(N_MAX_PERTURB):
        left = nearby_geodesic(left_ref, xbar, qn, atlas)
        right = nearby_geodesic(right_ref, pn, ybar, atlas)
        p_next = left.eval(0.5)
        q_next = right.eval(0.5)
        gap = space.distance(pn, p_next) + space.distance(qn, q_next)
        gaps.append(float(gap))
        pn, qn = p_next, q_next
        if gap < inner_tol:
            break
    else:
        raise ContinuationError("perturbation-iteration-budget", gaps[-1])
    return _glue_halves(left, right, spacing)


def _thirds_developed(ref: PolyLinePath, xbar, ybar, atlas: ChartAtlas, inner_tol: float, gaps: list[float]) -> PolyLinePath:
    """The same iteration carried out in developed (lifted) coordinates.

    On a cycle or cylinder the chart chain develops isometrically into the
    line / plane strip, where every sub-geodesic of the iteration is the
    straight segment between its lifted endpoints; the midpoint updates
    become exact affine arithmetic with unchanged recorded gaps.
    """
    space = ref.space
    spacing = atlas.sample_spacing()
    lifts = np.asarray(space.unwrap(ref.points), dtype=float)
    if lifts.ndim == 1:
        lifts = lifts[:, None]
        a = np.array([space.lift_near(float(lifts[0, 0]), xbar)])
        b = np.array([space.lift_near(float(lifts[-1, 0]), ybar)])
    else:
        a = np.asarray(space.lift_near(lifts[0], xbar), dtype=float)
        b = np.asarray(space.lift_near(lifts[-1], ybar), dtype=float)

    if isinstance(space, CylinderSpace):
        devnorm = lambda v: float(np.hypot(*v))
    elif isinstance(space, CycleSpace):
        devnorm = lambda v: float(abs(v[0]))
    else:
        devnorm = lambda v: float(np.max(np.abs(v)))

    pl = np.array([np.interp(1.0 / 3.0, ref.params, lifts[:, k]) for k in range(lifts.shape[1])])
    ql = np.array([np.interp(2.0 / 3.0, ref.params, lifts[:, k]) for k in range(lifts.shape[1])])
    for _ in range(N_MAX_PERTURB):
        p_next = 0.5 * (a + ql)
        q_next = 0.5 * (pl + b)
        gap = devnorm(p_next - pl) + devnorm(q_next - ql)
        gaps.append(gap)
        pl, ql = p_next, q_next
        if gap < inner_tol:
            break
    else:
        raise ContinuationError("perturbation-iteration-budget", gaps[-1])

    ts = dyadic_params(_resolution_depth(devnorm(b - a), spacing))
    seg = a[None, :] + ts[:, None] * (b - a)[None, :]
    if isinstance(space, CycleSpace):
        pts = list(np.mod(seg[:, 0], space.n))
    else:
        if isinstance(space, CylinderSpace):
            seg[:, 0] = np.mod(seg[:, 0], space.circumference)
        pts = [row.copy() for row in seg]
    return PolyLinePath(space, ts, pts)


def perturb_geodesic(
    c: LocalGeodesicPath,
    xbar,
    ybar,
    atlas: ChartAtlas,
    tol: float = TOL_GEO,
    length_tol: float = 1e-6,
) -> PerturbResult:
    """Move the endpoints of a certified local geodesic within its radius.

    Single-chart references are re-solved directly.  Otherwise the reference
    is split at its third points and the alternating midpoint iteration runs
    until the combined endpoint gap d(p_{n-1}, p_n) + d(q_{n-1}, q_n) drops
    below tolerance; each gap is half the previous one by convexity of the
    chart bicombings, and the recorded sequence is returned.  The output is
    re-certified and its length obeys
    L(new) <= L(old) + d(x, xbar) + d(y, ybar) + length_tol.
    """
    space = atlas.space
    ref = c.path
    dx = space.distance(ref.start, xbar)
    dy = space.distance(ref.end, ybar)
    if dx >= c.epsilon or dy >= c.epsilon:
        raise PerturbationRangeError(
            f"perturbation ({dx:.4f}, {dy:.4f}) outside radius {c.epsilon:.4f}"
        )
    if dx == 0.0 and dy == 0.0:
        return PerturbResult(c, [], 0, 0.0)

    spacing = atlas.sample_spacing()
    inner_tol = tol / 10.0
    chart = _single_chart(ref, atlas, max(dx, dy) + 1e-12)
    gaps: list[float] = []
    if chart is not None:
        new_path = _chart_solve(atlas, chart, xbar, ybar, spacing)
    elif isinstance(space, (CycleSpace, CylinderSpace, LinfBox)):
        new_path = _thirds_developed(ref, xbar, ybar, atlas, inner_tol, gaps)
    else:
        new_path = _thirds_generic(ref, xbar, ybar, atlas, inner_tol, gaps)

    new = certify_local_geodesic(new_path, atlas, tol)
    slack = new.length() - (c.length() + dx + dy)
    if slack > length_tol:
        raise ContinuationError("length-bound-violated", slack)
    return PerturbResult(new, gaps, len(gaps), float(slack))


# ---------------------------------------------------------------------------
# Continuation, global bicombing, convexity chaining
# ---------------------------------------------------------------------------


def _prefix_lengths(gamma: PolyLinePath) -> np.ndarray:
    return gamma.arclength_grid()


def _gamma_length_upto(gamma: PolyLinePath, s: float, grid: np.ndarray) -> float:
    return float(np.interp(s, gamma.params, grid))


def trivial_geodesic(atlas: ChartAtlas, x0) -> LocalGeodesicPath:
    return certify_local_geodesic(constant_path(atlas.space, x0), atlas)


def extend_geodesic(
    current: LocalGeodesicPath,
    route: PolyLinePath,
    atlas: ChartAtlas,
    tol: float = TOL_GEO,
    collect: list | None = None,
) -> LocalGeodesicPath:
    """Continue a geodesic from its basepoint as the far endpoint slides
    along a route (route.start must be the current endpoint)."""
    space = atlas.space
    if space.distance(route.start, current.end) > 1e-7:
        raise ContinuationError("route-start-mismatch", 0.0)
    arc = route.arclength_grid()

    def arc_between(s0: float, s1: float) -> float:
        return float(np.interp(s1, route.params, arc) - np.interp(s0, route.params, arc))

    s = 0.0
    while s < 1.0 - 1e-12:
        # bound the step by traversed arclength: the route may loop back, so
        # endpoint distance alone says nothing about how far gamma moved
        allowed = 0.5 * current.epsilon
        remaining = 1.0 - s
        ahead = arc_between(s, 1.0)
        step = remaining if ahead <= allowed else remaining * allowed / ahead
        while arc_between(s, s + step) > allowed:
            step *= 0.5
            if step < DELTA_MIN_STEP:
                raise ContinuationError("step-stall", s)
        target = route.eval(s + step)
        result = perturb_geodesic(current, current.start, target, atlas, tol)
        current = result.geodesic
        s += step
        if collect is not None:
            collect.append((s, current))
    return current


def continue_along_path(
    gamma: PolyLinePath,
    atlas: ChartAtlas,
    tol: float = TOL_GEO,
    length_tol: float = 1e-6,
) -> list[tuple[float, LocalGeodesicPath]]:
    """Consistent local geodesics from gamma(0) to gamma(s_k) on an adaptive
    grid, each obtained from the previous one by endpoint perturbation.

    The monotone bound L(geodesic_k) <= L(gamma restricted to [0, s_k]) is
    asserted at every step.
    """
    grid = _prefix_lengths(gamma)
    outputs: list[tuple[float, LocalGeodesicPath]] = [(0.0, trivial_geodesic(atlas, gamma.start))]
    current = outputs[0][1]
    collected: list[tuple[float, LocalGeodesicPath]] = []
    extend_geodesic(current, gamma, atlas, tol, collect=collected)
    for s, geo in collected:
        bound = _gamma_length_upto(gamma, s, grid)
        if geo.length() > bound + length_tol:
            raise ContinuationError("length-bound-violated", s)
        outputs.append((s, geo))
    return outputs


def global_bicombing(
    atlas: ChartAtlas,
    x,
    y,
    gamma: PolyLinePath,
    tol: float = TOL_GEO,
    require_geodesic: bool = False,
) -> tuple[LocalGeodesicPath, dict]:
    """Final element of continuation along a connecting path, with a report
    of its geodesic defect and length against the connecting path."""
    space = atlas.space
    if space.distance(gamma.start, x) > 1e-9 or space.distance(gamma.end, y) > 1e-9:
        raise ContinuationError("gamma-endpoints-mismatch", 0.0)
    outputs = continue_along_path(gamma, atlas, tol)
    final = outputs[-1][1]
    defect = geodesic_defect(final.path)
    report = {
        "defect": float(defect),
        "length": float(final.length()),
        "gamma_length": float(path_length(gamma)),
        "is_geodesic": bool(defect <= 10 * tol),
    }
    if require_geodesic and defect > 10 * tol:
        raise ContinuationError("not-a-global-geodesic", defect)
    return final, report


def check_global_convexity(
    atlas: ChartAtlas,
    sigma_xy: LocalGeodesicPath,
    sigma_xbyb: LocalGeodesicPath,
    sigma_xxb: LocalGeodesicPath,
    sigma_yyb: LocalGeodesicPath,
    t_depth: int = 4,
    tol: float = 1e-6,
) -> CheckReport:
    """Convexity of the global selection along connecting geodesics.

    Verifies d(s_xy(t), s_xbyb(t)) <= (1-t) d(x, xb) + t d(y, yb) on a dyadic
    grid by chaining: comparison geodesics are constructed by continuation at
    partition points along the two connectors, each step small enough that
    the chart-level endpoint inequality applies, and the steps telescope.
    """
    space = atlas.space
    ts = dyadic_params(t_depth)
    dx = space.distance(sigma_xy.start, sigma_xbyb.start)
    dy = space.distance(sigma_xy.end, sigma_xbyb.end)

    witness = None
    n_eval = 0

    current = sigma_xy
    s = 0.0
    chain_worst = 0.0
    while s < 1.0 - 1e-12:
        step = 1.0 - s
        while True:
            p_t = sigma_xxb.path.eval(s + step)
            q_t = sigma_yyb.path.eval(s + step)
            dp = space.distance(current.start, p_t)
            dq = space.distance(current.end, q_t)
            if max(dp, dq) <= 0.5 * current.epsilon:
                break
            step *= 0.5
            if step < DELTA_MIN_STEP:
                raise ContinuationError("convexity-chain-stall", s)
        nxt = perturb_geodesic(current, p_t, q_t, atlas).geodesic
        a = [current.path.eval(t) for t in ts]
        b = [nxt.path.eval(t) for t in ts]
        vals = space.dist_rows(a, b)
        bound = (1.0 - ts) * dp + ts * dq
        r = float(np.max(vals - bound))
        n_eval += len(ts)
        if r > chain_worst:
            chain_worst = r
            witness = {"kind": "chain-step", "s": float(s + step), "t": float(ts[int(np.argmax(vals - bound))])}
        current = nxt
        s += step

    end_gap = path_distance(current.path, sigma_xbyb.path)
    vals_xy = space.dist_rows(
        [sigma_xy.path.eval(t) for t in ts], [sigma_xbyb.path.eval(t) for t in ts]
    )
    global_bound = (1.0 - ts) * dx + ts * dy
    r_global = float(np.max(vals_xy - global_bound))
    n_eval += len(ts)
    worst = max(chain_worst, r_global, end_gap - 10 * TOL_GEO)
    if r_global > worst - 1e-18 and r_global >= chain_worst:
        witness = {"kind": "global", "t": float(ts[int(np.argmax(vals_xy - global_bound))])}
    passed = (chain_worst <= tol) and (r_global <= tol) and (end_gap <= max(10 * TOL_GEO, tol))
    return CheckReport("global-convexity", passed, max(chain_worst, r_global), tol, witness if not passed else None, n_eval)


# ---------------------------------------------------------------------------
# Universal cover enumeration
# ---------------------------------------------------------------------------


@dataclass
class CoverPoint:
    """A consistent local geodesic from the basepoint; exp maps it to its
    endpoint and the sup metric on paths measures identification."""

    geodesic: LocalGeodesicPath
    length: float

    @property
    def basepoint(self):
        return self.geodesic.start

    @property
    def endpoint(self):
        return self.geodesic.end


def _dev_signature(space: Space, path: PolyLinePath) -> tuple | None:
    """Total developed displacement of a path; determines the homotopy lift
    of a local geodesic from the basepoint on cycles and cylinders."""
    if isinstance(space, CycleSpace):
        lifts = space.unwrap(path.points)
        return (float(lifts[-1] - lifts[0]),)
    if isinstance(space, CylinderSpace):
        lifts = space.unwrap(path.points)
        return (float(lifts[-1, 0] - lifts[0, 0]), float(lifts[-1, 1] - lifts[0, 1]))
    return None


def _dev_step(space: Space, frm, to) -> tuple:
    if isinstance(space, CycleSpace):
        return (_dev_wrap(space, to - frm),)
    return (_dev_wrap(space, to[0] - frm[0]), float(to[1] - frm[1]))


def _dev_wrap(space, delta: float) -> float:
    from .spaces import _wrap_delta

    c = space.n if isinstance(space, CycleSpace) else space.circumference
    return float(_wrap_delta(float(delta), c))


def build_cover(
    atlas: ChartAtlas,
    x0,
    l_max: float,
    net: list | None = None,
    tol_id: float = TOL_ID,
    margin: float = 2.5,
) -> list[CoverPoint]:
    """All consistent local geodesics from x0 to net points with length at
    most l_max, enumerated by breadth-first continuation over the net and
    identified up to sup distance tol_id.

    On developable spaces each lift is characterized by its developed
    displacement, which prunes re-derivations of already-found lifts before
    any continuation work; the sup-distance identification still decides
    final identity.
    """
    space = atlas.space
    if net is None:
        net = space.default_net()
    net_keys = {space.point_key(p): p for p in net}
    if space.point_key(x0) not in net_keys:
        net = [x0] + list(net)
        net_keys[space.point_key(x0)] = x0

    found: dict[tuple, list[CoverPoint]] = {}
    queue: list[CoverPoint] = []
    seen_sigs: set[tuple] = set()
    developable = isinstance(space, (CycleSpace, CylinderSpace))

    root = CoverPoint(trivial_geodesic(atlas, x0), 0.0)
    found[space.point_key(x0)] = [root]
    queue.append(root)
    sig_of: dict[int, tuple] = {}
    if developable:
        root_sig = _dev_signature(space, root.geodesic.path)
        sig_of[id(root)] = root_sig
        seen_sigs.add((space.point_key(x0), _round_sig(root_sig)))

    def try_add(cp: CoverPoint) -> bool:
        key = space.point_key(cp.endpoint)
        bucket = found.setdefault(key, [])
        for other in bucket:
            if abs(other.length - cp.length) < 4 * tol_id and path_distance(other.geodesic.path, cp.geodesic.path) < tol_id:
                return False
        bucket.append(cp)
        return True

    budget = l_max + margin
    head = 0
    while head < len(queue):
        cp = queue[head]
        head += 1
        if cp.length > budget:
            continue
        for nb in space.net_neighbors(cp.endpoint):
            nb_key = space.point_key(nb)
            if nb_key not in net_keys:
                continue
            if developable:
                sig = tuple(
                    a + b for a, b in zip(sig_of[id(cp)], _dev_step(space, cp.endpoint, nb))
                )
                sig_key = (nb_key, _round_sig(sig))
                if sig_key in seen_sigs:
                    continue
            route_depth = 4
            route = PolyLinePath(
                space,
                dyadic_params(route_depth),
                space.interp_many(cp.endpoint, nb, dyadic_params(route_depth)),
            )
            try:
                geo = extend_geodesic(cp.geodesic, route, atlas)
            except ContinuationError:
                continue
            new = CoverPoint(geo, geo.length())
            if developable:
                seen_sigs.add(sig_key)
                sig_of[id(new)] = sig
            if new.length > budget:
                continue
            if try_add(new):
                queue.append(new)

    out = []
    for key in sorted(found):
        for cp in found[key]:
            if cp.length <= l_max + 1e-9:
                out.append(cp)
    return out


def _round_sig(sig: tuple) -> tuple:
    return tuple(round(v, 5) for v in sig)


def cover_retraction(cp: CoverPoint, s: float, atlas: ChartAtlas) -> CoverPoint:
    """The initial segment t -> c(s t) as a cover point; s -> retraction(s)
    is the unique consistent geodesic from the constant path to c in the sup
    metric on the cover."""
    if not 0.0 <= s <= 1.0:
        raise ValueError("s must lie in [0, 1]")
    path = cp.geodesic.path
    if s == 0.0:
        geo = trivial_geodesic(atlas, path.start)
        return CoverPoint(geo, 0.0)
    if s == 1.0:
        return cp
    ts = dyadic_params(max(3, int(np.ceil(np.log2(path.params.size))))) * s
    sub = PolyLinePath(path.space, ts / s, [path.eval(t) for t in ts])
    geo = certify_local_geodesic(sub, atlas)
    return CoverPoint(geo, geo.length())
