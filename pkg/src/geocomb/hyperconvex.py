"""Helly-property testing, halving witnesses, and retract constructions.

A ball family is pairwise feasible when every two balls could meet
(d(x_i, x_j) <= r_i + r_j); hyperconvexity asks for a common point of every
pairwise-feasible family.  Witness backends: coordinate-interval intersection
in l-infinity (exact), exhaustive enumeration on finite spaces, and the
radius-halving recursion that reduces any family to a uniformly small one
using midpoints of a convex bicombing.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .bicombing import BicombingHandle, CheckReport
from .metric import DistanceMatrix, kuratowski_embed, mcshane_extend
from .paths import PolyLinePath, constant_path, path_length
from .spaces import FiniteSpace, LinfBox, Space, cycle_metric
from .tolerances import TOL_METRIC


class WitnessError(RuntimeError):
    pass


@dataclass
class BallFamily:
    space: Space
    centers: list
    radii: list[float]

    def __post_init__(self):
        if len(self.centers) != len(self.radii):
            raise ValueError("one radius per center")
        if any(r < 0 for r in self.radii):
            raise ValueError("radii must be nonnegative")

    def __len__(self) -> int:
        return len(self.centers)

    def slacks(self, point) -> np.ndarray:
        d = self.space.dist_rows(self.centers, [point] * len(self.centers))
        return np.asarray(self.radii) - d


@dataclass
class Witness:
    point: object
    slacks: np.ndarray

    @property
    def min_slack(self) -> float:
        return float(np.min(self.slacks))

    def valid(self, tol: float = TOL_METRIC) -> bool:
        return self.min_slack >= -tol


def pairwise_feasible(family: BallFamily, tol: float = TOL_METRIC) -> tuple[bool, tuple[int, int], float]:
    """d(x_i, x_j) <= r_i + r_j for every pair; returns the worst pair."""
    worst = -np.inf
    pair = (0, 0)
    for i in range(len(family)):
        for j in range(i + 1, len(family)):
            gap = family.space.distance(family.centers[i], family.centers[j]) - (
                family.radii[i] + family.radii[j]
            )
            if gap > worst:
                worst, pair = float(gap), (i, j)
    if worst == -np.inf:
        worst = 0.0
    return worst <= tol, pair, worst


def helly_witness_linf(family: BallFamily, tol: float = TOL_METRIC) -> Witness:
    """Exact witness for sup-norm balls: boxes intersect coordinatewise.

    Pairwise feasibility makes every coordinate interval family pairwise
    intersecting, hence (intervals on a line) globally intersecting; the
    witness is the coordinatewise interval midpoint, which maximizes the
    minimum slack.
    """
    ok, pair, gap = pairwise_feasible(family, tol)
    if not ok:
        raise WitnessError(f"family not pairwise feasible: pair {pair} gap {gap:.3e}")
    centers = np.asarray([np.asarray(c, float) for c in family.centers])
    radii = np.asarray(family.radii, dtype=float)
    lo = np.max(centers - radii[:, None], axis=0)
    hi = np.min(centers + radii[:, None], axis=0)
    if np.any(lo > hi + tol):
        k = int(np.argmax(lo - hi))
        raise WitnessError(f"empty coordinate interval at {k} (width {float(hi[k]-lo[k]):.3e})")
    point = 0.5 * (lo + hi)
    return Witness(point, family.slacks(point))


def helly_witness_finite(family: BallFamily) -> Witness | None:
    """Scan a finite space for a maximal-slack common point, or certify
    emptiness by exhaustion (ties broken by lowest point index)."""
    space = family.space
    if not isinstance(space, FiniteSpace):
        raise WitnessError("finite enumeration requires a finite space")
    best = None
    best_slack = -np.inf
    for p in space.points():
        s = family.slacks(p)
        m = float(np.min(s))
        if m > best_slack + 1e-15:
            best_slack = m
            best = Witness(p, s)
    if best is None or not best.valid():
        return None
    return best


def sample_feasible_family(
    space: Space,
    rng: np.random.Generator,
    max_size: int = 4,
    max_tries: int = 400,
) -> BallFamily:
    """Random pairwise-feasible family by rejection.

    On finite spaces radii are realized distances (so families respect the
    discreteness of the model); in boxes radii are uniform reals.
    """
    size = int(rng.integers(2, max_size + 1))
    for _ in range(max_tries):
        if isinstance(space, FiniteSpace):
            centers = [space.sample_point(rng) for _ in range(size)]
            radii = [float(space.distance(c, space.sample_point(rng))) for c in centers]
        else:
            # scatter around a base point so feasibility has a fair chance;
            # the pairwise check below still decides honestly
            base = space.sample_point(rng)
            centers = []
            for _ in range(size):
                for _ in range(100):
                    p = space.sample_point(rng)
                    if space.distance(base, p) <= 2.0:
                        break
                centers.append(p)
            radii = [float(0.3 + 2.0 * rng.random()) for _ in centers]
        fam = BallFamily(space, centers, radii)
        ok, _, _ = pairwise_feasible(fam)
        if ok:
            return fam
    raise WitnessError("could not sample a pairwise-feasible family")


def is_hyperconvex_sampled(
    space: Space,
    rng: np.random.Generator,
    trials: int = 200,
    max_size: int = 4,
    backend=None,
) -> CheckReport:
    """Sampled Helly property: every random pairwise-feasible family must
    admit a witness under the space's backend (finite enumeration or box
    intersection).  A failing family is stored as the witness."""
    if backend is None:
        if isinstance(space, FiniteSpace):
            backend = helly_witness_finite
        elif isinstance(space, LinfBox):
            backend = lambda fam: helly_witness_linf(fam)
        else:
            raise WitnessError(f"no witness backend for {type(space).__name__}")
    failures = 0
    stored = None
    for _ in range(trials):
        fam = sample_feasible_family(space, rng, max_size)
        try:
            w = backend(fam)
        except WitnessError:
            w = None
        if w is None or not w.valid(1e-7):
            failures += 1
            if stored is None:
                stored = {
                    "kind": "helly-failure",
                    "centers": [space.point_to_json(c) for c in fam.centers],
                    "radii": [float(r) for r in fam.radii],
                }
    return CheckReport("hyperconvex-sampled", failures == 0, float(failures), 0.0, stored, trials)


def halving_witness(
    family: BallFamily,
    sigma: BicombingHandle,
    base,
    r0: float,
    tol: float = TOL_METRIC,
    max_depth: int = 60,
) -> Witness:
    """Reduce a family to base-solvable radius by bicombing midpoints.

    While some radius exceeds r0: take midpoints y_ij of the selected
    geodesics between centers, recursively find z_i meeting all balls
    B(y_ij, r_j / 2), then recursively find a point meeting all B(z_i,
    r_i / 2).  Conicality of the bicombing keeps every derived family
    pairwise feasible, and slack degrades by at most tol per level.
    """
    ok, pair, gap = pairwise_feasible(family, tol * (max_depth + 1))
    if not ok:
        raise WitnessError(f"family not pairwise feasible: pair {pair} gap {gap:.3e}")
    depth = 0
    rmax = max(family.radii)
    if rmax > r0:
        depth = int(np.ceil(np.log2(rmax / r0)))
    if depth > max_depth:
        raise WitnessError(f"halving depth {depth} exceeds cap {max_depth}")
    return _halve(family, sigma, base, r0, tol, depth)


def _halve(family: BallFamily, sigma, base, r0: float, tol: float, depth_left: int) -> Witness:
    if max(family.radii) <= r0 + tol:
        w = base(family)
        if w is None:
            raise WitnessError("base solver found no witness")
        return w
    if depth_left <= 0:
        raise WitnessError("halving recursion exhausted")
    space = family.space
    n = len(family)
    centers = family.centers
    radii = family.radii
    mids = [[None] * n for _ in range(n)]
    for i in range(n):
        for j in range(n):
            mids[i][j] = centers[i] if i == j else sigma(centers[i], centers[j], 0.5)
    zs = []
    for i in range(n):
        sub = BallFamily(space, [mids[i][j] for j in range(n)], [0.5 * r for r in radii])
        zs.append(_halve(sub, sigma, base, r0, tol, depth_left - 1).point)
    final = BallFamily(space, zs, [0.5 * r for r in radii])
    w = _halve(final, sigma, base, r0, tol, depth_left - 1)
    return Witness(w.point, family.slacks(w.point))


# ---------------------------------------------------------------------------
# The circle counterexample
# ---------------------------------------------------------------------------


@dataclass
class SphereCounterexampleReport:
    n: int
    local_balls_hyperconvex: bool
    empty_in_cycle: bool
    nonempty_in_linf: bool
    linf_point: np.ndarray
    family_centers: list[int]
    family_radii: list[float]

    def all_confirmed(self) -> bool:
        return self.local_balls_hyperconvex and self.empty_in_cycle and self.nonempty_in_linf

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "local_balls_hyperconvex": self.local_balls_hyperconvex,
            "empty_in_cycle": self.empty_in_cycle,
            "nonempty_in_linf": self.nonempty_in_linf,
            "linf_point": [float(v) for v in self.linf_point],
            "family_centers": self.family_centers,
            "family_radii": self.family_radii,
        }


def sphere_counterexample(n: int, trials: int = 200, seed: int = 0) -> SphereCounterexampleReport:
    """Locally injective but not an absolute neighborhood retract: on the
    n-cycle, three balls around equally spaced points are pairwise feasible
    yet have empty intersection, while the same family meets inside the
    ambient sup-norm embedding.  Local balls of radius floor(n/4) are
    intervals and pass the sampled Helly test."""
    if n < 6 or n % 3 != 0:
        raise ValueError("n must be a multiple of 3, at least 6")
    dm = cycle_metric(n)
    cyc = FiniteSpace(dm)
    rng = np.random.default_rng(seed)

    r_local = n // 4
    local_ok = True
    for center in range(0, n, max(1, n // 3)):
        ball_idx = [v for v in range(n) if dm.d[center, v] <= r_local]
        sub = FiniteSpace(dm.submatrix(ball_idx))
        positions = [
            dm.d[center, v] * (1 if ((v - center) % n) <= n // 2 else -1) for v in ball_idx
        ]
        interval_like = np.all(
            np.abs(sub.dm.d - np.abs(np.subtract.outer(positions, positions))) < 1e-9
        )
        rep = is_hyperconvex_sampled(sub, rng, trials=trials, max_size=4)
        local_ok = local_ok and bool(interval_like) and rep.passed

    x, y, z = 0, n // 3, 2 * n // 3
    r = n / 3.0
    eps = 1.0
    fam_cyc = BallFamily(cyc, [x, y, z], [eps, r - eps, r - eps])
    ok, _, _ = pairwise_feasible(fam_cyc)
    if not ok:
        raise WitnessError("counterexample family unexpectedly infeasible")
    empty = helly_witness_finite(fam_cyc) is None

    emb = kuratowski_embed(dm)
    box = LinfBox(np.full(n, -10.0 * n), np.full(n, 10.0 * n))
    fam_linf = BallFamily(box, [emb[x], emb[y], emb[z]], [eps, r - eps, r - eps])
    w = helly_witness_linf(fam_linf)
    return SphereCounterexampleReport(
        n,
        bool(local_ok),
        bool(empty),
        bool(w.valid(0.0)),
        np.asarray(w.point),
        [x, y, z],
        [eps, r - eps, r - eps],
    )


# ---------------------------------------------------------------------------
# Retraction-based constructions
# ---------------------------------------------------------------------------


def audit_retraction(rho, samples, space: Space, tol: float = 1e-7) -> tuple[bool, float]:
    """Sampled check that rho is idempotent and 1-Lipschitz."""
    worst = 0.0
    images = [rho(p) for p in samples]
    for img in images:
        worst = max(worst, space.distance(rho(img), img))
    for i in range(len(samples)):
        for j in range(i + 1, len(samples)):
            excess = space.distance(images[i], images[j]) - space.distance(samples[i], samples[j])
            worst = max(worst, excess)
    return worst <= tol, worst


def retraction_geodesic(
    x,
    y,
    rho,
    ambient: Space,
    r: float,
    local_geodesic,
    tol: float = TOL_METRIC,
) -> PolyLinePath:
    """Geodesic through a 1-Lipschitz retract of an ambient sup-norm space.

    Splits at an ambient segment point z at distance min(r, d/2) from x,
    replaces it by rho(z) (additivity is preserved because rho fixes x and
    y and cannot increase either side), recurses on both halves, and solves
    below scale r with the supplied chart-level geodesic builder.
    """
    breakpoints = [x]

    def split(a, b):
        d = ambient.distance(a, b)
        if d <= r:
            breakpoints.append(b)
            return
        step = min(r, 0.5 * d)
        z = ambient.interp(a, b, step / d)
        pz = rho(z)
        lhs = ambient.distance(a, pz) + ambient.distance(pz, b)
        if abs(lhs - d) > max(tol, 1e-9 * max(1.0, d)):
            raise WitnessError(f"retraction broke additivity by {abs(lhs - d):.3e}")
        split(a, pz)
        split(pz, b)

    split(x, y)

    pieces = []
    for a, b in zip(breakpoints, breakpoints[1:]):
        pieces.append(local_geodesic(a, b))
    total = sum(path_length(p) for p in pieces)
    if total <= tol:
        return constant_path(ambient, x)
    params = [0.0]
    points = [pieces[0].points[0]]
    acc = 0.0
    for piece in pieces:
        plen = path_length(piece)
        for t, pt in zip(piece.params[1:], piece.points[1:]):
            params.append((acc + t * plen) / total)
            points.append(pt)
        acc += plen
    params[-1] = 1.0
    return PolyLinePath(ambient, np.array(params), points)


@dataclass
class LoopShorteningResult:
    loop: PolyLinePath
    decreased: bool
    eta: float
    contracted_to_point: bool
    lipschitz_scale: float
    audit_ok: bool


def shorten_loop(
    gamma: PolyLinePath,
    rho,
    r: float,
    ambient_dim: int,
    to_ambient,
    from_ambient=None,
    n_samples: int = 96,
) -> LoopShorteningResult:
    """One homotopy step of loop shortening through an ambient annulus.

    The loop (length L) is traced by the outer circle of a planar annulus of
    radii L / (2 pi) and L / (2 pi) - r; the trace map is audited for its
    sampled Lipschitz constant and the annulus is dilated by that factor so
    the extension hypothesis holds exactly.  A coordinatewise extension of
    the trace maps the inner circle into the retract's neighborhood, and the
    retracted inner circle is the new loop.  Returns the achieved decrease
    eta (no strict decrease signals non-retract geometry).  Loops of length
    at most 2 pi r contract to a point via the disk variant.
    """
    space = gamma.space
    L = path_length(gamma)
    R = L / (2.0 * np.pi)
    arc = np.linspace(0.0, 1.0, n_samples, endpoint=False)
    outer_vals = np.array([to_ambient(gamma.eval_arclength(s * L)) for s in arc])

    if L <= 2.0 * np.pi * r:
        # disk variant: extend over the disk and retract the center
        angles = 2.0 * np.pi * arc
        disk_outer = np.column_stack([R * np.cos(angles), R * np.sin(angles)])
        lam = _trace_scale(disk_outer, outer_vals)
        planar = np.vstack([lam * disk_outer, [[0.0, 0.0]]])
        ext = _planar_extend(planar, len(arc), outer_vals)
        center_img = rho(ext[-1])
        pt = from_ambient(center_img) if from_ambient else center_img
        return LoopShorteningResult(constant_path(space, pt), True, L, True, lam, True)

    angles = 2.0 * np.pi * arc
    outer = np.column_stack([R * np.cos(angles), R * np.sin(angles)])
    lam = _trace_scale(outer, outer_vals)
    inner_r = lam * R - r
    if inner_r <= 0:
        raise WitnessError("retract scale exceeds the dilated annulus")
    inner = np.column_stack([inner_r * np.cos(angles), inner_r * np.sin(angles)])
    planar = np.vstack([lam * outer, inner])
    ext = _planar_extend(planar, len(arc), outer_vals)
    inner_pre = ext[len(arc) :]
    ambient = LinfBox(np.full(ambient_dim, -1e9), np.full(ambient_dim, 1e9))
    audit_ok, _ = audit_retraction(rho, list(inner_pre[:: max(1, len(arc) // 16)]), ambient)
    inner_imgs = [rho(v) for v in inner_pre]
    pts = [from_ambient(v) if from_ambient else v for v in inner_imgs]
    pts.append(pts[0])
    params = np.linspace(0.0, 1.0, len(pts))
    loop = PolyLinePath(space, params, pts)
    new_len = path_length(loop)
    eta = L - new_len
    return LoopShorteningResult(loop, eta > 1e-9, float(eta), False, float(lam), bool(audit_ok))


def _trace_scale(planar_outer: np.ndarray, images: np.ndarray) -> float:
    """Smallest dilation of the planar circle making the trace 1-Lipschitz."""
    n = planar_outer.shape[0]
    lam = 1.0
    for i in range(n - 1):
        chord = np.sqrt(np.sum((planar_outer[i + 1 :] - planar_outer[i]) ** 2, axis=1))
        img = np.max(np.abs(images[i + 1 :] - images[i]), axis=1)
        mask = chord > 1e-12
        if mask.any():
            lam = max(lam, float(np.max(img[mask] / chord[mask])))
    return lam * (1.0 + 1e-9)


def _planar_extend(planar: np.ndarray, n_anchor: int, values: np.ndarray) -> np.ndarray:
    """McShane extension from the first n_anchor planar points to all of them
    (source metric: planar Euclidean distances)."""
    diff = planar[:, None, :] - planar[None, :, :]
    d = np.sqrt(np.sum(diff**2, axis=2))
    d = 0.5 * (d + d.T)
    np.fill_diagonal(d, 0.0)
    dm = DistanceMatrix(tuple(f"a{i}" for i in range(planar.shape[0])), d)
    return mcshane_extend(dm, list(range(n_anchor)), values)
