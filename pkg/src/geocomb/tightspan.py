"""Injective hulls (tight spans) of small finite metric spaces.

The hull of an n-point space is realized inside R^n as the set of extremal
functions: vectors f with f(x) + f(y) >= d(x, y) for all pairs (admissible,
with x = y giving f >= 0) that are pointwise minimal.  It carries the sup
metric and is a polyhedral complex: the bounded faces of the admissibility
polyhedron.  A face is bounded exactly when its tight-constraint pattern
touches every point, and those patterns index the cells.

Enumeration strategy: enumerate the polyhedron's vertices from n-subsets of
constraints, then close the family of vertex active-sets under intersection;
each closed covering pattern is a cell, with affine dimension given by the
rank of its equality system.  This keeps n <= 6 tractable.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations

import numpy as np

from .metric import DistanceMatrix
from .spaces import Space
from .tolerances import N_MAX_PROJECT, TOL_METRIC

N_TS_DEFAULT = 6


class TightSpanError(ValueError):
    pass


def _pair_system(dm: DistanceMatrix) -> tuple[list[tuple[int, int]], np.ndarray, np.ndarray]:
    """Constraint rows f(i) + f(j) >= d(i, j) over pairs i <= j (loops give f >= 0)."""
    n = dm.n
    pairs = [(i, j) for i in range(n) for j in range(i, n)]
    a = np.zeros((len(pairs), n))
    b = np.zeros(len(pairs))
    for r, (i, j) in enumerate(pairs):
        a[r, i] += 1.0
        a[r, j] += 1.0
        b[r] = dm.d[i, j]
    return pairs, a, b


def envelope(f: np.ndarray, dm: DistanceMatrix) -> np.ndarray:
    """The map f -> max_y (d(., y) - f(y)); fixed points are extremal."""
    arr = np.asarray(f, dtype=float)
    rows = np.atleast_2d(arr)
    out = np.max(dm.d[None, :, :] - rows[:, None, :], axis=2)
    return out[0] if arr.ndim == 1 else out


def is_admissible(f, dm: DistanceMatrix, tol: float = TOL_METRIC) -> tuple[bool, float]:
    """True iff f(x) + f(y) >= d(x, y) for all x, y (within tol).

    Returns (verdict, worst residual); the residual is the minimum pair slack,
    negative on violation.
    """
    f = np.asarray(f, dtype=float)
    if f.shape != (dm.n,):
        raise TightSpanError(f"length mismatch: {f.shape} vs {dm.n} points")
    slack = f[:, None] + f[None, :] - dm.d
    worst = float(np.min(slack))
    return worst >= -tol, worst


def extremality_residual(f, dm: DistanceMatrix) -> float:
    f = np.asarray(f, dtype=float)
    p = np.max(dm.d - f[None, :], axis=1)
    return float(np.max(np.abs(f - p)))


def is_extremal(f, dm: DistanceMatrix, tol: float = TOL_METRIC) -> bool:
    ok, _ = is_admissible(f, dm, tol)
    return ok and extremality_residual(f, dm) <= tol


class ProjectionError(RuntimeError):
    def __init__(self, residual: float, iterations: int):
        self.residual = residual
        self.iterations = iterations
        super().__init__(f"no convergence after {iterations} iterations (residual {residual:.3e})")


def project_to_extremal(
    g,
    dm: DistanceMatrix,
    tol: float = TOL_METRIC,
    n_max: int = N_MAX_PROJECT,
) -> np.ndarray:
    """Descend an admissible vector to the extremal function below it.

    Iterates f <- (f + envelope(f)) / 2; the averaging damps the 2-cycles of
    the plain envelope iteration and the residual halves every step.  Raises
    on non-admissible input or (not observed in practice) non-convergence.
    """
    g = np.asarray(g, dtype=float)
    ok, worst = is_admissible(g, dm, tol)
    if not ok:
        raise TightSpanError(f"input not admissible (worst pair slack {worst:.3e})")
    return _project_rows(g[None, :], dm, tol, n_max)[0]


def _project_rows(rows: np.ndarray, dm: DistanceMatrix, tol: float, n_max: int) -> np.ndarray:
    f = np.array(rows, dtype=float)
    for it in range(n_max):
        p = np.max(dm.d[None, :, :] - f[:, None, :], axis=2)
        residual = float(np.max(np.abs(f - p)))
        if residual < tol:
            return f
        f = 0.5 * (f + p)
    raise ProjectionError(residual, n_max)


def retract_into_hull(g, dm: DistanceMatrix, tol: float = TOL_METRIC) -> np.ndarray:
    """1-Lipschitz retraction of an arbitrary vector onto the hull.

    max(g, envelope(g)) is always admissible, and both steps are sup-norm
    1-Lipschitz maps fixing the hull pointwise.
    """
    g = np.asarray(g, dtype=float)
    lifted = np.maximum(g, envelope(g, dm))
    return _project_rows(lifted[None, :], dm, tol, N_MAX_PROJECT)[0]


def tight_span_distance(f, g) -> float:
    f = np.asarray(f, dtype=float)
    g = np.asarray(g, dtype=float)
    if f.shape != g.shape:
        raise TightSpanError(f"space mismatch: {f.shape} vs {g.shape}")
    return float(np.max(np.abs(f - g)))


# ---------------------------------------------------------------------------
# Cell enumeration
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Cell:
    pattern: tuple[tuple[int, int], ...]  # tight pairs (i <= j); (i, i) means f(i) = 0
    dim: int
    vertices: np.ndarray = field(repr=False)

    def interior_point(self) -> np.ndarray:
        return np.mean(self.vertices, axis=0)


@dataclass
class TightSpanComplex:
    space: DistanceMatrix
    cells: list[Cell]
    dimension: int
    degenerate: bool = False

    @property
    def vertices(self) -> np.ndarray:
        return self.cells_of_dim(0)

    def cells_of_dim(self, k: int) -> np.ndarray:
        pts = [c.vertices[0] for c in self.cells if c.dim == k]
        return np.array(pts) if pts else np.zeros((0, self.space.n))

    def max_cells(self) -> list[Cell]:
        return [c for c in self.cells if c.dim == self.dimension]


def _pattern_covers(pattern, n: int) -> bool:
    touched = set()
    for i, j in pattern:
        touched.add(i)
        touched.add(j)
    return len(touched) == n


def enumerate_cells(
    dm: DistanceMatrix,
    max_points: int = N_TS_DEFAULT,
    tol: float = TOL_METRIC,
) -> TightSpanComplex:
    """Compute the hull of a finite metric space as a polyhedral complex."""
    n = dm.n
    if n > max_points:
        raise TightSpanError(f"{n} points exceeds the enumeration cap {max_points}")
    pairs, a, b = _pair_system(dm)
    m = len(pairs)

    if n == 1:
        cell = Cell(((0, 0),), 0, np.zeros((1, 1)))
        return TightSpanComplex(dm, [cell], 0)

    # vertices: feasible solutions of n independent tight constraints
    combos = np.array(list(combinations(range(m), n)), dtype=int)
    mats = a[combos]  # (n_combos, n, n)
    dets = np.abs(np.linalg.det(mats))
    good = dets > 1e-10
    sols = np.linalg.solve(mats[good], b[combos[good]][..., None])[..., 0]
    feas = np.all(sols @ a.T >= b[None, :] - 1e-8, axis=1)
    cand = sols[feas]
    if cand.size == 0:
        raise TightSpanError("no vertices found; input metric may be invalid")
    rounded = np.round(cand, 9)
    _, keep = np.unique(rounded, axis=0, return_index=True)
    verts = cand[np.sort(keep)]

    # non-generic metrics: a tie at the maximum of some quadruple's three
    # pairing sums collapses a cell, so two patterns coincide
    degenerate = False
    for quad in combinations(range(n), 4):
        i, j, k, l = quad
        sums = sorted(
            [dm.d[i, j] + dm.d[k, l], dm.d[i, k] + dm.d[j, l], dm.d[i, l] + dm.d[j, k]]
        )
        if sums[2] - sums[1] <= tol:
            degenerate = True

    # active patterns as bitmasks over the constraint list
    residuals = verts @ a.T - b[None, :]
    active_tol = 1e-7
    masks = []
    for r in residuals:
        bits = 0
        for idx in range(m):
            if r[idx] <= active_tol:
                bits |= 1 << idx
            elif r[idx] <= 1e-5:
                degenerate = True  # near-tie: two patterns within tolerance
        masks.append(bits)

    # closure under intersection generates every face's tight pattern
    closed = set(masks)
    frontier = list(closed)
    while frontier:
        new = []
        for ka in frontier:
            for kb in closed:
                kc = ka & kb
                if kc and kc not in closed and kc not in new:
                    new.append(kc)
        for kc in new:
            closed.add(kc)
        frontier = new

    by_vertex_set: dict[frozenset, int] = {}
    for k in closed:
        vs = frozenset(i for i, mk in enumerate(masks) if mk & k == k)
        if not vs:
            continue
        canon = masks[min(vs)]
        for i in vs:
            canon &= masks[i]
        by_vertex_set[vs] = canon

    cells: list[Cell] = []
    for vs, k in sorted(by_vertex_set.items(), key=lambda kv: sorted(kv[0])):
        pattern = tuple(pairs[i] for i in range(m) if k >> i & 1)
        if not _pattern_covers(pattern, n):
            continue  # unbounded face: not part of the hull
        rows = a[[i for i in range(m) if k >> i & 1]]
        dim = n - np.linalg.matrix_rank(rows, tol=1e-8)
        cells.append(Cell(pattern, int(dim), verts[sorted(vs)]))

    dimension = max(c.dim for c in cells)
    return TightSpanComplex(dm, cells, dimension, degenerate)


def combinatorial_dimension(complex_: TightSpanComplex) -> int:
    """Maximal affine dimension over the cells of the hull."""
    return int(max(c.dim for c in complex_.cells))


# ---------------------------------------------------------------------------
# Canonical geodesics on hulls of tree-plus-one-cell shape
# ---------------------------------------------------------------------------


class HullGeodesics:
    """The consistent selection on hulls that are trees, or one 2-cell with
    trees attached at its vertices.

    Consistency forces the selection to be affine inside the 2-cell and to
    run through the attachment vertex (the gate) when entering or leaving a
    hanging tree, which pins the whole selection: tree arcs concatenated
    with a straight cell crossing, parametrized by arclength.  Hulls of up
    to four points always have this shape; richer complexes report
    ``supported = False`` and callers fall back to the midpoint-projection
    rule (whose properties are then only checker-verified).
    """

    def __init__(self, complex_: TightSpanComplex, tol: float = 1e-7):
        self.complex = complex_
        self.dm = complex_.space
        self.tol = tol
        self.supported = False
        two_cells = [c for c in complex_.cells if c.dim == 2]
        if complex_.dimension > 2 or len(two_cells) > 1:
            return
        self.q_cell = two_cells[0] if two_cells else None
        self.q_pattern = set(self.q_cell.pattern) if self.q_cell else None

        verts: dict[tuple, int] = {}
        self.vertex_points: list[np.ndarray] = []
        for c in complex_.cells:
            for v in c.vertices:
                key = tuple(np.round(v, 9))
                if key not in verts:
                    verts[key] = len(self.vertex_points)
                    self.vertex_points.append(np.asarray(v, float))
        self._vid = verts

        self.tree_edges: list[tuple[int, int, float]] = []
        self.adj: dict[int, list[tuple[int, float]]] = {i: [] for i in range(len(self.vertex_points))}
        for c in complex_.cells:
            if c.dim != 1:
                continue
            if self.q_pattern is not None and self.q_pattern.issubset(set(c.pattern)):
                continue  # an edge of the 2-cell, not a hanging tree edge
            a = verts[tuple(np.round(c.vertices[0], 9))]
            b = verts[tuple(np.round(c.vertices[1], 9))]
            w = float(np.max(np.abs(c.vertices[0] - c.vertices[1])))
            self.tree_edges.append((a, b, w))
            self.adj[a].append((b, w))
            self.adj[b].append((a, w))

        self.q_vids = set()
        if self.q_cell is not None:
            self.q_vids = {verts[tuple(np.round(v, 9))] for v in self.q_cell.vertices}

        # component structure of the hanging forest, gated at cell vertices
        self.component = {}
        self.gate_of_component: dict[int, int | None] = {}
        comp = 0
        for start in range(len(self.vertex_points)):
            if start in self.component:
                continue
            stack, members = [start], []
            seen = {start}
            while stack:
                v = stack.pop()
                members.append(v)
                for w, _ in self.adj[v]:
                    if w not in seen:
                        seen.add(w)
                        stack.append(w)
            gates = [v for v in members if v in self.q_vids]
            if self.q_cell is not None and len(gates) > 1 and len(members) > 1:
                return  # a tree strand joining two cell corners: unsupported
            for v in members:
                self.component[v] = comp
            self.gate_of_component[comp] = gates[0] if gates else None
            comp += 1
        if self.q_cell is None and comp != 1 and len(self.vertex_points) > 1:
            return  # disconnected skeleton should not happen
        self.supported = True

    # -- locating points ----------------------------------------------------

    def _active(self, f) -> set:
        n = self.dm.n
        return {
            (i, j)
            for i in range(n)
            for j in range(i, n)
            if abs(f[i] + f[j] - self.dm.d[i, j]) <= self.tol
        }

    def locate(self, f):
        """("cell", None) | ("vertex", vid) | ("edge", (a, b, t))."""
        f = np.asarray(f, dtype=float)
        act = self._active(f)
        if self.q_pattern is not None and self.q_pattern.issubset(act):
            return ("cell", None)
        key = tuple(np.round(f, 9))
        if key in self._vid:
            return ("vertex", self._vid[key])
        for a, b, w in self.tree_edges:
            va, vb = self.vertex_points[a], self.vertex_points[b]
            ta = float(np.max(np.abs(f - va)))
            tb = float(np.max(np.abs(f - vb)))
            if abs(ta + tb - w) <= 1e-7 and np.max(np.abs(va + (ta / w) * (vb - va) - f)) <= 1e-6:
                if ta <= 1e-9:
                    return ("vertex", a)
                if tb <= 1e-9:
                    return ("vertex", b)
                return ("edge", (a, b, ta))
        raise TightSpanError("point not located on the hull complex")

    def _gate(self, loc) -> int | None:
        vid = loc[1] if loc[0] == "vertex" else loc[1][0]
        return self.gate_of_component[self.component[vid]]

    def _tree_route(self, a: int, b: int) -> list[int]:
        # breadth-first on the hanging forest (tiny graphs)
        prev = {a: None}
        frontier = [a]
        while frontier and b not in prev:
            nxt = []
            for v in frontier:
                for w, _ in sorted(self.adj[v]):
                    if w not in prev:
                        prev[w] = v
                        nxt.append(w)
            frontier = nxt
        if b not in prev:
            raise TightSpanError("no tree route between hull vertices")
        out = [b]
        while out[-1] != a:
            out.append(prev[out[-1]])
        return out[::-1]

    def _tree_anchors(self, x, loc_x, y, loc_y) -> list[np.ndarray]:
        """Point chain of the arc between two points of one tree component."""
        if loc_x[0] == "edge" and loc_y[0] == "edge" and loc_x[1][:2] == loc_y[1][:2]:
            # both interior to one edge: the direct arc, no detour
            return [np.asarray(x, float), np.asarray(y, float)]

        def ends(loc):
            if loc[0] == "vertex":
                return [(loc[1], 0.0)]
            a, b, ta = loc[1]
            w = dict(self.adj[a])[b]
            return [(a, ta), (b, w - ta)]

        best = None
        for va, da in ends(loc_x):
            for vb, db in ends(loc_y):
                route = self._tree_route(va, vb)
                length = da + sum(dict(self.adj[u])[v] for u, v in zip(route, route[1:])) + db
                if best is None or length < best[0] - 1e-12:
                    best = (length, route)
        _, route = best
        chain = [np.asarray(x, float)] + [self.vertex_points[v] for v in route] + [np.asarray(y, float)]
        return chain

    def route(self, x, y) -> list[np.ndarray]:
        """Anchor chain of the canonical geodesic (consecutive anchors lie in
        a common cell, so affine interpolation between them stays on the
        hull)."""
        x = np.asarray(x, dtype=float)
        y = np.asarray(y, dtype=float)
        loc_x = self.locate(x)
        loc_y = self.locate(y)
        if loc_x[0] == "cell" and loc_y[0] == "cell":
            chain = [x, y]
        elif loc_x[0] == "cell":
            gid = self._gate(loc_y)
            g = self.vertex_points[gid]
            chain = [x, g] + self._tree_anchors(g, ("vertex", gid), y, loc_y)[1:]
        elif loc_y[0] == "cell":
            gid = self._gate(loc_x)
            g = self.vertex_points[gid]
            chain = self._tree_anchors(x, loc_x, g, ("vertex", gid))[:-1] + [g, y]
        else:
            cx, cy = self.component[_loc_vid(loc_x)], self.component[_loc_vid(loc_y)]
            if cx == cy:
                chain = self._tree_anchors(x, loc_x, y, loc_y)
            else:
                gx, gy = self.gate_of_component[cx], self.gate_of_component[cy]
                chain = (
                    self._tree_anchors(x, loc_x, self.vertex_points[gx], ("vertex", gx))
                    + self._tree_anchors(self.vertex_points[gy], ("vertex", gy), y, loc_y)
                )
        out = [chain[0]]
        for p in chain[1:]:
            if np.max(np.abs(p - out[-1])) > 1e-12:
                out.append(p)
        if np.max(np.abs(out[-1] - y)) > 1e-12:
            out.append(y)
        return out


def _loc_vid(loc) -> int:
    return loc[1] if loc[0] == "vertex" else loc[1][0]


def hull_route_point(chain: list[np.ndarray], s: float) -> np.ndarray:
    """Point at arclength s along an anchor chain (affine between anchors)."""
    lengths = [float(np.max(np.abs(b - a))) for a, b in zip(chain, chain[1:])]
    total = sum(lengths)
    s = min(max(s, 0.0), total)
    acc = 0.0
    for seg_len, a, b in zip(lengths, chain, chain[1:]):
        if s <= acc + seg_len + 1e-15 and seg_len > 1e-15:
            frac = min(max((s - acc) / seg_len, 0.0), 1.0)
            return a + frac * (b - a)
        acc += seg_len
    return chain[-1]


# ---------------------------------------------------------------------------
# The hull as a geodesic space
# ---------------------------------------------------------------------------


def hull_midpoint(dm: DistanceMatrix, x, y, tol: float = TOL_METRIC) -> np.ndarray:
    """Canonical metric midpoint on the hull.

    The admissible midpoints of (x, y) form a box of sup-radius d(x, y)/2
    around both; its coordinatewise center is the plain average, which is
    admissible and is re-projected to extremality.  Degenerate inputs
    (x = y, or a single-point midpoint box) skip the projection.
    """
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    half = 0.5 * float(np.max(np.abs(x - y)))
    if half <= tol:
        return 0.5 * (x + y)
    lo = np.maximum(x, y) - half
    hi = np.minimum(x, y) + half
    mid = 0.5 * (lo + hi)  # equals (x + y) / 2
    if float(np.max(hi - lo)) <= tol:
        return mid
    return project_to_extremal(mid, dm, tol)


class TightSpanSpace(Space):
    """The hull as a Space: points are extremal vectors under the sup metric."""

    def __init__(self, complex_: TightSpanComplex):
        self.complex = complex_
        self.dm = complex_.space
        self._geodesics: HullGeodesics | None = None

    @property
    def geodesics(self) -> HullGeodesics:
        if self._geodesics is None:
            self._geodesics = HullGeodesics(self.complex)
        return self._geodesics

    @property
    def dim(self) -> int:
        return self.dm.n

    def contains(self, p, tol: float = 1e-6) -> bool:
        ok, _ = is_admissible(p, self.dm, tol)
        return ok and extremality_residual(p, self.dm) <= tol

    def distance(self, p, q) -> float:
        return tight_span_distance(p, q)

    def dist_rows(self, ps, qs) -> np.ndarray:
        a = np.asarray(ps, dtype=float)
        b = np.asarray(qs, dtype=float)
        return np.max(np.abs(a - b), axis=-1)

    def dist_matrix(self, ps, qs) -> np.ndarray:
        a = np.asarray(ps, dtype=float)
        b = np.asarray(qs, dtype=float)
        return np.max(np.abs(a[:, None, :] - b[None, :, :]), axis=-1)

    def midpoint(self, p, q) -> np.ndarray:
        if self.geodesics.supported:
            return self.interp(p, q, 0.5)
        return hull_midpoint(self.dm, p, q)

    def interp(self, p, q, t: float):
        """Canonical-selection interpolation when the complex supports it;
        otherwise retraction of the affine point (adjacent samples only)."""
        if self.geodesics.supported:
            chain = self.geodesics.route(p, q)
            total = sum(float(np.max(np.abs(b - a))) for a, b in zip(chain, chain[1:]))
            return hull_route_point(chain, t * total)
        g = (1.0 - t) * np.asarray(p, float) + t * np.asarray(q, float)
        return retract_into_hull(g, self.dm)

    def interp_many(self, p, q, ts):
        if self.geodesics.supported:
            chain = self.geodesics.route(p, q)
            total = sum(float(np.max(np.abs(b - a))) for a, b in zip(chain, chain[1:]))
            return [hull_route_point(chain, float(t) * total) for t in ts]
        return [self.interp(p, q, float(t)) for t in ts]

    def sample_point(self, rng):
        cells = self.complex.cells
        cell = cells[int(rng.integers(len(cells)))]
        w = rng.random(cell.vertices.shape[0])
        w /= w.sum()
        return w @ cell.vertices

    def default_net(self):
        seen = {}
        for c in self.complex.cells:
            for v in c.vertices:
                seen[tuple(np.round(v, 9))] = v
        return [seen[k] for k in sorted(seen)]

    def net_neighbors(self, p):
        key = tuple(np.round(np.asarray(p, float), 9))
        out = []
        for c in self.complex.cells:
            keys = [tuple(np.round(v, 9)) for v in c.vertices]
            if key in keys:
                out.extend(v for v, k in zip(c.vertices, keys) if k != key)
        uniq = {tuple(np.round(v, 9)): v for v in out}
        return [uniq[k] for k in sorted(uniq)]

    def coverage_probes(self):
        probes = list(self.default_net())
        for c in self.complex.cells:
            if c.dim >= 1:
                probes.append(c.interior_point())
        return probes

    def point_to_json(self, p):
        return [float(v) for v in np.asarray(p, float)]

    def point_from_json(self, obj):
        return np.asarray(obj, dtype=float)

    def draw_xy(self, p, axes: tuple[int, int] = (0, 1)):
        p = np.asarray(p, float)
        return float(p[axes[0]]), float(p[axes[1]])
