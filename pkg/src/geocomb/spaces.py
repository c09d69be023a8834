"""Desk-scale model spaces.

Every space exposes a metric on its points plus a short-range interpolation
``interp`` that realizes the locally unique geodesic between nearby points.
Spaces that are quotients of a line or a strip (cycles, cylinders) also
expose a development: lifting a sampled path to the universal cover, where
nearby consistent local geodesics are straight segments.

Point representations are per space: floats on a cycle, (x, y) arrays on a
cylinder or box, (i, j, offset) edge points on a weighted graph, integer
indices in a finite space.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations

import numpy as np

from .metric import DistanceMatrix, MetricError, validate_metric
from .tolerances import TOL_METRIC


class Space:
    """Base interface: metric, local interpolation, sampling, serialization."""

    dim_hint = 2  # coordinates used when drawing

    def distance(self, p, q) -> float:
        raise NotImplementedError

    def dist_rows(self, ps, qs) -> np.ndarray:
        """Vectorized distance between two equal-length point sequences."""
        return np.array([self.distance(p, q) for p, q in zip(ps, qs)])

    def dist_matrix(self, ps, qs) -> np.ndarray:
        """Full cross matrix of distances, (len(ps), len(qs))."""
        return np.array([[self.distance(p, q) for q in qs] for p in ps])

    def interp(self, p, q, t: float):
        """Point at parameter t on the locally unique geodesic from p to q."""
        raise NotImplementedError

    def interp_rows(self, ps, qs, t: float) -> list | None:
        """Batched interp over aligned point sequences; None if unsupported."""
        return None

    def interp_many(self, p, q, ts) -> list:
        return [self.interp(p, q, float(t)) for t in ts]

    def sample_point(self, rng: np.random.Generator):
        raise NotImplementedError

    def sample_in_ball(self, center, radius: float, rng: np.random.Generator):
        for _ in range(10_000):
            p = self.sample_point(rng)
            if self.distance(center, p) < radius:
                return p
        raise RuntimeError("ball sampling failed; ball may be empty")

    def default_net(self) -> list:
        """Discrete endpoint net used by cover enumeration."""
        raise NotImplementedError

    def net_neighbors(self, p) -> list:
        raise NotImplementedError

    def coverage_probes(self) -> list:
        """Probe points that a chart atlas must cover."""
        return self.default_net()

    def point_to_json(self, p):
        raise NotImplementedError

    def point_from_json(self, obj):
        raise NotImplementedError

    def point_key(self, p, digits: int = 7) -> tuple:
        """Rounded hashable form for dedup maps."""
        obj = self.point_to_json(p)
        if isinstance(obj, list):
            return tuple(round(float(v), digits) for v in obj)
        return (round(float(obj), digits),)

    def draw_xy(self, p) -> tuple[float, float]:
        """2-d coordinates for SVG output."""
        raise NotImplementedError


# ---------------------------------------------------------------------------
# l-infinity boxes and polytopes
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class LinfBox(Space):
    """An axis box in l-infinity^n; geodesics are affine segments."""

    lo: np.ndarray
    hi: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "lo", np.asarray(self.lo, dtype=float))
        object.__setattr__(self, "hi", np.asarray(self.hi, dtype=float))
        if np.any(self.hi < self.lo):
            raise ValueError("box bounds reversed")

    @property
    def dim(self) -> int:
        return self.lo.size

    def contains(self, p, tol: float = TOL_METRIC) -> bool:
        p = np.asarray(p, dtype=float)
        return bool(np.all(p >= self.lo - tol) and np.all(p <= self.hi + tol))

    def distance(self, p, q) -> float:
        return float(np.max(np.abs(np.asarray(p, float) - np.asarray(q, float))))

    def dist_rows(self, ps, qs) -> np.ndarray:
        a = np.asarray(ps, dtype=float)
        b = np.asarray(qs, dtype=float)
        return np.max(np.abs(a - b), axis=-1)

    def dist_matrix(self, ps, qs) -> np.ndarray:
        a = np.asarray(ps, dtype=float)
        b = np.asarray(qs, dtype=float)
        return np.max(np.abs(a[:, None, :] - b[None, :, :]), axis=-1)

    def interp(self, p, q, t: float):
        p = np.asarray(p, float)
        q = np.asarray(q, float)
        return (1.0 - t) * p + t * q

    def interp_many(self, p, q, ts):
        ts = np.asarray(ts, dtype=float)[:, None]
        p = np.asarray(p, float)[None, :]
        q = np.asarray(q, float)[None, :]
        return list((1.0 - ts) * p + ts * q)

    def interp_rows(self, ps, qs, t: float):
        a = np.asarray(ps, dtype=float)
        b = np.asarray(qs, dtype=float)
        return list((1.0 - t) * a + t * b)

    def unwrap(self, points) -> np.ndarray:
        # the box is its own development
        return np.asarray([np.asarray(p, float) for p in points])

    def lift_near(self, anchor_lift, p) -> np.ndarray:
        return np.asarray(p, dtype=float)

    def sample_point(self, rng):
        return self.lo + rng.random(self.dim) * (self.hi - self.lo)

    def default_net(self, step: float = 1.0) -> list:
        axes = [np.arange(l, h + 1e-9, step) for l, h in zip(self.lo, self.hi)]
        mesh = np.meshgrid(*axes, indexing="ij")
        return [np.array(p) for p in zip(*(m.ravel() for m in mesh))]

    def net_neighbors(self, p):
        out = []
        for k in range(self.dim):
            for s in (-1.0, 1.0):
                q = np.array(p, dtype=float)
                q[k] += s
                if self.contains(q):
                    out.append(q)
        return out

    def coverage_probes(self) -> list:
        return self.default_net(step=0.5)

    def point_to_json(self, p):
        return [float(v) for v in np.asarray(p, float)]

    def point_from_json(self, obj):
        return np.asarray(obj, dtype=float)

    def draw_xy(self, p):
        p = np.asarray(p, float)
        return float(p[0]), float(p[1]) if p.size > 1 else 0.0


class ConvexPolytopeLinf(Space):
    """Convex hull of a vertex list in l-infinity^n.

    Membership is decided by convex-combination feasibility (an LP).
    """

    def __init__(self, vertices):
        self.vertices = np.asarray(vertices, dtype=float)
        if self.vertices.ndim != 2:
            raise ValueError("vertex list must be 2-d")

    @property
    def dim(self) -> int:
        return self.vertices.shape[1]

    def contains(self, p, tol: float = 1e-9) -> bool:
        from scipy.optimize import linprog

        m = self.vertices.shape[0]
        a_eq = np.vstack([self.vertices.T, np.ones(m)])
        b_eq = np.concatenate([np.asarray(p, float), [1.0]])
        res = linprog(
            np.zeros(m), A_eq=a_eq, b_eq=b_eq, bounds=[(0, None)] * m, method="highs"
        )
        return bool(res.status == 0 and res.success)

    def distance(self, p, q) -> float:
        return float(np.max(np.abs(np.asarray(p, float) - np.asarray(q, float))))

    def dist_rows(self, ps, qs) -> np.ndarray:
        a = np.asarray(ps, dtype=float)
        b = np.asarray(qs, dtype=float)
        return np.max(np.abs(a - b), axis=-1)

    def interp(self, p, q, t: float):
        return (1.0 - t) * np.asarray(p, float) + t * np.asarray(q, float)

    def sample_point(self, rng):
        w = rng.random(self.vertices.shape[0])
        w /= w.sum()
        return w @ self.vertices

    def point_to_json(self, p):
        return [float(v) for v in np.asarray(p, float)]

    def point_from_json(self, obj):
        return np.asarray(obj, dtype=float)

    def draw_xy(self, p):
        p = np.asarray(p, float)
        return float(p[0]), float(p[1]) if p.size > 1 else 0.0


# ---------------------------------------------------------------------------
# Cycle and cylinder: quotients of a line / a strip
# ---------------------------------------------------------------------------


def _wrap_delta(delta, circumference: float):
    """Representative of delta mod circumference in (-C/2, C/2]."""
    c = circumference
    d = np.mod(np.asarray(delta, dtype=float) + c / 2.0, c) - c / 2.0
    # mod maps the seam to -C/2; normalize to +C/2 for a deterministic tie
    d = np.where(np.isclose(d, -c / 2.0), c / 2.0, d)
    if np.ndim(delta) == 0:
        return float(d)
    return d


@dataclass(frozen=True)
class CycleSpace(Space):
    """Circle of circumference n (points are floats mod n, unit-speed)."""

    n: float

    dim_hint = 2

    def normalize(self, p) -> float:
        return float(np.mod(p, self.n))

    def distance(self, p, q) -> float:
        return abs(_wrap_delta(q - p, self.n))

    def dist_rows(self, ps, qs) -> np.ndarray:
        return np.abs(_wrap_delta(np.asarray(qs, float) - np.asarray(ps, float), self.n))

    def dist_matrix(self, ps, qs) -> np.ndarray:
        a = np.asarray(ps, dtype=float)
        b = np.asarray(qs, dtype=float)
        return np.abs(_wrap_delta(b[None, :] - a[:, None], self.n))

    def interp(self, p, q, t: float) -> float:
        # shortest arc; antipodal tie resolved in the positive direction
        return self.normalize(p + t * _wrap_delta(q - p, self.n))

    def interp_many(self, p, q, ts):
        d = _wrap_delta(q - p, self.n)
        return list(np.mod(p + np.asarray(ts, float) * d, self.n))

    def interp_rows(self, ps, qs, t: float):
        a = np.asarray(ps, dtype=float)
        b = np.asarray(qs, dtype=float)
        return list(np.mod(a + t * _wrap_delta(b - a, self.n), self.n))

    def unwrap(self, points) -> np.ndarray:
        """Lift a sampled path to the line, starting at its first sample."""
        pts = np.asarray(points, dtype=float)
        steps = _wrap_delta(np.diff(pts), self.n)
        return np.concatenate([[pts[0]], pts[0] + np.cumsum(steps)])

    def lift_near(self, anchor_lift: float, p) -> float:
        """Lift of p on the branch closest to a given lifted anchor."""
        return anchor_lift + _wrap_delta(p - anchor_lift, self.n)

    def sample_point(self, rng):
        return float(rng.random() * self.n)

    def sample_in_ball(self, center, radius, rng):
        r = min(radius, self.n / 2.0)
        return self.normalize(center + (2.0 * rng.random() - 1.0) * r)

    def default_net(self):
        return [float(k) for k in range(int(round(self.n)))]

    def net_neighbors(self, p):
        return [self.normalize(p + 1.0), self.normalize(p - 1.0)]

    def coverage_probes(self):
        step = 0.25
        return list(np.arange(0.0, self.n, step))

    def point_to_json(self, p):
        return float(p)

    def point_from_json(self, obj):
        return float(obj)

    def draw_xy(self, p):
        ang = 2.0 * np.pi * float(p) / self.n
        r = self.n / (2.0 * np.pi)
        return r * np.cos(ang), r * np.sin(ang)


@dataclass(frozen=True)
class CylinderSpace(Space):
    """Flat cylinder: circumference times height strip with wrapped x."""

    circumference: float
    height: float

    def normalize(self, p) -> np.ndarray:
        p = np.asarray(p, dtype=float)
        return np.array([np.mod(p[0], self.circumference), p[1]])

    def contains(self, p, tol: float = TOL_METRIC) -> bool:
        return -tol <= float(p[1]) <= self.height + tol

    def distance(self, p, q) -> float:
        dx = _wrap_delta(q[0] - p[0], self.circumference)
        dy = q[1] - p[1]
        return float(np.hypot(dx, dy))

    def dist_rows(self, ps, qs) -> np.ndarray:
        a = np.asarray(ps, dtype=float)
        b = np.asarray(qs, dtype=float)
        dx = _wrap_delta(b[:, 0] - a[:, 0], self.circumference)
        return np.hypot(dx, b[:, 1] - a[:, 1])

    def dist_matrix(self, ps, qs) -> np.ndarray:
        a = np.asarray(ps, dtype=float)
        b = np.asarray(qs, dtype=float)
        dx = _wrap_delta(b[None, :, 0] - a[:, None, 0], self.circumference)
        return np.hypot(dx, b[None, :, 1] - a[:, None, 1])

    def interp(self, p, q, t: float):
        dx = _wrap_delta(q[0] - p[0], self.circumference)
        x = np.mod(p[0] + t * dx, self.circumference)
        y = p[1] + t * (q[1] - p[1])
        return np.array([x, y])

    def interp_rows(self, ps, qs, t: float):
        a = np.asarray(ps, dtype=float)
        b = np.asarray(qs, dtype=float)
        dx = _wrap_delta(b[:, 0] - a[:, 0], self.circumference)
        xs = np.mod(a[:, 0] + t * dx, self.circumference)
        ys = a[:, 1] + t * (b[:, 1] - a[:, 1])
        return [np.array([x, y]) for x, y in zip(xs, ys)]

    def interp_many(self, p, q, ts):
        ts = np.asarray(ts, dtype=float)
        dx = _wrap_delta(q[0] - p[0], self.circumference)
        xs = np.mod(p[0] + ts * dx, self.circumference)
        ys = p[1] + ts * (q[1] - p[1])
        return [np.array([x, y]) for x, y in zip(xs, ys)]

    def unwrap(self, points) -> np.ndarray:
        """Develop a sampled path into the plane strip (x unbounded)."""
        pts = np.asarray([np.asarray(p, float) for p in points])
        steps = _wrap_delta(np.diff(pts[:, 0]), self.circumference)
        xs = np.concatenate([[pts[0, 0]], pts[0, 0] + np.cumsum(steps)])
        return np.column_stack([xs, pts[:, 1]])

    def lift_near(self, anchor_lift, p) -> np.ndarray:
        x = anchor_lift[0] + _wrap_delta(p[0] - anchor_lift[0], self.circumference)
        return np.array([x, p[1]])

    def sample_point(self, rng):
        return np.array(
            [rng.random() * self.circumference, rng.random() * self.height]
        )

    def default_net(self):
        xs = np.arange(0.0, self.circumference, 1.0)
        ys = np.arange(0.0, self.height + 1e-9, 1.0)
        return [np.array([x, y]) for x in xs for y in ys]

    def net_neighbors(self, p):
        out = []
        for dx, dy in ((1, 0), (-1, 0), (0, 1), (0, -1), (1, 1), (1, -1), (-1, 1), (-1, -1)):
            q = np.array([np.mod(p[0] + dx, self.circumference), p[1] + dy])
            if 0.0 <= q[1] <= self.height:
                out.append(q)
        return out

    def coverage_probes(self):
        xs = np.arange(0.0, self.circumference, 0.5)
        ys = np.arange(0.0, self.height + 1e-9, 0.5)
        return [np.array([x, y]) for x in xs for y in ys]

    def point_to_json(self, p):
        return [float(p[0]), float(p[1])]

    def point_from_json(self, obj):
        return np.asarray(obj, dtype=float)

    def draw_xy(self, p):
        return float(p[0]), float(p[1])


# ---------------------------------------------------------------------------
# Weighted graph spaces (geometric realizations); trees get unique arcs
# ---------------------------------------------------------------------------


GraphPoint = tuple[int, int, float]  # (u, v, offset from u along edge u-v)


@dataclass
class WeightedGraphSpace(Space):
    """Geometric realization of a connected weighted graph.

    Points live on edges: (u, v, t) with u <= v and 0 <= t <= length(u, v).
    Construction validates that the graph is connected, that shortest-path
    distances form a metric, and that every edge is a geodesic segment
    (edge length equals the shortest-path distance of its endpoints), which
    makes local geodesy decidable on the model.
    """

    n_vertices: int
    edges: list[tuple[int, int, float]]
    vertex_labels: tuple[str, ...] = ()

    def __post_init__(self):
        n = self.n_vertices
        if not self.vertex_labels:
            self.vertex_labels = tuple(f"v{i}" for i in range(n))
        self.edge_len: dict[tuple[int, int], float] = {}
        adj: dict[int, list[int]] = {i: [] for i in range(n)}
        for u, v, w in self.edges:
            u, v = (u, v) if u <= v else (v, u)
            if w <= 0:
                raise ValueError("edge lengths must be positive")
            self.edge_len[(u, v)] = float(w)
            adj[u].append(v)
            adj[v].append(u)
        self.adjacency = adj
        d = np.full((n, n), np.inf)
        np.fill_diagonal(d, 0.0)
        nxt = -np.ones((n, n), dtype=int)
        for (u, v), w in self.edge_len.items():
            if w < d[u, v]:
                d[u, v] = d[v, u] = w
                nxt[u, v] = v
                nxt[v, u] = u
        np.fill_diagonal(nxt, np.arange(n))
        for k in range(n):
            for i in range(n):
                through = d[i, k] + d[k, :]
                mask = through < d[i, :] - 1e-15
                d[i, mask] = through[mask]
                nxt[i, mask] = nxt[i, k]
        if np.isinf(d).any():
            raise MetricError("disconnected", tuple(np.argwhere(np.isinf(d))[0]))
        self.dmat = validate_metric(d, list(self.vertex_labels))
        for (u, v), w in self.edge_len.items():
            if abs(d[u, v] - w) > TOL_METRIC:
                raise MetricError("non-geodesic-edge", (u, v), f"{w} > {d[u, v]}")
        self._next = nxt
        self.is_tree = len(self.edge_len) == n - 1

    # -- points ------------------------------------------------------------

    def vertex(self, i: int) -> GraphPoint:
        return (i, i, 0.0)

    def canonical(self, p: GraphPoint) -> GraphPoint:
        u, v, t = p
        if u == v:
            return (u, v, 0.0)
        if u > v:
            u, v, t = v, u, self.edge_len[(v, u)] - t
        length = self.edge_len[(u, v)]
        if t <= 1e-12:
            return (u, u, 0.0)
        if t >= length - 1e-12:
            return (v, v, 0.0)
        return (u, v, float(t))

    def _to_ends(self, p: GraphPoint) -> list[tuple[int, float]]:
        u, v, t = p
        if u == v:
            return [(u, 0.0)]
        return [(u, t), (v, self.edge_len[(u, v)] - t)]

    def distance(self, p, q) -> float:
        p = self.canonical(p)
        q = self.canonical(q)
        best = np.inf
        if p[:2] == q[:2] and p[0] != p[1]:
            best = abs(p[2] - q[2])
        for a, ta in self._to_ends(p):
            for b, tb in self._to_ends(q):
                best = min(best, ta + self.dmat.d[a, b] + tb)
        return float(best)

    def vertex_path(self, a: int, b: int) -> list[int]:
        path = [a]
        while path[-1] != b:
            path.append(int(self._next[path[-1], b]))
        return path

    def arc_anchors(self, p, q) -> list[tuple[float, GraphPoint]]:
        """Breakpoints (cumulative length, point) of a shortest arc p -> q.

        Unique on trees; on other graphs ties break lexicographically on the
        (entry, exit) vertex pair.
        """
        p = self.canonical(p)
        q = self.canonical(q)
        if p == q:
            return [(0.0, p), (0.0, q)]
        if p[:2] == q[:2] and p[0] != p[1]:
            direct = abs(p[2] - q[2])
        else:
            direct = np.inf
        best = (direct, None)
        for a, ta in sorted(self._to_ends(p)):
            for b, tb in sorted(self._to_ends(q)):
                total = ta + self.dmat.d[a, b] + tb
                if total < best[0] - 1e-12:
                    best = (total, (a, b, ta, tb))
        if best[1] is None:
            return [(0.0, p), (direct, q)]
        total, (a, b, ta, tb) = best
        anchors: list[tuple[float, GraphPoint]] = [(0.0, p)]
        acc = ta
        vpath = self.vertex_path(a, b)
        for idx, vtx in enumerate(vpath):
            anchors.append((acc, self.vertex(vtx)))
            if idx + 1 < len(vpath):
                acc += self.edge_len[tuple(sorted((vtx, vpath[idx + 1])))]
        anchors.append((acc + tb, q))
        # drop zero-length lead-in/out duplicates
        cleaned = [anchors[0]]
        for s, pt in anchors[1:]:
            if s - cleaned[-1][0] > 1e-12:
                cleaned.append((s, pt))
            else:
                cleaned[-1] = (cleaned[-1][0], pt)
        if cleaned[-1][1] != q:
            cleaned.append((total, q))
        return cleaned

    def point_along(self, anchors, s: float) -> GraphPoint:
        total = anchors[-1][0]
        s = min(max(s, 0.0), total)
        for (s0, p0), (s1, p1) in zip(anchors, anchors[1:]):
            if s <= s1 + 1e-12:
                if s1 - s0 <= 1e-12:
                    return p1
                frac = (s - s0) / (s1 - s0)
                return self._edge_interp(p0, p1, frac)
        return anchors[-1][1]

    def _edge_interp(self, p, q, frac: float) -> GraphPoint:
        """Interpolate between two points sharing an edge or a vertex."""
        p = self.canonical(p)
        q = self.canonical(q)
        pu, pv, pt = p
        qu, qv, qt = q
        if p[:2] == q[:2] and pu != pv:
            return self.canonical((pu, pv, pt + frac * (qt - pt)))
        # vertex to edge-point (or vertex to vertex along one edge)
        if pu == pv and qu == qv:
            e = tuple(sorted((pu, qu)))
            length = self.edge_len[e]
            t = frac * length
            return self.canonical((e[0], e[1], t if e[0] == pu else length - t))
        if pu == pv:
            u, v, t = q
            if pu == u:
                return self.canonical((u, v, frac * t))
            return self.canonical((u, v, self.edge_len[(u, v)] - frac * (self.edge_len[(u, v)] - t)))
        if qu == qv:
            u, v, t = p
            if qu == u:
                return self.canonical((u, v, t - frac * t))
            return self.canonical((u, v, t + frac * (self.edge_len[(u, v)] - t)))
        raise ValueError(f"points {p} and {q} share no edge")

    def interp(self, p, q, t: float):
        anchors = self.arc_anchors(p, q)
        return self.point_along(anchors, t * anchors[-1][0])

    def interp_many(self, p, q, ts):
        anchors = self.arc_anchors(p, q)
        total = anchors[-1][0]
        return [self.point_along(anchors, float(t) * total) for t in ts]

    def sample_point(self, rng):
        keys = sorted(self.edge_len)
        u, v = keys[rng.integers(len(keys))]
        return self.canonical((u, v, float(rng.random() * self.edge_len[(u, v)])))

    def default_net(self):
        return [self.vertex(i) for i in range(self.n_vertices)]

    def net_neighbors(self, p):
        u, v, t = self.canonical(p)
        if u != v:
            return [self.vertex(u), self.vertex(v)]
        return [self.vertex(w) for w in sorted(self.adjacency[u])]

    def coverage_probes(self):
        probes = [self.vertex(i) for i in range(self.n_vertices)]
        for (u, v), w in sorted(self.edge_len.items()):
            for frac in (0.25, 0.5, 0.75):
                probes.append(self.canonical((u, v, frac * w)))
        return probes

    def point_to_json(self, p):
        u, v, t = self.canonical(p)
        return [int(u), int(v), float(t)]

    def point_from_json(self, obj):
        return self.canonical((int(obj[0]), int(obj[1]), float(obj[2])))

    def point_key(self, p, digits: int = 7):
        u, v, t = self.canonical(p)
        return (u, v, round(t, digits))

    def draw_xy(self, p):
        # crude spring-free layout: place vertices on a circle
        u, v, t = self.canonical(p)
        n = self.n_vertices
        ang = lambda i: 2.0 * np.pi * i / n
        ax, ay = np.cos(ang(u)), np.sin(ang(u))
        if u == v:
            return float(ax), float(ay)
        bx, by = np.cos(ang(v)), np.sin(ang(v))
        frac = t / self.edge_len[(u, v)]
        return float(ax + frac * (bx - ax)), float(ay + frac * (by - ay))


# ---------------------------------------------------------------------------
# Finite spaces
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class FiniteSpace(Space):
    """A finite metric space; points are integer indices."""

    dm: DistanceMatrix

    @property
    def n(self) -> int:
        return self.dm.n

    def distance(self, p, q) -> float:
        return float(self.dm.d[int(p), int(q)])

    def points(self) -> list[int]:
        return list(range(self.n))

    def sample_point(self, rng):
        return int(rng.integers(self.n))

    def default_net(self):
        return self.points()

    def point_to_json(self, p):
        return int(p)

    def point_from_json(self, obj):
        return int(obj)

    def point_key(self, p, digits: int = 7):
        return (int(p),)


def cycle_metric(n: int) -> DistanceMatrix:
    """Vertex metric of the n-cycle with unit edges."""
    idx = np.arange(n)
    diff = np.abs(idx[:, None] - idx[None, :])
    d = np.minimum(diff, n - diff).astype(float)
    return validate_metric(d, [f"c{i}" for i in range(n)])


def cycle_graph(n: int) -> WeightedGraphSpace:
    edges = [(i, (i + 1) % n, 1.0) for i in range(n)]
    return WeightedGraphSpace(n, edges)


def random_graph_metric(n: int, rng: np.random.Generator) -> DistanceMatrix:
    """Shortest-path metric of a random connected weighted graph."""
    edges = []
    for i in range(1, n):
        j = int(rng.integers(i))
        edges.append((j, i, float(0.5 + rng.random())))
    for i, j in combinations(range(n), 2):
        if rng.random() < 0.3:
            edges.append((i, j, float(0.5 + 2.0 * rng.random())))
    d = np.full((n, n), np.inf)
    np.fill_diagonal(d, 0.0)
    for u, v, w in edges:
        d[u, v] = min(d[u, v], w)
        d[v, u] = d[u, v]
    for k in range(n):
        d = np.minimum(d, d[:, [k]] + d[[k], :])
    return validate_metric(d)
