"""Sampled polyline paths: length, sup distance, geodesic defect.

Paths are dyadically sampled; the supremum definitions of length and sup
distance are evaluated on the sample partition, which attains them (up to
resampling tolerance) on the piecewise-geodesic model spaces used here.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .spaces import Space
from .tolerances import TOL_SAMPLE


def dyadic_params(depth: int) -> np.ndarray:
    return np.linspace(0.0, 1.0, 2**depth + 1)


@dataclass
class PolyLinePath:
    """An ordered list of (parameter, point) samples on a space.

    Parameters increase strictly from 0 to 1; evaluation between samples uses
    the space's short-range interpolation, so consecutive samples must be
    close enough to sit in a common chart (or on a common edge).
    """

    space: Space
    params: np.ndarray
    points: list

    def __post_init__(self):
        self.params = np.asarray(self.params, dtype=float)
        if self.params.ndim != 1 or len(self.points) != self.params.size:
            raise ValueError("one point per parameter required")
        if self.params.size < 2:
            raise ValueError("need at least two samples")
        if abs(self.params[0]) > 1e-12 or abs(self.params[-1] - 1.0) > 1e-12:
            raise ValueError("parameters must span [0, 1]")
        if np.any(np.diff(self.params) <= 0):
            raise ValueError("parameters must increase strictly")
        self._arc_cache = None

    @property
    def start(self):
        return self.points[0]

    @property
    def end(self):
        return self.points[-1]

    def segment_lengths(self) -> np.ndarray:
        return self.space.dist_rows(self.points[:-1], self.points[1:])

    def eval(self, t: float):
        t = float(np.clip(t, 0.0, 1.0))
        i = int(np.searchsorted(self.params, t, side="right") - 1)
        i = min(max(i, 0), self.params.size - 2)
        a, b = self.params[i], self.params[i + 1]
        frac = 0.0 if b == a else (t - a) / (b - a)
        if frac <= 1e-15:
            return self.points[i]
        if frac >= 1.0 - 1e-15:
            return self.points[i + 1]
        return self.space.interp(self.points[i], self.points[i + 1], frac)

    def resample(self, params) -> "PolyLinePath":
        params = np.asarray(params, dtype=float)
        return PolyLinePath(self.space, params, [self.eval(t) for t in params])

    def reversed(self) -> "PolyLinePath":
        return PolyLinePath(self.space, 1.0 - self.params[::-1], list(self.points[::-1]))

    def arclength_grid(self) -> np.ndarray:
        # samples never mutate after construction, so cache the grid
        if self._arc_cache is None:
            seg = self.segment_lengths()
            self._arc_cache = np.concatenate([[0.0], np.cumsum(seg)])
        return self._arc_cache

    def eval_arclength(self, s: float):
        """Point at arclength s from the start (clamped to the path)."""
        grid = self.arclength_grid()
        total = grid[-1]
        s = float(np.clip(s, 0.0, total))
        i = int(np.searchsorted(grid, s, side="right") - 1)
        i = min(max(i, 0), grid.size - 2)
        span = grid[i + 1] - grid[i]
        frac = 0.0 if span <= 1e-15 else (s - grid[i]) / span
        if frac <= 1e-15:
            return self.points[i]
        return self.space.interp(self.points[i], self.points[i + 1], frac)


def constant_path(space: Space, point, n_samples: int = 2) -> PolyLinePath:
    params = np.linspace(0.0, 1.0, max(2, n_samples))
    return PolyLinePath(space, params, [point] * params.size)


def path_from_interp(space: Space, p, q, depth: int = 5) -> PolyLinePath:
    """Dyadic sampling of the locally unique geodesic from p to q."""
    ts = dyadic_params(depth)
    return PolyLinePath(space, ts, space.interp_many(p, q, ts))


def path_length(path: PolyLinePath) -> float:
    """Sum of sample-to-sample distances (the attained partition supremum)."""
    return float(np.sum(path.segment_lengths()))


def path_distance(c: PolyLinePath, cprime: PolyLinePath, refine: int = 0) -> float:
    """Sup distance between two paths over a common parameter refinement."""
    if c.space is not cprime.space and type(c.space) is not type(cprime.space):
        raise ValueError("paths live in incompatible spaces")
    grid = np.union1d(c.params, cprime.params)
    if refine > 0:
        fine = [grid]
        for a, b in zip(grid[:-1], grid[1:]):
            fine.append(np.linspace(a, b, refine + 2)[1:-1])
        grid = np.union1d(np.concatenate(fine), grid)
    pa = [c.eval(t) for t in grid]
    pb = [cprime.eval(t) for t in grid]
    return float(np.max(c.space.dist_rows(pa, pb)))


def geodesic_defect(path: PolyLinePath, max_pairs: int = 250_000) -> float:
    """Worst deviation from d(c(s), c(t)) = |s - t| * d(c(0), c(1)).

    Evaluated over all sample pairs (subsampled if the pair count explodes).
    """
    pts = path.points
    ts = path.params
    n = len(pts)
    stride = 1
    while (n // stride) ** 2 > max_pairs:
        stride *= 2
    idx = list(range(0, n, stride))
    if idx[-1] != n - 1:
        idx.append(n - 1)
    total = path.space.distance(pts[0], pts[-1])
    worst = 0.0
    for a_pos, i in enumerate(idx):
        js = idx[a_pos + 1 :]
        if not js:
            continue
        di = path.space.dist_rows([pts[i]] * len(js), [pts[j] for j in js])
        expect = np.abs(ts[np.asarray(js)] - ts[i]) * total
        worst = max(worst, float(np.max(np.abs(di - expect))))
    return worst


def is_geodesic(path: PolyLinePath, tol: float = TOL_SAMPLE) -> bool:
    return geodesic_defect(path) <= tol
