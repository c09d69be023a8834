"""Finite metric spaces, l-infinity geometry, and Lipschitz extension.

A finite metric space is a validated symmetric matrix of nonnegative reals.
The l-infinity side provides the ambient geometry used everywhere else:
Kuratowski embeddings, sup-distance, and coordinatewise McShane extension
of partially defined 1-Lipschitz maps.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .tolerances import TOL_LIP, TOL_METRIC


class MetricError(ValueError):
    """A metric axiom failed.  Carries the axiom name and witnessing indices."""

    def __init__(self, axiom: str, indices: tuple, detail: str = ""):
        self.axiom = axiom
        self.indices = tuple(indices)
        msg = f"{axiom} at {self.indices}"
        if detail:
            msg += f": {detail}"
        super().__init__(msg)


@dataclass(frozen=True)
class DistanceMatrix:
    """A finite metric space: point labels plus an n x n distance matrix."""

    labels: tuple[str, ...]
    d: np.ndarray = field(repr=False)

    @property
    def n(self) -> int:
        return len(self.labels)

    def distance(self, i: int, j: int) -> float:
        return float(self.d[i, j])

    def submatrix(self, idx: list[int]) -> "DistanceMatrix":
        idx = list(idx)
        return DistanceMatrix(
            tuple(self.labels[i] for i in idx), self.d[np.ix_(idx, idx)].copy()
        )

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, DistanceMatrix)
            and self.labels == other.labels
            and np.array_equal(self.d, other.d)
        )


def validate_metric(
    d,
    labels: list[str] | None = None,
    tol: float = TOL_METRIC,
) -> DistanceMatrix:
    """Validate a square matrix as a metric and wrap it.

    Raises MetricError naming the first violated axiom (not-square, asymmetry,
    nonzero-diagonal, negative-entry, zero-off-diagonal, triangle) together
    with the witnessing indices.
    """
    a = np.asarray(d, dtype=float)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise MetricError("not-square", a.shape)
    n = a.shape[0]
    if labels is None:
        labels = [f"p{i}" for i in range(n)]
    if len(labels) != n:
        raise MetricError("label-count", (len(labels), n))

    bad = np.argwhere(np.abs(a - a.T) > tol)
    if bad.size:
        i, j = (int(v) for v in bad[0])
        raise MetricError("asymmetry", (i, j), f"{a[i, j]} != {a[j, i]}")
    diag = np.abs(np.diagonal(a))
    if diag.max(initial=0.0) > tol:
        i = int(np.argmax(diag))
        raise MetricError("nonzero-diagonal", (i,), f"{a[i, i]}")
    neg = np.argwhere(a < -tol)
    if neg.size:
        i, j = (int(v) for v in neg[0])
        raise MetricError("negative-entry", (i, j), f"{a[i, j]}")
    off = a + np.eye(n)  # mask the diagonal before testing positivity
    zero = np.argwhere(off <= tol)
    if zero.size:
        i, j = (int(v) for v in zero[0])
        raise MetricError("zero-off-diagonal", (i, j))
    for k in range(n):
        # d(i, j) <= d(i, k) + d(k, j) for the intermediate point k
        viol = np.argwhere(a > a[:, [k]] + a[None, k, :] + tol)
        if viol.size:
            i, j = (int(v) for v in viol[0])
            raise MetricError(
                "triangle", (i, j, k), f"{a[i, j]} > {a[i, k]} + {a[k, j]}"
            )
    return DistanceMatrix(tuple(labels), a.copy())


def linf_distance(u, v) -> float:
    """Sup distance between two coordinate vectors of equal dimension."""
    u = np.asarray(u, dtype=float)
    v = np.asarray(v, dtype=float)
    if u.shape != v.shape:
        raise ValueError(f"dimension mismatch: {u.shape} vs {v.shape}")
    if u.size == 0:
        return 0.0
    return float(np.max(np.abs(u - v)))


def kuratowski_embed(space: DistanceMatrix) -> np.ndarray:
    """Embed a finite metric space into l-infinity over its own point set.

    Point i maps to its distance row; pairwise sup distances reproduce the
    input metric exactly.
    """
    return space.d.copy()


def is_lipschitz(
    space: DistanceMatrix,
    anchors: list[int],
    values: np.ndarray,
    bound: float = 1.0,
    tol: float = TOL_LIP,
) -> tuple[bool, float, tuple[int, int]]:
    """Sampled Lipschitz audit of a partial map into l-infinity.

    Returns (ok, worst ratio excess, witnessing anchor pair).  The excess is
    max over pairs of (sup-distance of images - bound * source distance).
    """
    worst = -np.inf
    pair = (-1, -1)
    for ai, a in enumerate(anchors):
        for bi in range(ai + 1, len(anchors)):
            b = anchors[bi]
            excess = linf_distance(values[ai], values[bi]) - bound * space.d[a, b]
            if excess > worst:
                worst = excess
                pair = (a, b)
    if worst == -np.inf:
        worst = 0.0
    return worst <= tol, float(worst), pair


def mcshane_extend(
    space: DistanceMatrix,
    anchors: list[int],
    values: np.ndarray,
    tol: float = TOL_LIP,
) -> np.ndarray:
    """Extend a 1-Lipschitz map {anchors} -> l-infinity to the whole space.

    Coordinatewise: f_k(b) = min over anchors a of (f_k(a) + d(a, b)).  The
    result is 1-Lipschitz and restricts to the input values on the anchors.
    Raises MetricError("not-lipschitz", ...) if the input map is not
    1-Lipschitz on the anchor set.
    """
    values = np.atleast_2d(np.asarray(values, dtype=float))
    if len(anchors) != values.shape[0]:
        raise ValueError("one value row per anchor required")
    ok, excess, pair = is_lipschitz(space, anchors, values, tol=tol)
    if not ok:
        raise MetricError("not-lipschitz", pair, f"excess {excess:.3e}")
    # rows: candidate anchor a, cols: target point b
    da = space.d[np.asarray(anchors, dtype=int), :]  # (m, n)
    out = np.min(values[:, None, :] + da[:, :, None], axis=0)  # (n, dim)
    return out
