"""Built-in model spaces with validated default atlases.

Each generator returns a Model: the space, a chart atlas that passes
validation, and the metadata needed to serialize both.  The models are the
desk-scale instances everything else is exercised on: cycles (locally like
an interval, globally not), flat cylinders (non-simply-connected with a
planar development), metric trees, sup-norm rectangles, and tripods realized
as injective hulls.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .bicombing import BicombingHandle, linear_bicombing, shortest_arc_bicombing, solver_bicombing
from .localglobal import Chart, ChartAtlas
from .metric import validate_metric
from .spaces import CycleSpace, CylinderSpace, LinfBox, Space, WeightedGraphSpace
from .tightspan import TightSpanSpace, enumerate_cells


@dataclass
class Model:
    name: str
    space: Space
    atlas: ChartAtlas
    meta: dict = field(default_factory=dict)


def _restricted(handle: BicombingHandle, center, radius: float) -> BicombingHandle:
    return BicombingHandle(handle.space, handle.evaluator, ("ball", center, radius), handle.name)


def make_cycle(n: int) -> Model:
    """Circle of circumference n with interval charts of radius min(2, n/4).

    Inside such a chart the short arc is the unique geodesic and stays in
    the chart, so the arc selection is a convex chart bicombing.
    """
    if n < 6:
        raise ValueError("cycle needs n >= 6")
    space = CycleSpace(float(n))
    radius = min(2.0, n / 4.0)
    base = shortest_arc_bicombing(space)
    charts = [Chart(float(k), radius, _restricted(base, float(k), radius)) for k in range(int(n))]
    return Model("cycle", space, ChartAtlas(space, charts), {"n": n, "chart_radius": radius})


def make_cylinder(circumference: float, height: float) -> Model:
    """Flat cylinder with planar charts on the integer grid."""
    if circumference < 8:
        raise ValueError("cylinder needs circumference >= 8 for radius-2 charts")
    if height <= 0:
        raise ValueError("cylinder height must be positive")
    space = CylinderSpace(float(circumference), float(height))
    radius = min(2.0, circumference / 4.0)
    base = shortest_arc_bicombing(space)
    charts = []
    for x in np.arange(0.0, circumference, 1.0):
        for y in np.arange(0.0, height + 1e-9, 1.0):
            c = np.array([x, y])
            charts.append(Chart(c, radius, _restricted(base, c, radius)))
    return Model(
        "cylinder",
        space,
        ChartAtlas(space, charts),
        {"circumference": circumference, "height": height, "chart_radius": radius},
    )


def make_rectangle(width: float, height: float, chart_radius: float = 2.0) -> Model:
    """A single sup-norm 2-cell with the affine bicombing on grid charts."""
    if width <= 0 or height <= 0:
        raise ValueError("rectangle sides must be positive")
    space = LinfBox(np.array([0.0, 0.0]), np.array([width, height]))
    base = linear_bicombing(space)
    charts = []
    for x in np.arange(0.0, width + 1e-9, 1.0):
        for y in np.arange(0.0, height + 1e-9, 1.0):
            c = np.array([x, y])
            charts.append(Chart(c, chart_radius, _restricted(base, c, chart_radius)))
    return Model(
        "rectangle",
        space,
        ChartAtlas(space, charts),
        {"width": width, "height": height, "chart_radius": chart_radius},
    )


def make_tree(edges: list[tuple[int, int, float]], n_vertices: int | None = None) -> Model:
    """Metric tree from a weighted edge list; arcs are globally unique."""
    if n_vertices is None:
        n_vertices = 1 + max(max(u, v) for u, v, _ in edges)
    space = WeightedGraphSpace(n_vertices, [(int(u), int(v), float(w)) for u, v, w in edges])
    if not space.is_tree:
        raise ValueError("edge list does not form a tree")
    max_edge = max(space.edge_len.values())
    radius = max_edge + 0.5
    base = shortest_arc_bicombing(space)
    charts = [
        Chart(space.vertex(i), radius, _restricted(base, space.vertex(i), radius))
        for i in range(n_vertices)
    ]
    return Model(
        "tree",
        space,
        ChartAtlas(space, charts),
        {"edges": [[int(u), int(v), float(w)] for u, v, w in edges], "chart_radius": radius},
    )


def random_tree_edges(n_vertices: int, rng: np.random.Generator) -> list[tuple[int, int, float]]:
    return [
        (int(rng.integers(i)), i, float(0.5 + 1.5 * rng.random())) for i in range(1, n_vertices)
    ]


def tripod_metric(a: float, b: float, c: float):
    d = np.array([[0.0, a + b, a + c], [a + b, 0.0, b + c], [a + c, b + c, 0.0]])
    return validate_metric(d, ["A", "B", "C"])


def make_tripod(a: float, b: float, c: float) -> Model:
    """Injective hull of a three-point space: a tripod with legs a, b, c.

    Charts sit at the branch point and the leaves; the hull is injective and
    contractible, so its solver bicombing restricts to every ball.
    """
    if min(a, b, c) <= 0:
        raise ValueError("tripod legs must be positive")
    dm = tripod_metric(a, b, c)
    space = TightSpanSpace(enumerate_cells(dm))
    base = solver_bicombing(space, depth=7)
    center = np.array([a, b, c])  # branch point: distances to the leaves
    diam = max(a + b, a + c, b + c)
    charts = [Chart(center, diam + 0.5, _restricted(base, center, diam + 0.5))]
    for leaf, leg in zip(dm.d, (a, b, c)):
        charts.append(Chart(leaf.copy(), 0.9 * leg, _restricted(base, leaf.copy(), 0.9 * leg)))
    return Model(
        "tripod", space, ChartAtlas(space, charts), {"legs": [a, b, c]}
    )


def make_tightspan_model(dm, depth: int = 7) -> Model:
    """Hull of an arbitrary small metric with one global solver chart per
    cell vertex (injective spaces need no genuinely local charts)."""
    space = TightSpanSpace(enumerate_cells(dm))
    base = solver_bicombing(space, depth=depth)
    net = space.default_net()
    diam = max(space.distance(p, q) for p in net for q in net)
    charts = [Chart(p, diam + 0.5, _restricted(base, p, diam + 0.5)) for p in net]
    return Model("tightspan", space, ChartAtlas(space, charts), {"n_points": dm.n})


def tripod_leg_point(legs: tuple[float, float, float], leg: int, s: float) -> np.ndarray:
    """Hull coordinates of the tripod point on a leg at distance s from the
    branch point (an independent combinatorial parametrization for oracles)."""
    a, b, c = legs
    center = np.array([a, b, c])
    out = center + s
    out[leg] = center[leg] - s
    return out


def generate_model(name: str, **params) -> Model:
    builders = {
        "cycle": lambda: make_cycle(int(params["n"])),
        "cylinder": lambda: make_cylinder(float(params["m"]), float(params["h"])),
        "tripod": lambda: make_tripod(float(params["a"]), float(params["b"]), float(params["c"])),
        "rectangle": lambda: make_rectangle(float(params["w"]), float(params["h"])),
        "tree": lambda: make_tree([tuple(e) for e in params["edges"]]),
    }
    if name not in builders:
        raise ValueError(f"unknown model {name!r}; choose from {sorted(builders)}")
    return builders[name]()
