"""JSON schemas for spaces, atlases, plans, families, paths, and reports.

Every file carries a schema version; readers reject unknown fields and
unsupported versions so that re-running a configuration reproduces the same
report byte for byte (timings aside).
"""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from .bicombing import SamplePlan, linear_bicombing, shortest_arc_bicombing, solver_bicombing
from .hyperconvex import BallFamily
from .localglobal import Chart, ChartAtlas
from .metric import DistanceMatrix, validate_metric
from .paths import PolyLinePath
from .spaces import (
    CycleSpace,
    CylinderSpace,
    FiniteSpace,
    LinfBox,
    Space,
    WeightedGraphSpace,
)
from .tightspan import TightSpanComplex, TightSpanSpace, enumerate_cells

SCHEMA_VERSION = 1


class SchemaError(ValueError):
    pass


def _check_fields(obj: dict, required: set[str], optional: set[str], where: str) -> None:
    if not isinstance(obj, dict):
        raise SchemaError(f"{where}: expected an object")
    version = obj.get("version", SCHEMA_VERSION)
    if version != SCHEMA_VERSION:
        raise SchemaError(f"{where}: unsupported schema version {version!r}")
    unknown = set(obj) - required - optional - {"version"}
    if unknown:
        raise SchemaError(f"{where}: unknown fields {sorted(unknown)}")
    missing = required - set(obj)
    if missing:
        raise SchemaError(f"{where}: missing fields {sorted(missing)}")


def dump_json(obj, path: str | Path) -> None:
    Path(path).write_text(json.dumps(obj, indent=1, sort_keys=True) + "\n")


def load_json(path: str | Path) -> dict:
    try:
        return json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise SchemaError(f"{path}: invalid JSON at line {exc.lineno}: {exc.msg}") from exc


# -- metric and graph files --------------------------------------------------


def metric_to_json(dm: DistanceMatrix) -> dict:
    return {
        "version": SCHEMA_VERSION,
        "labels": list(dm.labels),
        "d": [[float(v) for v in row] for row in dm.d],
    }


def metric_from_json(obj: dict) -> DistanceMatrix:
    _check_fields(obj, {"labels", "d"}, set(), "metric file")
    return validate_metric(obj["d"], list(obj["labels"]))


def graph_from_json(obj: dict) -> WeightedGraphSpace:
    _check_fields(obj, {"vertices", "edges"}, set(), "graph file")
    labels = [str(v) for v in obj["vertices"]]
    edges = [(int(u), int(v), float(w)) for u, v, w in obj["edges"]]
    return WeightedGraphSpace(len(labels), edges, tuple(labels))


def graph_to_json(g: WeightedGraphSpace) -> dict:
    return {
        "version": SCHEMA_VERSION,
        "vertices": list(g.vertex_labels),
        "edges": [[u, v, w] for (u, v), w in sorted(g.edge_len.items())],
    }


# -- spaces -------------------------------------------------------------------


def space_to_json(space: Space) -> dict:
    if isinstance(space, CycleSpace):
        return {"version": SCHEMA_VERSION, "type": "cycle", "n": float(space.n)}
    if isinstance(space, CylinderSpace):
        return {
            "version": SCHEMA_VERSION,
            "type": "cylinder",
            "circumference": space.circumference,
            "height": space.height,
        }
    if isinstance(space, LinfBox):
        return {
            "version": SCHEMA_VERSION,
            "type": "box",
            "lo": [float(v) for v in space.lo],
            "hi": [float(v) for v in space.hi],
        }
    if isinstance(space, WeightedGraphSpace):
        return dict(graph_to_json(space), type="graph")
    if isinstance(space, TightSpanSpace):
        return dict(metric_to_json(space.dm), type="tightspan")
    if isinstance(space, FiniteSpace):
        return dict(metric_to_json(space.dm), type="finite")
    raise SchemaError(f"cannot serialize space {type(space).__name__}")


def space_from_json(obj: dict) -> Space:
    if not isinstance(obj, dict) or "type" not in obj:
        raise SchemaError("space file: missing 'type'")
    kind = obj["type"]
    rest = {k: v for k, v in obj.items() if k != "type"}
    if kind == "cycle":
        _check_fields(rest, {"n"}, set(), "cycle space")
        return CycleSpace(float(rest["n"]))
    if kind == "cylinder":
        _check_fields(rest, {"circumference", "height"}, set(), "cylinder space")
        return CylinderSpace(float(rest["circumference"]), float(rest["height"]))
    if kind == "box":
        _check_fields(rest, {"lo", "hi"}, set(), "box space")
        return LinfBox(np.asarray(rest["lo"], float), np.asarray(rest["hi"], float))
    if kind == "graph":
        return graph_from_json(rest)
    if kind == "tightspan":
        return TightSpanSpace(enumerate_cells(metric_from_json(rest)))
    if kind == "finite":
        return FiniteSpace(metric_from_json(rest))
    raise SchemaError(f"space file: unknown type {kind!r}")


# -- atlases ------------------------------------------------------------------

_BICOMBING_BUILDERS = {
    "shortest-arc-graph": lambda space: shortest_arc_bicombing(space),
    "linear-chart": lambda space: linear_bicombing(space),
    "tight-span-solver": lambda space: solver_bicombing(space),
}


def atlas_to_json(atlas: ChartAtlas, bicombing_name: str) -> dict:
    if bicombing_name not in _BICOMBING_BUILDERS:
        raise SchemaError(f"unknown bicombing spec {bicombing_name!r}")
    return {
        "version": SCHEMA_VERSION,
        "space": space_to_json(atlas.space),
        "charts": [
            {
                "center": atlas.space.point_to_json(ch.center),
                "radius": float(ch.radius),
                "bicombing": bicombing_name,
            }
            for ch in atlas.charts
        ],
    }


def atlas_from_json(obj: dict) -> ChartAtlas:
    _check_fields(obj, {"space", "charts"}, set(), "atlas file")
    space = space_from_json(obj["space"])
    charts = []
    for entry in obj["charts"]:
        _check_fields(entry, {"center", "radius", "bicombing"}, set(), "chart entry")
        name = entry["bicombing"]
        if name not in _BICOMBING_BUILDERS:
            raise SchemaError(f"chart entry: unknown bicombing {name!r}")
        base = _BICOMBING_BUILDERS[name](space)
        center = space.point_from_json(entry["center"])
        radius = float(entry["radius"])
        from .bicombing import BicombingHandle

        handle = BicombingHandle(space, base.evaluator, ("ball", center, radius), base.name)
        charts.append(Chart(center, radius, handle))
    return ChartAtlas(space, charts)


# -- plans, families, paths ---------------------------------------------------


def plan_to_json(space: Space, plan: SamplePlan) -> dict:
    return {
        "version": SCHEMA_VERSION,
        "pairs": [[space.point_to_json(a), space.point_to_json(b)] for a, b in plan.pairs],
        "quadruples": [
            [space.point_to_json(p) for p in quad] for quad in plan.quadruples
        ],
        "t_grid": int(plan.t_depth),
    }


def plan_from_json(obj: dict, space: Space) -> SamplePlan:
    _check_fields(obj, {"pairs", "t_grid"}, {"quadruples"}, "plan file")
    pairs = [tuple(space.point_from_json(p) for p in pair) for pair in obj["pairs"]]
    quads = [
        tuple(space.point_from_json(p) for p in quad) for quad in obj.get("quadruples", [])
    ]
    return SamplePlan(pairs, quads, int(obj["t_grid"]))


def family_to_json(space: Space, family: BallFamily) -> dict:
    return {
        "version": SCHEMA_VERSION,
        "balls": [
            {"center": space.point_to_json(c), "radius": float(r)}
            for c, r in zip(family.centers, family.radii)
        ],
    }


def family_from_json(obj: dict, space: Space) -> BallFamily:
    _check_fields(obj, {"balls"}, set(), "ball-family file")
    centers, radii = [], []
    for entry in obj["balls"]:
        _check_fields(entry, {"center", "radius"}, set(), "ball entry")
        centers.append(space.point_from_json(entry["center"]))
        radii.append(float(entry["radius"]))
    return BallFamily(space, centers, radii)


def path_to_json(path: PolyLinePath) -> dict:
    return {
        "version": SCHEMA_VERSION,
        "params": [float(t) for t in path.params],
        "points": [path.space.point_to_json(p) for p in path.points],
    }


def path_from_json(obj: dict, space: Space) -> PolyLinePath:
    _check_fields(obj, {"params", "points"}, set(), "path file")
    pts = [space.point_from_json(p) for p in obj["points"]]
    return PolyLinePath(space, np.asarray(obj["params"], float), pts)


def complex_to_json(complex_: TightSpanComplex) -> dict:
    return {
        "version": SCHEMA_VERSION,
        "cells": [
            {
                "pattern": [[int(i), int(j)] for i, j in cell.pattern],
                "dim": int(cell.dim),
                "vertices": [[float(v) for v in row] for row in cell.vertices],
            }
            for cell in complex_.cells
        ],
        "dimension": int(complex_.dimension),
        "degenerate": bool(complex_.degenerate),
    }
