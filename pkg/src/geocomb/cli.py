"""Command-line front end.

One process, no daemon: each invocation ingests files, dispatches to the
library, writes a Report JSON (plus optional SVG), and exits 0 if every
check passed, 1 on a check failure (with a stored witness), 2 on input or
schema errors.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import __version__
from .bicombing import (
    BicombingHandle,
    CheckReport,
    linear_bicombing,
    make_plan,
    run_checker_suite,
    shortest_arc_bicombing,
    solver_bicombing,
)
from .fileio import (
    SchemaError,
    atlas_from_json,
    atlas_to_json,
    complex_to_json,
    dump_json,
    family_from_json,
    load_json,
    metric_from_json,
    path_from_json,
    path_to_json,
    plan_from_json,
    space_from_json,
    space_to_json,
)
from .hyperconvex import (
    WitnessError,
    halving_witness,
    helly_witness_finite,
    helly_witness_linf,
    pairwise_feasible,
    sphere_counterexample,
)
from .localglobal import ContinuationError, build_cover, continue_along_path
from .metric import MetricError
from .models import generate_model
from .spaces import CycleSpace, FiniteSpace, LinfBox
from .svg import complex_svg, paths_svg, write_svg
from .tightspan import TightSpanError, combinatorial_dimension, enumerate_cells


@dataclass
class RunConfig:
    command: str
    inputs: dict = field(default_factory=dict)
    tol: float | None = None
    seed: int = 0
    out_dir: str = "."
    svg: bool = False


@dataclass
class Report:
    command: str
    checks: list[CheckReport] = field(default_factory=list)
    witnesses: list[dict] = field(default_factory=list)
    timings_ms: dict = field(default_factory=dict)
    extra: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        out = {
            "command": self.command,
            "checks": [c.to_json() for c in self.checks],
            "witnesses": self.witnesses,
            "timings_ms": self.timings_ms,
            "version": __version__,
        }
        out.update(self.extra)
        return out

    def all_passed(self) -> bool:
        return all(c.passed for c in self.checks)


def _bicombing_by_name(name: str, space) -> BicombingHandle:
    if name in ("linear", "linear-chart"):
        return linear_bicombing(space)
    if name in ("shortest-arc", "shortest-arc-graph"):
        return shortest_arc_bicombing(space)
    if name in ("tight-span-solver", "solver"):
        return solver_bicombing(space)
    if name == "cycle-global-arc":
        # globally selected shortest arcs: a geodesic bicombing that fails
        # the conical/convexity checks (ties broken in positive direction)
        if not isinstance(space, CycleSpace):
            raise SchemaError("cycle-global-arc needs a cycle space")
        return shortest_arc_bicombing(space)
    raise SchemaError(f"unknown bicombing {name!r}")


def run(config: RunConfig) -> Report:
    """Dispatch a command; deterministic given the config (seed included)."""
    t0 = time.perf_counter()
    if config.tol is not None and config.tol < 2.3e-16:
        raise SchemaError("tolerance override below machine epsilon")
    rng = np.random.default_rng(config.seed)
    report = Report(config.command)
    out_dir = Path(config.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)

    if config.command == "validate":
        obj = load_json(config.inputs["metric"])
        try:
            dm = metric_from_json(obj)
            report.checks.append(CheckReport("metric-axioms", True, 0.0, 0.0))
            report.extra["n_points"] = dm.n
        except MetricError as exc:
            report.checks.append(
                CheckReport("metric-axioms", False, 1.0, 0.0, {"axiom": exc.axiom, "indices": list(exc.indices)})
            )
            report.witnesses.append({"axiom": exc.axiom, "indices": list(exc.indices)})

    elif config.command == "tightspan":
        dm = metric_from_json(load_json(config.inputs["metric"]))
        complex_ = enumerate_cells(dm)
        dump_json(complex_to_json(complex_), out_dir / "complex.json")
        report.extra["dimension"] = combinatorial_dimension(complex_)
        report.extra["n_cells"] = len(complex_.cells)
        report.checks.append(CheckReport("tightspan-enumeration", True, 0.0, 0.0))
        if config.svg and dm.n <= 4:
            write_svg(out_dir / "complex.svg", complex_svg(complex_))

    elif config.command == "check":
        space = space_from_json(load_json(config.inputs["space"]))
        handle = _bicombing_by_name(config.inputs["bicombing"], space)
        tol = config.tol if config.tol is not None else 1e-7
        if "plan" in config.inputs and config.inputs["plan"]:
            plan = plan_from_json(load_json(config.inputs["plan"]), space)
        else:
            plan = make_plan(space, rng, n_pairs=12, n_quadruples=12, t_depth=4)
        report.checks.extend(run_checker_suite(handle, plan, tol))
        for c in report.checks:
            if not c.passed and c.witness:
                report.witnesses.append(c.witness)

    elif config.command == "develop":
        atlas = atlas_from_json(load_json(config.inputs["atlas"]))
        gamma = path_from_json(load_json(config.inputs["path"]), atlas.space)
        try:
            outputs = continue_along_path(gamma, atlas)
            final = outputs[-1][1]
            report.extra["final_length"] = final.length()
            report.extra["n_steps"] = len(outputs)
            report.extra["final_path"] = path_to_json(final.path)
            report.checks.append(CheckReport("continuation", True, final.residual, 1e-7))
            if config.svg:
                write_svg(
                    out_dir / "developed.svg",
                    paths_svg(atlas.space, [gamma, final.path]),
                )
        except ContinuationError as exc:
            report.checks.append(
                CheckReport("continuation", False, 1.0, 0.0, {"reason": exc.reason, "location": exc.location})
            )

    elif config.command == "cover":
        atlas = atlas_from_json(load_json(config.inputs["atlas"]))
        base = atlas.space.point_from_json(json.loads(config.inputs["base"]))
        lmax = float(config.inputs["lmax"])
        points = build_cover(atlas, base, lmax)
        report.extra["n_cover_points"] = len(points)
        report.extra["cover"] = [
            {
                "endpoint": atlas.space.point_to_json(cp.endpoint),
                "length": float(cp.length),
            }
            for cp in points
        ]
        report.checks.append(CheckReport("cover-enumeration", True, 0.0, 0.0))
        if config.svg:
            write_svg(
                out_dir / "cover.svg",
                paths_svg(atlas.space, [cp.geodesic.path for cp in points]),
            )

    elif config.command == "helly":
        space = space_from_json(load_json(config.inputs["space"]))
        family = family_from_json(load_json(config.inputs["family"]), space)
        ok, pair, gap = pairwise_feasible(family)
        report.extra["pairwise_feasible"] = bool(ok)
        if not ok:
            report.checks.append(
                CheckReport("helly-witness", False, gap, 0.0, {"kind": "infeasible-pair", "pair": list(pair)})
            )
        else:
            if isinstance(space, FiniteSpace):
                witness = helly_witness_finite(family)
            elif isinstance(space, LinfBox):
                witness = helly_witness_linf(family)
            else:
                raise SchemaError("helly needs a finite or box space")
            if witness is None:
                report.checks.append(CheckReport("helly-witness", False, 1.0, 0.0, {"kind": "empty-intersection"}))
            else:
                report.checks.append(CheckReport("helly-witness", True, -witness.min_slack, 1e-9))
                report.witnesses.append(
                    {"point": space.point_to_json(witness.point), "min_slack": witness.min_slack}
                )

    elif config.command == "halving":
        space = space_from_json(load_json(config.inputs["space"]))
        family = family_from_json(load_json(config.inputs["family"]), space)
        r0 = float(config.inputs["r0"])
        if not isinstance(space, LinfBox):
            raise SchemaError("halving backend here is the box solver; space must be a box")
        sigma = linear_bicombing(space)
        witness = halving_witness(family, sigma, helly_witness_linf, r0)
        report.checks.append(CheckReport("halving-witness", witness.valid(1e-7), -witness.min_slack, 1e-7))
        report.witnesses.append(
            {"point": space.point_to_json(witness.point), "min_slack": witness.min_slack}
        )

    elif config.command == "sphere-counterexample":
        n = int(config.inputs["n"])
        rep = sphere_counterexample(n, seed=config.seed)
        report.extra["result"] = rep.to_json()
        report.checks.append(CheckReport("local-balls-hyperconvex", rep.local_balls_hyperconvex, 0.0, 0.0))
        report.checks.append(CheckReport("empty-in-cycle", rep.empty_in_cycle, 0.0, 0.0))
        report.checks.append(CheckReport("nonempty-in-ambient", rep.nonempty_in_linf, 0.0, 0.0))

    elif config.command == "generate":
        name = config.inputs["model"]
        params = json.loads(config.inputs.get("params", "{}"))
        model = generate_model(name, **params)
        dump_json(space_to_json(model.space), out_dir / f"{name}-space.json")
        bic = {
            "cycle": "shortest-arc-graph",
            "cylinder": "shortest-arc-graph",
            "tree": "shortest-arc-graph",
            "rectangle": "linear-chart",
            "tripod": "tight-span-solver",
        }[model.name]
        dump_json(atlas_to_json(model.atlas, bic), out_dir / f"{name}-atlas.json")
        report.extra["model"] = model.meta
        report.checks.append(CheckReport("generate", True, 0.0, 0.0))

    else:
        raise SchemaError(f"unknown command {config.command!r}")

    report.timings_ms["total"] = 1000.0 * (time.perf_counter() - t0)
    dump_json(report.to_json(), out_dir / "report.json")
    return report


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--tol", type=float, default=None, help="override check tolerance")
    common.add_argument("--seed", type=int, default=0, help="seed for randomized plans")
    common.add_argument("--out", type=str, default=".", help="output directory")
    common.add_argument("--svg", action="store_true", help="emit SVG figures")

    ap = argparse.ArgumentParser(prog="geocomb", description=__doc__)
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", parents=[common], help="validate a metric file")
    p.add_argument("metric")

    p = sub.add_parser("tightspan", parents=[common], help="enumerate the hull of a metric file")
    p.add_argument("metric")

    p = sub.add_parser("check", parents=[common], help="run the bicombing checker suite")
    p.add_argument("space")
    p.add_argument("bicombing")
    p.add_argument("--plan", default=None)

    p = sub.add_parser("develop", parents=[common], help="continue a geodesic along a path")
    p.add_argument("atlas")
    p.add_argument("--path", required=True)

    p = sub.add_parser("cover", parents=[common], help="enumerate cover points from a basepoint")
    p.add_argument("atlas")
    p.add_argument("--base", required=True, help="basepoint as JSON")
    p.add_argument("--lmax", required=True, type=float)

    p = sub.add_parser("helly", parents=[common], help="ball-family witness")
    p.add_argument("space")
    p.add_argument("family")

    p = sub.add_parser("halving", parents=[common], help="radius-halving witness in a box")
    p.add_argument("space")
    p.add_argument("family")
    p.add_argument("--r0", required=True, type=float)

    p = sub.add_parser("sphere-counterexample", parents=[common], help="cycle counterexample report")
    p.add_argument("--n", required=True, type=int)

    p = sub.add_parser("generate", parents=[common], help="emit a built-in model")
    p.add_argument("model")
    p.add_argument("--params", default="{}")
    return ap


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    inputs = {k: v for k, v in vars(args).items() if k not in {"tol", "seed", "out", "svg", "command"} and v is not None}
    config = RunConfig(args.command, inputs, args.tol, args.seed, args.out, args.svg)
    try:
        report = run(config)
    except (SchemaError, MetricError, TightSpanError, WitnessError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    print(json.dumps(report.to_json(), indent=1, sort_keys=True))
    return 0 if report.all_passed() else 1


if __name__ == "__main__":
    sys.exit(main())
