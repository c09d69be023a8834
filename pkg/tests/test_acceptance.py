"""Acceptance battery: every exit criterion at its pinned tolerance.

One test per criterion; each prints a single PASS line with the measured
worst residuals so a run of this module doubles as the verification report.
"""

import json
import time

import numpy as np
import pytest

from geocomb.bicombing import (
    BicombingHandle,
    SamplePlan,
    check_conical,
    check_convexity,
    check_geodesic,
    check_reversibility,
    linear_bicombing,
    shortest_arc_bicombing,
)
from geocomb.cli import RunConfig, run
from geocomb.hyperconvex import (
    BallFamily,
    halving_witness,
    helly_witness_linf,
    pairwise_feasible,
    sphere_counterexample,
)
from geocomb.localglobal import (
    Chart,
    ChartAtlas,
    build_cover,
    certify_local_geodesic,
    check_global_convexity,
    global_bicombing,
    perturb_geodesic,
    validate_atlas,
)
from geocomb.metric import validate_metric
from geocomb.models import make_cycle, make_cylinder, make_rectangle, make_tree, random_tree_edges
from geocomb.paths import PolyLinePath, dyadic_params, path_distance, path_from_interp
from geocomb.spaces import LinfBox

from oracles import box_intersection, hull_sampled_injectivity, lp_cell_oracle


def report(num: int, label: str, detail: str) -> None:
    print(f"[PASS] criterion {num:2d} ({label}): {detail}")


# -- shared instance builders -----------------------------------------------------


@pytest.fixture(scope="module")
def cylinder():
    return make_cylinder(12, 4)


def cylinder_instances(model, n: int = 100, seed: int = 2024):
    """Seeded multi-chart geodesics on the cylinder plus admissible endpoint
    perturbations (within the certified radius)."""
    rng = np.random.default_rng(seed)
    space = model.space
    out = []
    while len(out) < n:
        x0 = np.array([rng.random() * 12.0, 0.4 + rng.random() * 1.2])
        dx = (4.2 + rng.random() * 1.2) * (1 if rng.random() < 0.5 else -1)
        dy = rng.random() * (3.6 - x0[1] - 0.2)
        end = np.array([np.mod(x0[0] + dx, 12.0), x0[1] + dy])
        base = path_from_interp(space, x0, end, depth=5)
        geo = certify_local_geodesic(base, model.atlas)
        eps = geo.epsilon
        xb = x0 + 0.7 * eps * _unit(rng)
        yb = end + 0.7 * eps * _unit(rng)
        xb[1] = np.clip(xb[1], 0.0, 4.0)
        yb[1] = np.clip(yb[1], 0.0, 4.0)
        if space.distance(x0, xb) >= eps or space.distance(end, yb) >= eps:
            continue
        out.append((geo, space.normalize(xb), space.normalize(yb)))
    return out


def _unit(rng):
    v = rng.normal(size=2)
    return v / np.hypot(*v)


@pytest.fixture(scope="module")
def perturb_runs(cylinder):
    t0 = time.perf_counter()
    runs = []
    for geo, xb, yb in cylinder_instances(cylinder, 100):
        res = perturb_geodesic(geo, xb, yb, cylinder.atlas)
        runs.append((geo, xb, yb, res))
    return runs, time.perf_counter() - t0


@pytest.fixture(scope="module")
def simply_connected_models():
    trees = [make_tree(random_tree_edges(7, np.random.default_rng(s))) for s in (5, 6, 7)]
    rects = [make_rectangle(2, 1), make_rectangle(3, 2), make_rectangle(1.5, 2.5)]
    return trees + rects


def _global(model, a, b, waypoint=None):
    space = model.space
    if waypoint is None:
        gamma = path_from_interp(space, a, b, depth=5)
    else:
        ts = dyadic_params(4)
        pts = space.interp_many(a, waypoint, ts) + space.interp_many(waypoint, b, ts)[1:]
        gamma = PolyLinePath(space, np.linspace(0, 1, len(pts)), pts)
    return global_bicombing(model.atlas, a, b, gamma)[0]


@pytest.fixture(scope="module")
def uniqueness_runs(simply_connected_models):
    """20 endpoint pairs per model, each continued along 2 distinct probe
    paths, plus the reversed continuation for criterion 6."""
    out = []
    for mi, model in enumerate(simply_connected_models):
        rng = np.random.default_rng(900 + mi)
        space = model.space
        for _ in range(20):
            x, y = space.sample_point(rng), space.sample_point(rng)
            w1, w2 = space.sample_point(rng), space.sample_point(rng)
            g1 = _global(model, x, y, w1)
            g2 = _global(model, x, y, w2)
            rev = _global(model, y, x, w1)
            out.append((model, x, y, g1, g2, rev))
    return out


# -- criteria -----------------------------------------------------------------------


def test_criterion_01_contraction(perturb_runs):
    runs, elapsed = perturb_runs
    worst_ratio = 0.0
    max_iters = 0
    for _, _, _, res in runs:
        gaps = res.gaps
        assert len(gaps) >= 2
        max_iters = max(max_iters, res.iterations)
        assert res.iterations <= 60
        for a, b in zip(gaps, gaps[1:]):
            if a > 1e-12:
                worst_ratio = max(worst_ratio, b / a)
                assert b <= 0.55 * a
    assert elapsed <= 10.0
    report(1, "contraction", f"100 instances, worst gap ratio {worst_ratio:.4f}, max iterations {max_iters}, {elapsed:.2f}s")


def test_criterion_02_length_bound(perturb_runs, cylinder):
    runs, _ = perturb_runs
    space = cylinder.space
    worst = -np.inf
    for geo, xb, yb, res in runs:
        slack = res.geodesic.length() - (
            geo.length() + space.distance(geo.start, xb) + space.distance(geo.end, yb)
        )
        worst = max(worst, slack)
        assert slack <= 1e-6
    report(2, "length bound", f"100 instances, worst slack {worst:.2e}")


def test_criterion_03_thirds_inequality(cylinder):
    space = cylinder.space
    rng = np.random.default_rng(77)
    worst = -np.inf
    instances = cylinder_instances(cylinder, 100, seed=4096)
    for geo, xb1, yb1 in instances:
        eps = geo.epsilon
        xb2 = space.normalize(np.asarray(geo.start) + 0.6 * eps * _unit(rng))
        yb2 = space.normalize(np.asarray(geo.end) + 0.6 * eps * _unit(rng))
        xb2[1] = np.clip(xb2[1], 0.0, 4.0)
        yb2[1] = np.clip(yb2[1], 0.0, 4.0)
        c1 = perturb_geodesic(geo, xb1, yb1, cylinder.atlas).geodesic
        c2 = perturb_geodesic(geo, xb2, yb2, cylinder.atlas).geodesic
        s = space.distance(xb1, xb2)
        t = space.distance(yb1, yb2)
        s_p = space.distance(c1.path.eval(1 / 3), c2.path.eval(1 / 3))
        t_p = space.distance(c1.path.eval(2 / 3), c2.path.eval(2 / 3))
        worst = max(worst, s_p - (2 * s + t) / 3, t_p - (s + 2 * t) / 3)
        assert s_p <= (2 * s + t) / 3 + 1e-6
        assert t_p <= (s + 2 * t) / 3 + 1e-6
    report(3, "thirds inequality", f"100 paired instances, worst excess {worst:.2e}")


def test_criterion_04_uniqueness_surrogate(uniqueness_runs):
    worst = 0.0
    for model, x, y, g1, g2, _ in uniqueness_runs:
        d = path_distance(g1.path, g2.path)
        worst = max(worst, d)
        assert d <= 1e-5
    report(4, "path independence", f"{len(uniqueness_runs)} pairs over 6 models, worst disagreement {worst:.2e}")


def test_criterion_05_global_convexity(simply_connected_models):
    worst = 0.0
    for mi, model in enumerate(simply_connected_models):
        rng = np.random.default_rng(500 + mi)
        space = model.space
        for _ in range(50):
            x, y, xb, yb = (space.sample_point(rng) for _ in range(4))
            rep = check_global_convexity(
                model.atlas,
                _global(model, x, y),
                _global(model, xb, yb),
                _global(model, x, xb),
                _global(model, y, yb),
                tol=1e-6,
            )
            worst = max(worst, rep.worst_residual)
            assert rep.passed, (mi, rep.worst_residual)
    report(5, "global convexity", f"50 quadruples x 6 models, worst residual {worst:.2e}")


def test_criterion_06_reversibility(uniqueness_runs):
    worst = 0.0
    for model, x, y, g1, _, rev in uniqueness_runs:
        d = path_distance(g1.path, rev.path.reversed())
        worst = max(worst, d)
        assert d <= 1e-5
    report(6, "reversibility", f"{len(uniqueness_runs)} pairs, worst reversal residual {worst:.2e}")


def test_criterion_07_covering_counts(cylinder):
    t0 = time.perf_counter()
    cyc = make_cycle(12)
    cover = build_cover(cyc.atlas, 0.0, 25.0)
    base_lengths = sorted(
        cp.length for cp in cover if cyc.space.distance(cp.endpoint, 0.0) < 1e-6
    )
    assert len(base_lengths) == 5
    assert np.allclose(base_lengths, [0.0, 12.0, 12.0, 24.0, 24.0], atol=1e-6)

    # strip lattice-count oracle at offsets (3, 2): lengths sqrt((3+12k)^2+4)
    target = np.array([3.0, 2.0])
    oracle16 = sorted(
        float(np.hypot(3 + 12 * k, 2.0))
        for k in range(-3, 4)
        if np.hypot(3 + 12 * k, 2.0) <= 16.0
    )
    cov16 = build_cover(cylinder.atlas, np.array([0.0, 0.0]), 16.0)
    lens16 = sorted(
        cp.length for cp in cov16 if cylinder.space.distance(cp.endpoint, target) < 1e-6
    )
    assert len(lens16) == len(oracle16) == 3
    assert np.allclose(lens16, oracle16, atol=1e-6)

    # the third lift sits just over 15: the boundary is resolved exactly
    cov15 = build_cover(cylinder.atlas, np.array([0.0, 0.0]), 15.0)
    lens15 = [
        cp.length for cp in cov15 if cylinder.space.distance(cp.endpoint, target) < 1e-6
    ]
    assert len(lens15) == 2
    elapsed = time.perf_counter() - t0
    assert elapsed <= 30.0
    report(
        7,
        "covering counts",
        f"cycle base loop: 5; cylinder offsets (3,2): {len(lens16)} at l_max 16 "
        f"(lattice oracle), 2 at l_max 15; {elapsed:.1f}s",
    )


def test_criterion_08_halving_witnesses():
    rng = np.random.default_rng(808)
    box = LinfBox([-8.0, -8.0], [8.0, 8.0])
    sigma = linear_bicombing(box)

    def base(f):
        assert max(f.radii) <= 1.0 + 1e-9
        return helly_witness_linf(f)

    worst = np.inf
    for _ in range(200):
        size = int(rng.integers(2, 6))
        while True:
            centers = [box.sample_point(rng) * 0.4 for _ in range(size)]
            radii = [float(0.3 + 3.7 * rng.random()) for _ in range(size)]
            fam = BallFamily(box, centers, radii)
            if pairwise_feasible(fam)[0]:
                break
        w = halving_witness(fam, sigma, base, 1.0)
        worst = min(worst, w.min_slack)
        assert w.min_slack >= -1e-7
        lo, hi = box_intersection(centers, radii)
        assert np.all(lo <= hi + 1e-9)
        assert np.all(np.asarray(w.point) >= lo - 1e-7)
        assert np.all(np.asarray(w.point) <= hi + 1e-7)
    report(8, "halving witnesses", f"200 families (radii <= 4, base radius 1), worst slack {worst:.2e}")


@pytest.mark.parametrize("n", [6, 9, 12, 15])
def test_criterion_09_cycle_counterexample(n):
    t0 = time.perf_counter()
    rep = sphere_counterexample(n, trials=200)
    elapsed = time.perf_counter() - t0
    assert rep.local_balls_hyperconvex
    assert rep.empty_in_cycle
    assert rep.nonempty_in_linf
    assert elapsed <= 1.0
    report(9, f"cycle counterexample n={n}", f"three parts exact, {elapsed:.2f}s")


def test_criterion_10_tight_spans():
    from geocomb.tightspan import (
        TightSpanSpace,
        combinatorial_dimension,
        enumerate_cells,
        extremality_residual,
        is_admissible,
        tight_span_distance,
    )

    metrics = [validate_metric([[0, 1], [1, 0]]), validate_metric(2.0 * (np.ones((3, 3)) - np.eye(3)))]
    for seed in range(10):
        rng = np.random.default_rng(7000 + seed)
        pts = rng.random((4, 3)) * 3.0
        d = np.abs(pts[:, None, :] - pts[None, :, :]).sum(axis=2)
        np.fill_diagonal(d, 0.0)
        metrics.append(validate_metric(d))

    worst_iso, worst_ext, worst_inj = 0.0, 0.0, np.inf
    for dm in metrics:
        cx = enumerate_cells(dm)
        for i in range(dm.n):
            for j in range(dm.n):
                worst_iso = max(worst_iso, abs(tight_span_distance(dm.d[i], dm.d[j]) - dm.d[i, j]))
        for cell in cx.cells:
            f = cell.interior_point()
            ok, residual = is_admissible(f, dm)
            assert ok and residual >= -1e-9
            worst_ext = max(worst_ext, extremality_residual(f, dm))
        worst_inj = min(worst_inj, hull_sampled_injectivity(dm, n_trials=200))
        oracle = lp_cell_oracle(dm)
        got = {frozenset(c.pattern): c.dim for c in cx.cells}
        assert got == oracle
        assert combinatorial_dimension(cx) == max(oracle.values())
    assert worst_iso <= 1e-9 and worst_ext <= 1e-9 and worst_inj >= -1e-7
    report(
        10,
        "tight spans",
        f"12 metrics: isometry {worst_iso:.1e}, extremality {worst_ext:.1e}, "
        f"injectivity slack {worst_inj:.1e}, dimensions match the LP oracle",
    )


def test_criterion_11_checker_soundness(rng):
    square = LinfBox([0, 0], [1, 1])

    def broken_geo(x, y, t):
        return np.asarray(x, float) if t < 1.0 else np.asarray(y, float)

    h1 = BicombingHandle(square, broken_geo, "global", "broken")
    plan = SamplePlan([(np.array([0.0, 0.0]), np.array([1.0, 0.0]))], [], 3)
    r1 = check_geodesic(h1, plan)
    assert not r1.passed and r1.witness is not None
    x, y = (np.asarray(p) for p in r1.witness["points"])
    s, t = r1.witness["params"]
    again = abs(
        square.distance(h1(x, y, s), h1(x, y, t)) - abs(s - t) * square.distance(x, y)
    )
    assert again == pytest.approx(r1.worst_residual, abs=1e-12)

    from geocomb.spaces import CycleSpace

    cyc = CycleSpace(12.0)
    arc = shortest_arc_bicombing(cyc)
    quads = [(0.0, 5.0, 11.0, 6.0), (1.0, 6.0, 0.0, 7.0)]
    r2 = check_conical(arc, SamplePlan([], quads, 3))
    r2b = check_convexity(arc, SamplePlan([], quads, 3))
    assert not r2.passed and r2.witness is not None
    assert not r2b.passed
    yq, zq, y2q, z2q = (cyc.point_from_json(p) for p in r2.witness["points"])
    (tw,) = r2.witness["params"]
    lhs = cyc.distance(arc(yq, zq, tw), arc(y2q, z2q, tw))
    bound = (1 - tw) * cyc.distance(yq, y2q) + tw * cyc.distance(zq, z2q)
    assert lhs - bound == pytest.approx(r2.worst_residual, abs=1e-12)

    def asym(x, y, t):
        x, y = np.asarray(x, float), np.asarray(y, float)
        s = t * t if tuple(x) < tuple(y) else t
        return (1.0 - s) * x + s * y

    h3 = BicombingHandle(square, asym, "global", "asym")
    plan3 = SamplePlan([(np.array([0.1, 0.1]), np.array([0.9, 0.4]))], [], 3)
    r3 = check_reversibility(h3, plan3)
    assert not r3.passed and r3.witness is not None

    space = make_cycle(12).space
    base = shortest_arc_bicombing(space)
    gappy = ChartAtlas(space, [Chart(float(k), 0.4, base) for k in range(12)])
    r4 = validate_atlas(gappy, rng)[0]
    assert r4.name == "coverage" and not r4.passed and r4.witness is not None
    probe = space.point_from_json(r4.witness["points"][0])
    assert min(space.distance(float(k), probe) for k in range(12)) >= 0.4

    report(11, "checker soundness", "4 constructed violations rejected with reproducible witnesses")


def test_criterion_12_determinism(tmp_path):
    tri = tmp_path / "tri.json"
    tri.write_text(
        json.dumps({"version": 1, "labels": ["A", "B", "C"], "d": [[0, 2, 2], [2, 0, 2], [2, 2, 0]]})
    )
    gen = tmp_path / "gen"
    run(RunConfig("generate", {"model": "cycle", "params": json.dumps({"n": 12})}, out_dir=str(gen)))

    configs = [
        ("validate", {"metric": str(tri)}),
        ("tightspan", {"metric": str(tri)}),
        ("check", {"space": str(gen / "cycle-space.json"), "bicombing": "shortest-arc"}),
        ("sphere-counterexample", {"n": 12}),
        ("cover", {"atlas": str(gen / "cycle-atlas.json"), "base": "0.0", "lmax": 13}),
    ]

    def run_all(out_root):
        blobs = []
        for i, (cmd, inputs) in enumerate(configs):
            run(RunConfig(cmd, dict(inputs), seed=99, out_dir=str(out_root / str(i))))
            obj = json.loads((out_root / str(i) / "report.json").read_text())
            obj.pop("timings_ms")
            blobs.append(json.dumps(obj, sort_keys=True))
        return blobs

    first = run_all(tmp_path / "run1")
    second = run_all(tmp_path / "run2")
    assert first == second
    report(12, "determinism", f"{len(configs)} commands reproduce byte-identical reports modulo timings")
