import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from geocomb.hyperconvex import BallFamily, helly_witness_linf
from geocomb.metric import validate_metric
from geocomb.spaces import LinfBox, random_graph_metric
from geocomb.tightspan import (
    TightSpanError,
    TightSpanSpace,
    combinatorial_dimension,
    enumerate_cells,
    envelope,
    extremality_residual,
    hull_midpoint,
    is_admissible,
    is_extremal,
    project_to_extremal,
    retract_into_hull,
    tight_span_distance,
)

from oracles import lp_cell_oracle


def equilateral3():
    return validate_metric(2.0 * (np.ones((3, 3)) - np.eye(3)))


def generic4(seed: int):
    rng = np.random.default_rng(seed)
    pts = rng.random((4, 3)) * 3.0
    d = np.abs(pts[:, None, :] - pts[None, :, :]).sum(axis=2)
    np.fill_diagonal(d, 0.0)
    return validate_metric(d)


# -- admissibility -------------------------------------------------------------


def test_distance_rows_are_admissible():
    dm = generic4(0)
    for i in range(4):
        ok, residual = is_admissible(dm.d[i], dm)
        assert ok and residual >= -1e-12


def test_zero_vector_not_admissible_residual_minus_one():
    dm = validate_metric([[0, 1], [1, 0]])
    ok, residual = is_admissible(np.zeros(2), dm)
    assert not ok
    assert residual == pytest.approx(-1.0)


@given(st.integers(0, 500))
def test_admissibility_matches_pair_scan(seed):
    rng = np.random.default_rng(seed)
    dm = random_graph_metric(5, rng)
    f = dm.d.max(axis=1) / 2.0 + rng.random(5) * 0.5 - 0.1
    ok, residual = is_admissible(f, dm)
    scan = min(f[i] + f[j] - dm.d[i, j] for i in range(5) for j in range(5))
    assert residual == pytest.approx(scan, abs=1e-12)
    assert ok == (scan >= -1e-9)


# -- projection ---------------------------------------------------------------


def test_projection_fixes_extremal_points():
    dm = equilateral3()
    for f in (dm.d[0], np.array([1.0, 1.0, 1.0])):
        out = project_to_extremal(f, dm)
        assert np.max(np.abs(out - f)) <= 1e-9


def test_projection_of_shifted_row_is_extremal():
    dm = generic4(3)
    g = dm.d[0] + 1.0
    f = project_to_extremal(g, dm)
    ok, _ = is_admissible(f, dm)
    assert ok
    assert extremality_residual(f, dm) <= 1e-9
    assert np.all(f <= g + 1e-12)


def test_projection_rejects_inadmissible_input():
    dm = equilateral3()
    with pytest.raises(TightSpanError):
        project_to_extremal(np.zeros(3), dm)


def test_retraction_is_one_lipschitz_and_fixes_hull(rng):
    dm = generic4(7)
    hull = TightSpanSpace(enumerate_cells(dm))
    for _ in range(25):
        g1 = rng.normal(size=4) * 2 + dm.d[0]
        g2 = rng.normal(size=4) * 2 + dm.d[1]
        r1, r2 = retract_into_hull(g1, dm), retract_into_hull(g2, dm)
        assert is_extremal(r1, dm, 1e-7) and is_extremal(r2, dm, 1e-7)
        assert tight_span_distance(r1, r2) <= np.max(np.abs(g1 - g2)) + 1e-7
        f = hull.sample_point(rng)
        assert np.max(np.abs(retract_into_hull(f, dm) - f)) <= 1e-7


# -- cell enumeration ----------------------------------------------------------


def test_two_point_hull_is_a_segment():
    dm = validate_metric([[0, 1], [1, 0]])
    cx = enumerate_cells(dm)
    assert combinatorial_dimension(cx) == 1
    dims = sorted(c.dim for c in cx.cells)
    assert dims == [0, 0, 1]
    seg = [c for c in cx.cells if c.dim == 1][0]
    assert tight_span_distance(seg.vertices[0], seg.vertices[1]) == pytest.approx(1.0)


def test_equilateral_three_point_hull_is_a_unit_tripod():
    dm = equilateral3()
    cx = enumerate_cells(dm)
    assert combinatorial_dimension(cx) == 1
    legs = [c for c in cx.cells if c.dim == 1]
    assert len(legs) == 3
    # leg length = Gromov product (2 + 2 - 2) / 2 = 1
    for leg in legs:
        assert tight_span_distance(leg.vertices[0], leg.vertices[1]) == pytest.approx(1.0)
    centers = [c.vertices[0] for c in cx.cells if c.dim == 0]
    assert any(np.allclose(v, [1.0, 1.0, 1.0]) for v in centers)


@pytest.mark.parametrize("seed", [0, 1, 2])
def test_four_point_cells_match_lp_oracle(seed):
    dm = generic4(seed)
    cx = enumerate_cells(dm)
    oracle = lp_cell_oracle(dm)
    got = {frozenset(c.pattern): c.dim for c in cx.cells}
    assert got == oracle
    assert combinatorial_dimension(cx) == max(oracle.values()) == 2


def test_three_point_cells_match_lp_oracle():
    dm = equilateral3()
    got = {frozenset(c.pattern): c.dim for c in enumerate_cells(dm).cells}
    assert got == lp_cell_oracle(dm)


def test_embedding_lands_in_complex_with_exact_distances():
    dm = generic4(11)
    cx = enumerate_cells(dm)
    space = TightSpanSpace(cx)
    for i in range(4):
        assert space.contains(dm.d[i], 1e-9)
        for j in range(4):
            assert abs(tight_span_distance(dm.d[i], dm.d[j]) - dm.d[i, j]) <= 1e-9


def test_cell_interiors_are_extremal_with_exact_pattern():
    dm = generic4(5)
    cx = enumerate_cells(dm)
    for cell in cx.cells:
        f = cell.interior_point()
        ok, _ = is_admissible(f, dm)
        assert ok and extremality_residual(f, dm) <= 1e-9
        tight = {
            (i, j)
            for i in range(4)
            for j in range(i, 4)
            if abs(f[i] + f[j] - dm.d[i, j]) <= 1e-7
        }
        assert tight == set(cell.pattern)


def test_generic_four_point_complex_is_closed_under_faces():
    cx = enumerate_cells(generic4(21))
    by_dim = {}
    for c in cx.cells:
        by_dim[c.dim] = by_dim.get(c.dim, 0) + 1
    # 4 leaves + 4 corners; 4 hanging edges + the 4 boundary edges; one 2-cell
    assert by_dim == {0: 8, 1: 8, 2: 1}
    two = [c for c in cx.cells if c.dim == 2][0]
    boundary = [
        c for c in cx.cells if c.dim == 1 and set(two.pattern).issubset(set(c.pattern))
    ]
    assert len(boundary) == 4


def test_dimension_bounded_by_half_point_count():
    for seed in range(4):
        dm = random_graph_metric(5, np.random.default_rng(40 + seed))
        cx = enumerate_cells(dm)
        assert combinatorial_dimension(cx) <= 5 // 2


def test_enumeration_cap():
    d = np.abs(np.subtract.outer(np.arange(7.0), np.arange(7.0)))
    with pytest.raises(TightSpanError):
        enumerate_cells(validate_metric(d))


# -- hull metric ---------------------------------------------------------------


def test_tight_span_distance_examples():
    dm = generic4(2)
    assert tight_span_distance(dm.d[0], dm.d[0]) == 0.0
    assert tight_span_distance(dm.d[1], dm.d[2]) == pytest.approx(dm.d[1, 2], abs=1e-12)
    with pytest.raises(TightSpanError):
        tight_span_distance(np.zeros(4), np.zeros(3))


@given(st.integers(0, 300))
@settings(max_examples=25)
def test_random_extremal_distance_matches_scan(seed):
    rng = np.random.default_rng(seed)
    dm = equilateral3()
    hull = TightSpanSpace(enumerate_cells(dm))
    f, g = hull.sample_point(rng), hull.sample_point(rng)
    assert tight_span_distance(f, g) == pytest.approx(max(abs(a - b) for a, b in zip(f, g)))


def test_hull_midpoint_respects_both_radii(rng):
    dm = generic4(9)
    hull = TightSpanSpace(enumerate_cells(dm))
    for _ in range(20):
        x, y = hull.sample_point(rng), hull.sample_point(rng)
        m = hull_midpoint(dm, x, y)
        half = 0.5 * tight_span_distance(x, y)
        assert tight_span_distance(x, m) <= half + 1e-8
        assert tight_span_distance(y, m) <= half + 1e-8
        assert is_extremal(m, dm, 1e-7)


def test_sampled_injectivity_of_the_hull():
    from oracles import hull_sampled_injectivity

    assert hull_sampled_injectivity(generic4(13), n_trials=100) >= -1e-7


def test_envelope_antitone_and_lipschitz(rng):
    dm = generic4(17)
    for _ in range(20):
        f = dm.d[0] + rng.random(4)
        g = f + rng.random(4) * 0.5
        assert np.all(envelope(g, dm) <= envelope(f, dm) + 1e-12)
        assert np.max(np.abs(envelope(f, dm) - envelope(g, dm))) <= np.max(np.abs(f - g)) + 1e-12


def test_degenerate_metric_is_flagged_and_still_enumerated():
    # equilateral four-point space: every pairing ties, the hull is a star
    # with four half-legs, and its center is an overdetermined vertex
    dm = validate_metric(np.ones((4, 4)) - np.eye(4))
    cx = enumerate_cells(dm)
    assert cx.degenerate
    assert combinatorial_dimension(cx) == 1
    assert {frozenset(c.pattern): c.dim for c in cx.cells} == lp_cell_oracle(dm)
    assert not enumerate_cells(generic4(0)).degenerate


def test_polytope_membership_and_linear_bicombing():
    from geocomb.bicombing import linear_bicombing
    from geocomb.spaces import ConvexPolytopeLinf

    tri = ConvexPolytopeLinf([[0.0, 0.0], [2.0, 0.0], [0.0, 2.0]])
    assert tri.contains([0.5, 0.5])
    assert not tri.contains([1.5, 1.5])
    lin = linear_bicombing(tri)
    assert np.allclose(lin(np.array([0.0, 0.0]), np.array([2.0, 0.0]), 0.25), [0.5, 0.0])
