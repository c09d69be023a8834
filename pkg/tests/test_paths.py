import numpy as np
import pytest

from geocomb.models import make_cylinder
from geocomb.paths import (
    PolyLinePath,
    constant_path,
    dyadic_params,
    geodesic_defect,
    path_distance,
    path_from_interp,
    path_length,
)
from geocomb.spaces import CycleSpace, LinfBox


@pytest.fixture
def box():
    return LinfBox([0, 0], [10, 10])


def test_constant_path_has_zero_length(box):
    assert path_length(constant_path(box, np.array([1.0, 1.0]))) == 0.0


def test_segment_length_with_five_samples(box):
    # endpoints at sup distance 3
    path = path_from_interp(box, np.array([1.0, 1.0]), np.array([4.0, 2.0]), depth=2)
    assert len(path.points) == 5
    assert path_length(path) == pytest.approx(3.0, abs=1e-12)


def test_cycle_loop_through_all_vertices_has_length_twelve():
    cyc = CycleSpace(12.0)
    pts = [float(k) for k in range(12)] + [0.0]
    path = PolyLinePath(cyc, np.linspace(0, 1, 13), pts)
    assert path_length(path) == pytest.approx(12.0, abs=1e-12)


def test_length_invariant_under_collinear_refinement(box):
    path = path_from_interp(box, np.array([0.5, 2.0]), np.array([6.5, 5.0]), depth=3)
    fine = path.resample(dyadic_params(6))
    assert abs(path_length(fine) - path_length(path)) < 1e-12


def test_path_distance_identity_and_parallel(box):
    a = path_from_interp(box, np.array([1.0, 1.0]), np.array([5.0, 1.0]), depth=4)
    assert path_distance(a, a) == 0.0
    b = path_from_interp(box, np.array([1.0, 3.5]), np.array([5.0, 3.5]), depth=4)
    assert path_distance(a, b) == pytest.approx(2.5, abs=1e-12)


def test_path_distance_matches_dense_resampling_on_cylinder():
    cyl = make_cylinder(12, 4).space
    a = path_from_interp(cyl, np.array([0.5, 0.5]), np.array([4.0, 3.0]), depth=4)
    wiggle = [p + np.array([0.0, 0.05 * np.sin(7 * t)]) for t, p in zip(a.params, a.points)]
    b = PolyLinePath(cyl, a.params, wiggle)
    coarse = path_distance(a, b)
    dense = path_distance(a.resample(dyadic_params(8)), b.resample(dyadic_params(8)))
    assert abs(coarse - dense) <= 1e-6


def test_path_distance_is_a_metric_on_resampled_paths(box, rng):
    paths = [
        path_from_interp(box, box.sample_point(rng), box.sample_point(rng), depth=4)
        for _ in range(3)
    ]
    a, b, c = paths
    assert path_distance(a, b) == path_distance(b, a)
    assert path_distance(a, c) <= path_distance(a, b) + path_distance(b, c) + 1e-12


def test_geodesic_defect_zero_for_linear_segment(box):
    path = path_from_interp(box, np.array([0.0, 0.0]), np.array([7.0, 3.0]), depth=5)
    assert geodesic_defect(path) <= 1e-12


def test_geodesic_defect_zero_for_cycle_arc():
    cyc = CycleSpace(12.0)
    # arc spanning 4 edges, parametrized proportionally
    path = PolyLinePath(cyc, np.linspace(0, 1, 9), list(np.linspace(2.0, 6.0, 9)))
    assert geodesic_defect(path) <= 1e-12


def test_geodesic_defect_positive_for_corner(box):
    pts = [np.array([0.0, 0.0]), np.array([2.0, 0.0]), np.array([2.0, 2.0])]
    path = PolyLinePath(box, np.array([0.0, 0.5, 1.0]), pts)
    assert geodesic_defect(path) > 0.5


def test_polyline_validation_errors(box):
    with pytest.raises(ValueError):
        PolyLinePath(box, np.array([0.0, 0.4, 0.4, 1.0]), [np.zeros(2)] * 4)
    with pytest.raises(ValueError):
        PolyLinePath(box, np.array([0.1, 1.0]), [np.zeros(2)] * 2)


def test_reversed_path(box):
    path = path_from_interp(box, np.array([1.0, 0.0]), np.array([3.0, 4.0]), depth=3)
    rev = path.reversed()
    assert np.allclose(rev.points[0], path.points[-1])
    assert path_distance(path, rev.reversed()) == 0.0
