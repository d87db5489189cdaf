import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hilbert_flats import (ConvexDomain, MetricConfig, ProjectivePoint, build_standard_simplex,
                           center_of_mass, convex_hull, distance_to_subset, geodesic_point,
                           hausdorff_distance, hilbert_distance)
from hilbert_flats.domain import hull_residual
from hilbert_flats.errors import HilbertFlatsError, NotInterior
from hilbert_flats.metric import distances, point_at_distance
from hilbert_flats.randoms import random_interior, random_polytope


def klein_distance(x, y):
    # hyperbolic distance in the Klein model of the unit ball
    num = 1.0 - x @ y
    den = np.sqrt((1.0 - x @ x) * (1.0 - y @ y))
    return float(np.arccosh(num / den))


def test_interval_closed_form():
    omega = build_standard_simplex(1)
    for s, t in [(0.2, 0.7), (0.5, 0.5), (0.01, 0.99)]:
        x, y = ProjectivePoint([s, 1 - s]), ProjectivePoint([t, 1 - t])
        expected = 0.5 * abs(np.log(s * (1 - t) / (t * (1 - s))))
        assert hilbert_distance(omega, x, y) == pytest.approx(expected, abs=1e-12)


def test_ball_matches_klein_model(rng):
    omega = ConvexDomain.ellipsoid(np.zeros(3), np.eye(3))
    for _ in range(100):
        x, y = (rng.normal(size=3) for _ in range(2))
        x *= rng.uniform(0, 0.99) / np.linalg.norm(x)
        y *= rng.uniform(0, 0.99) / np.linalg.norm(y)
        px, py = ProjectivePoint(np.append(x, 1.0)), ProjectivePoint(np.append(y, 1.0))
        assert hilbert_distance(omega, px, py) == pytest.approx(klein_distance(x, y), abs=1e-9)


def test_vectorized_route_matches_chord_route(rng):
    omega, _ = random_polytope(4, rng)
    x, y = random_interior(omega, 50, rng), random_interior(omega, 50, rng)
    slow = [hilbert_distance(omega, ProjectivePoint(a), ProjectivePoint(b)) for a, b in zip(x, y)]
    assert np.allclose(distances(omega, x, y), slow, atol=1e-10)


def test_boundary_point_rejected():
    omega = build_standard_simplex(2)
    with pytest.raises(NotInterior):
        hilbert_distance(omega, ProjectivePoint([1.0, 1, 0]), ProjectivePoint([1.0, 1, 1]))


def test_geodesic_point_divides_distance(rng):
    omega, _ = random_polytope(3, rng)
    x, y = (ProjectivePoint(p) for p in random_interior(omega, 2, rng))
    total = hilbert_distance(omega, x, y)
    for t in (0.1, 0.5, 0.9):
        p = geodesic_point(omega, x, y, t)
        assert hilbert_distance(omega, x, p) == pytest.approx(t * total, abs=1e-9)
        assert hilbert_distance(omega, p, y) == pytest.approx((1 - t) * total, abs=1e-9)
    with pytest.raises(ValueError):
        geodesic_point(omega, x, y, 1.5)


def test_point_at_distance_beyond_y(rng):
    omega, _ = random_polytope(3, rng)
    x, y = (ProjectivePoint(p) for p in random_interior(omega, 2, rng))
    total = hilbert_distance(omega, x, y)
    p = point_at_distance(omega, x, y, 2 * total)
    assert hilbert_distance(omega, x, p) == pytest.approx(2 * total, abs=1e-8)


def test_subset_distance_exact_vs_sampled(rng):
    # exact LP route and sampled golden-section route; sampled is an upper estimate
    for d in (2, 3, 4):
        omega, _ = random_polytope(d, rng)
        sub = convex_hull(omega, [ProjectivePoint(p) for p in random_interior(omega, 3, rng)])
        pts = random_interior(omega, 40, rng)
        exact = distance_to_subset(omega, sub, pts, method="exact")
        sampled = distance_to_subset(omega, sub, pts, method="sampled")
        assert np.all(sampled >= exact - 1e-9)
        assert np.max(sampled - exact) < 0.05


def test_subset_distance_zero_inside(rng):
    omega, _ = random_polytope(3, rng)
    sub = convex_hull(omega, [ProjectivePoint(p) for p in random_interior(omega, 4, rng)])
    inside = sub.sample(20, seed=1)
    assert np.max(distance_to_subset(omega, sub, inside)) < 1e-9


def test_subset_distance_point_subset_is_point_distance(rng):
    omega, _ = random_polytope(3, rng)
    p = random_interior(omega, 1, rng)[0]
    sub = convex_hull(omega, [ProjectivePoint(p)])
    pts = random_interior(omega, 20, rng)
    assert np.allclose(distance_to_subset(omega, sub, pts), distances(omega, pts, np.tile(p, (20, 1))),
                       atol=1e-8)


def test_hausdorff_of_identical_sets_is_zero(rng):
    omega, _ = random_polytope(2, rng)
    sub = convex_hull(omega, [ProjectivePoint(p) for p in random_interior(omega, 3, rng)])
    assert hausdorff_distance(omega, sub, sub).value < 1e-8


def test_center_of_mass_in_hull_and_equivariant(rng):
    omega = build_standard_simplex(2)
    pts = [ProjectivePoint(p) for p in rng.dirichlet(np.ones(3), size=5)]
    com = center_of_mass(omega, pts)
    gens = np.array([omega.lift(p) for p in pts])
    assert hull_residual(gens, omega.lift(com)) < 1e-8
    g = np.diag([2.0, 1.0, 0.5])
    moved = center_of_mass(omega, [ProjectivePoint(g @ p.coords) for p in pts])
    assert moved.isclose(ProjectivePoint(g @ com.coords), 1e-6)


def test_center_of_mass_symmetric_set():
    omega = build_standard_simplex(2)
    pts = [ProjectivePoint(np.roll([3.0, 1.0, 1.0], i)) for i in range(3)]
    assert center_of_mass(omega, pts).isclose(ProjectivePoint([1.0, 1, 1]), 1e-8)


def test_center_of_mass_needs_interior_points():
    omega = build_standard_simplex(2)
    with pytest.raises(HilbertFlatsError):
        center_of_mass(omega, [ProjectivePoint([1.0, 0, 0]), ProjectivePoint([1.0, 1, 1])])


def test_config_validation():
    with pytest.raises(HilbertFlatsError):
        MetricConfig(grid_samples=1)


@settings(max_examples=40, deadline=None)
@given(st.lists(st.floats(0.05, 20.0), min_size=3, max_size=3),
       st.lists(st.floats(0.05, 20.0), min_size=3, max_size=3),
       st.lists(st.floats(0.05, 20.0), min_size=3, max_size=3))
def test_triangle_inequality_on_triangle(a, b, c):
    omega = build_standard_simplex(2)
    x, y, z = (ProjectivePoint(v) for v in (a, b, c))
    assert hilbert_distance(omega, x, z) <= hilbert_distance(omega, x, y) + hilbert_distance(omega, y, z) + 1e-9
