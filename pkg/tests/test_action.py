import itertools

import numpy as np
import pytest

from hilbert_flats import (MetricConfig, ProjectiveMap, ProjectivePoint, build_group,
                           build_product_example, build_standard_simplex, face_dynamics_check,
                           hull_inflation_check, is_automorphism, m_r_sample, orbit,
                           translation_length)
from hilbert_flats.action import (affine_span_dim, displacements, min_displacement,
                                  orbital_limit_sample)
from hilbert_flats.errors import ValidationError
from hilbert_flats.randoms import (random_block_diagonal, random_ellipsoid, random_boost,
                                   random_polytope)


def test_translation_length_of_powers(rng):
    omega, structure = random_polytope(3, rng)
    g = ProjectiveMap(random_block_diagonal(structure, rng))
    tau = translation_length(g)
    for n in (2, 3, 5):
        assert translation_length(g.power(n)) == pytest.approx(n * tau, rel=1e-9)
    assert translation_length(g.inverse()) == pytest.approx(tau, rel=1e-9)


def test_automorphism_detection(rng):
    omega, structure = random_polytope(4, rng)
    assert is_automorphism(omega, ProjectiveMap(random_block_diagonal(structure, rng)))
    assert not is_automorphism(omega, ProjectiveMap(np.eye(4) + 0.3 * rng.normal(size=(4, 4))))
    ball, frame = random_ellipsoid(3, rng)
    assert is_automorphism(ball, ProjectiveMap(random_boost(frame, rng)))
    # a reflection of the square is an automorphism even though it flips the sign of a lift
    square = build_standard_simplex(1)
    assert is_automorphism(square, ProjectiveMap(np.array([[0.0, 1.0], [1.0, 0.0]])))


def test_build_group_rejects_non_automorphism():
    omega = build_standard_simplex(2)
    with pytest.raises(ValidationError):
        build_group([np.array([[1.0, 1, 0], [0, 1, 0], [0, 0, 1]])], omega)


def test_displacement_constant_on_simplex_for_diagonal(rng):
    omega = build_standard_simplex(2)
    g = ProjectiveMap(np.diag([4.0, 2.0, 1.0]))
    disp = displacements(omega, g, rng.dirichlet(np.ones(3), size=200))
    assert np.allclose(disp, np.log(2.0), atol=1e-10)


def test_min_displacement_against_brute_grid(rng):
    omega, structure = random_polytope(3, rng)
    g = ProjectiveMap(random_block_diagonal(structure, rng))
    # brute force over a dense barycentric grid of the triangle
    n = 120
    w = np.array([(i, j, n - i - j) for i in range(1, n) for j in range(1, n - i)], dtype=float) / n
    brute = float(np.min(displacements(omega, g, w @ omega.vertices)))
    grid, refined = min_displacement(omega, g, MetricConfig(grid_samples=2000))
    tau = translation_length(g)
    assert refined >= tau - 1e-8
    assert refined <= brute + 1e-8
    assert refined - tau < 1e-3


def test_m_r_monotone(rng):
    # a boost has displacement growing away from its axis
    omega, frame = random_ellipsoid(3, rng)
    group = build_group([random_boost(frame, rng)], omega)
    tau = max(translation_length(g) for g in group.generators)
    cfg = MetricConfig(grid_samples=2000)
    sizes = [len(m_r_sample(group, tau + r, cfg)) for r in (0.01, 0.1, 0.5, 2.0)]
    assert sizes == sorted(sizes)
    assert sizes[-1] > sizes[0]


def test_hull_inflation_on_simplex():
    omega = build_standard_simplex(2)
    group = build_group([np.diag([np.e, 1, 1]), np.diag([1, np.e, 1])], omega, commuting=True)
    rep = hull_inflation_check(group, 1.0, MetricConfig(grid_samples=2000))
    assert rep.passed
    # 2^(d-1) with d = 3 homogeneous coordinates
    assert rep.factor == 4.0


def test_orbit_count_matches_exponent_lattice():
    omega = build_standard_simplex(2)
    gens = [np.diag(np.exp(np.eye(3)[i])) for i in range(3)]
    group = build_group(gens, omega, commuting=True)
    radius = 3
    # exponent vectors of words of length <= radius, modulo the scalar direction (1, 1, 1)
    classes = set()
    for n in itertools.product(range(-radius, radius + 1), repeat=3):
        if sum(abs(c) for c in n) <= radius:
            v = np.array(n) - min(n)
            classes.add(tuple(v))
    sample = orbit(group, ProjectivePoint([1.0, 1, 1]), radius)
    assert len(sample.points) == len(classes)


def test_commuting_orbit_relations(rng):
    omega, structure = random_polytope(3, rng)
    a, b = (ProjectiveMap(random_block_diagonal(structure, rng)) for _ in range(2))
    p = ProjectivePoint(omega.center_lift())
    assert a(b(p)).isclose(b(a(p)), 1e-9)


def test_interval_orbit_accumulates_at_both_ends():
    omega = build_standard_simplex(1)
    group = build_group([np.diag([2.0, 1.0])], omega)
    sample = orbit(group, ProjectivePoint([1.0, 1.0]), 30, eps_acc=1e-4)
    acc = omega.to_chart(sample.boundary_accumulation)
    assert len(sample.points) == 61
    assert np.min(acc) < 1e-4 and np.max(acc) > 1 - 1e-4


def test_face_dynamics_on_triangle():
    omega = build_standard_simplex(2)
    rep = face_dynamics_check(omega, ProjectiveMap(np.diag([4.0, 2.0, 1.0])), ProjectivePoint([1.0, 1, 1]))
    assert rep.passed
    assert all(v < 1e-9 for v in rep.residuals.values())


def test_product_example_is_full_dimensional():
    interval = build_standard_simplex(1)
    base = build_group([np.diag([2.0, 1.0])], interval)
    star, c_star, l_star = build_product_example(interval, base)
    assert star.dim == 4
    rng = np.random.default_rng(0)
    bases = [ProjectivePoint(z) for z in star.sample_interior(4, seed=0)]
    del rng
    acc = orbital_limit_sample(l_star, bases, 20)
    assert affine_span_dim(star, acc) == star.dim - 1
