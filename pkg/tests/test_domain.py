import numpy as np
import pytest

from hilbert_flats import ConvexDomain, ProjectivePoint, build_standard_simplex
from hilbert_flats.domain import (convex_hull, hull_membership, hull_meets_interior,
                                  hull_residual, open_face, properly_embedded,
                                  vertex_enumeration)
from hilbert_flats.errors import HilbertFlatsError
from hilbert_flats.randoms import random_ellipsoid, random_interior, random_polytope


def square():
    v = np.array([[1.0, 1, 1], [-1, 1, 1], [-1, -1, 1], [1, -1, 1]])
    return ConvexDomain.polytope(v, chart=np.array([0.0, 0, 1]))


def test_containment_kinds():
    omega = build_standard_simplex(2)
    assert omega.contains(ProjectivePoint([1.0, 1, 1])).kind == "interior"
    assert omega.contains(ProjectivePoint([1.0, 1, 0])).kind == "boundary"
    assert omega.contains(ProjectivePoint([1.0, 1, -1])).kind == "outside"


def test_polytope_needs_full_dimension():
    with pytest.raises(HilbertFlatsError):
        ConvexDomain.polytope(np.array([[1.0, 0, 0], [0, 1.0, 0]]))


def test_open_face_of_edge_point():
    omega = build_standard_simplex(2)
    face = open_face(omega, ProjectivePoint([1.0, 2.0, 0.0]))
    assert face.dim == 1
    assert face.contains(ProjectivePoint([3.0, 1.0, 0.0]))
    assert not face.contains(ProjectivePoint([1.0, 0.0, 1.0]))
    assert open_face(omega, ProjectivePoint([1.0, 1, 1])).dim == 2


def test_hull_membership_lp_vs_nnls(rng):
    # two independent routes: LP feasibility and nonnegative least squares
    gens = rng.dirichlet(np.ones(3), size=5)
    for _ in range(50):
        z = rng.dirichlet(np.ones(3))
        lp = hull_membership(gens, z)
        res = hull_residual(gens, z)
        assert lp == (res < 1e-9)


def test_convex_hull_of_interior_points(rng):
    omega, _ = random_polytope(3, rng)
    pts = random_interior(omega, 6, rng)
    hull = convex_hull(omega, [ProjectivePoint(p) for p in pts])
    assert hull.contains(ProjectivePoint(pts.mean(axis=0)))
    # its relative boundary is interior to the domain
    assert not properly_embedded(omega, hull)


def test_diagonal_of_square_properly_embedded():
    omega = square()
    sub = convex_hull(omega, [ProjectivePoint([1.0, 1, 1]), ProjectivePoint([-1.0, -1, 1])])
    # a diagonal is properly embedded: its endpoints are vertices
    assert properly_embedded(omega, sub)
    sub2 = convex_hull(omega, [ProjectivePoint([0.5, 0.5, 1]), ProjectivePoint([-0.5, -0.5, 1])])
    assert not properly_embedded(omega, sub2)


def test_hull_meets_interior():
    omega = build_standard_simplex(2)
    meets, depth, _ = hull_meets_interior(omega, np.eye(3)[:2])
    assert not meets
    meets, depth, _ = hull_meets_interior(omega, np.eye(3))
    assert meets and depth > 0


def test_vertex_enumeration_of_slice():
    omega = build_standard_simplex(3)
    verts = vertex_enumeration(omega, np.eye(4)[:, :2])
    assert len(verts) == 2


def test_ellipsoid_interior_sampling(rng):
    omega, _ = random_ellipsoid(3, rng)
    pts = random_interior(omega, 100, rng)
    assert np.all(omega.margins(pts) > 0)
    assert np.all(omega.margins(omega.sample_interior(50, seed=1)) > 0)


def test_chord_params_bracket_points(rng):
    omega, _ = random_polytope(4, rng)
    x, y = random_interior(omega, 2, rng)
    lo, hi = omega.chord_params(x, y)
    assert lo < 0 and hi > 1
