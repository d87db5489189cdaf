import numpy as np
import pytest

from hilbert_flats import (MetricConfig, ProjectivePoint, build_group, build_standard_simplex,
                           common_fixed_points, flat_torus_report, minimal_simplex_search,
                           rank_certificate)
from hilbert_flats.errors import NotSimultaneouslyDiagonalizable, ValidationError
from hilbert_flats.flat import lll_reduce
from hilbert_flats.randoms import random_block_diagonal, random_polytope

CFG = MetricConfig(grid_samples=2000)


def diag_group(d, rows):
    omega = build_standard_simplex(d)
    return build_group([np.diag(np.exp(r)) for r in rows], omega, commuting=True)


def test_fixed_points_of_diagonal_family():
    group = diag_group(2, [[1.0, 0, 0], [0, 1.0, 0]])
    fixed = common_fixed_points(group)
    coords = sorted(tuple(np.round(np.abs(f.point.coords), 9)) for f in fixed)
    assert coords == sorted(tuple(r) for r in np.eye(3))


def test_rotation_is_refused():
    omega = build_standard_simplex(2)
    perm = np.eye(3)[[1, 2, 0]]
    group = build_group([perm @ np.diag([1.0, 2.0, 4.0]) @ np.linalg.inv(perm) @ perm], omega,
                        commuting=True, check=False)
    with pytest.raises(NotSimultaneouslyDiagonalizable):
        common_fixed_points(group)


def test_full_rank_flat_on_simplex():
    for d in (2, 3):
        group = diag_group(d, list(np.eye(d + 1)))
        rep = flat_torus_report(group, CFG)
        assert rep.dim == d and rep.rank == d and rep.cocompact
        assert rep.diagnostics["vertex_fix_residual"] < 1e-9
        assert rep.diagnostics["simplex_min_residual"] < 1e-6


def test_rank_deficient_flat():
    group = diag_group(2, [[0.0, 1.0, 2.0]])
    rep = flat_torus_report(group, CFG)
    assert rep.dim == 2 and rep.rank == 1 and not rep.cocompact


def test_rank_certificate_on_rationally_dependent_generators():
    group = diag_group(2, [[0.0, 1.0, 0.0], [0.0, 2.0, 0.0], [0.0, 0.0, 1.0]])
    fixed = common_fixed_points(group)
    simplex = minimal_simplex_search(group, fixed)
    rank, basis = rank_certificate(group, simplex)
    assert rank == 2
    assert len(basis) == 2


def test_irrational_generators_are_not_discrete():
    group = diag_group(1, [[0.0, 1.0], [0.0, np.sqrt(2.0)]])
    rep = flat_torus_report(group, CFG)
    assert rep.dim == 1
    assert rep.diagnostics["discrete"] is False


def test_finite_group_gives_fixed_point():
    omega = build_standard_simplex(1)
    group = build_group([np.array([[0.0, 1.0], [1.0, 0.0]])], omega, commuting=True)
    rep = flat_torus_report(group, CFG)
    assert rep.dim == 0 and rep.rank == 0 and rep.cocompact
    assert rep.simplex.vertices[0].isclose(ProjectivePoint([1.0, 1.0]), 1e-8)


def test_flat_on_random_polytope(rng):
    omega, structure = random_polytope(4, rng)
    gens = [random_block_diagonal(structure, rng) for _ in range(2)]
    rep = flat_torus_report(build_group(gens, omega, commuting=True), CFG)
    assert rep.simplex.properly_embedded()
    assert rep.diagnostics["simplex_min_residual"] < 1e-6


def test_noncommuting_family_rejected():
    omega = build_standard_simplex(2)
    group = build_group([np.diag([1.0, 2, 3]), np.eye(3)[[1, 0, 2]]], omega, commuting=False)
    with pytest.raises(ValidationError):
        flat_torus_report(group, CFG)


def test_lll_reduces_skewed_basis():
    basis = np.array([[1.0, 0.0], [7.0, 1.0]])
    red = lll_reduce(basis)
    assert abs(abs(np.linalg.det(red)) - 1.0) < 1e-12
    assert np.max(np.linalg.norm(red, axis=1)) <= 1.0 + 1e-12
