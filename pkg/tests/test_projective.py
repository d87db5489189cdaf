import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hilbert_flats import ProjectiveMap, ProjectivePoint
from hilbert_flats.errors import HilbertFlatsError
from hilbert_flats.projective import (cross_ratio, eigenvalue_moduli, power_sequence,
                                      projective_limit, span)


def test_point_scale_invariance():
    p = ProjectivePoint([1.0, 2.0, 3.0])
    assert p.isclose(ProjectivePoint([-2.0, -4.0, -6.0]))
    assert p.key() == ProjectivePoint([3.0, 6.0, 9.0]).key()


def test_zero_point_rejected():
    with pytest.raises(HilbertFlatsError):
        ProjectivePoint([0.0, 0.0])


def test_singular_map_rejected():
    with pytest.raises(HilbertFlatsError):
        ProjectiveMap(np.array([[1.0, 1.0], [1.0, 1.0]]))


def test_inverse_and_power():
    g = ProjectiveMap(np.array([[2.0, 1.0], [0.0, 1.0]]))
    assert g.inverse().power(1).isclose(ProjectiveMap(np.linalg.inv(g.matrix)))
    assert g.power(3).isclose(ProjectiveMap(np.linalg.matrix_power(g.matrix, 3)))


def test_cross_ratio_on_affine_line():
    # points 0 < 1 < 2 < 3 on a line; (a, x, y, b) cross ratio |a-y||x-b| / |a-x||y-b|
    pts = [ProjectivePoint([t, 1.0]) for t in (0.0, 1.0, 2.0, 3.0)]
    assert cross_ratio(*pts) == pytest.approx(2.0 * 2.0 / (1.0 * 1.0))


def test_cross_ratio_projective_invariance(rng):
    a, x, y, b = ([t, 1.0] for t in (0.0, 0.4, 1.3, 2.0))
    g = rng.normal(size=(2, 2)) + 3 * np.eye(2)
    before = cross_ratio(*(ProjectivePoint(v) for v in (a, x, y, b)))
    after = cross_ratio(*(ProjectivePoint(g @ np.array(v)) for v in (a, x, y, b)))
    assert after == pytest.approx(before, rel=1e-10)


def test_cross_ratio_noncollinear():
    pts = [ProjectivePoint(v) for v in ([1, 0, 0], [0, 1, 0], [0, 0, 1], [1, 1, 1.0])]
    with pytest.raises(HilbertFlatsError):
        cross_ratio(*pts)


def test_eigenvalue_moduli_sorted():
    g = ProjectiveMap(np.diag([1.0, -5.0, 2.0]))
    # projective class: moduli are normalized so the largest is 1
    assert np.allclose(eigenvalue_moduli(g), [1.0, 0.4, 0.2])


def test_power_sequence_limit_is_rank_one():
    seq = power_sequence(ProjectiveMap(np.diag([4.0, 2.0, 1.0])))
    lim = projective_limit(seq)
    assert lim.rank == 1 and lim.converged
    assert np.allclose(np.abs(lim.apply(ProjectivePoint([1.0, 1.0, 1.0])).coords), [1, 0, 0], atol=1e-9)


def test_projective_limit_flags_nonconvergence():
    seq = [ProjectiveMap(np.array([[0.0, 1.0], [1.0, 0.0]])), ProjectiveMap(np.eye(2))] * 4
    assert not projective_limit(seq).converged
    with pytest.raises(HilbertFlatsError):
        projective_limit([])


def test_span_dim():
    assert span([[1.0, 0, 0], [2.0, 0, 0], [0, 1.0, 0]]).dim == 2
    assert span([]).dim == 0


@settings(max_examples=50, deadline=None)
@given(st.lists(st.floats(0.1, 10.0), min_size=2, max_size=5))
def test_commutator_of_diagonals_vanishes(entries):
    a = ProjectiveMap(np.diag(entries))
    b = ProjectiveMap(np.diag(entries[::-1]))
    assert a.commutator_residual(b) < 1e-12
