"""Closed-form metric geometry of the open simplex."""

from dataclasses import dataclass, field

import numpy as np

from .domain import ConvexDomain, convex_hull, properly_embedded
from .errors import LengthMismatch, NonPositiveCoordinates, ValidationError
from .projective import ProjectivePoint

POSITIVE_TOL = 1e-13


def build_standard_simplex(k):
    """The open k-simplex {x_1 > 0, ..., x_{k+1} > 0} in P(R^{k+1})."""
    if k < 1:
        raise ValidationError("simplex dimension must be at least 1")
    return ConvexDomain.polytope(np.eye(k + 1), chart=np.ones(k + 1))


def positive_representative(x, k=None):
    v = x.coords if isinstance(x, ProjectivePoint) else np.asarray(x, dtype=float)
    if k is not None and v.size != k + 1:
        raise LengthMismatch(f"expected {k + 1} homogeneous coordinates, got {v.size}")
    if v[np.argmax(np.abs(v))] < 0:
        v = -v
    v = v / np.max(v)
    if np.any(v <= POSITIVE_TOL):
        raise NonPositiveCoordinates("point has no all-positive representative")
    return v


def simplex_distance(x, y, k=None):
    """max_{i,j} (1/2) |log(x_i y_j / (y_i x_j))| on the open simplex."""
    lx = np.log(positive_representative(x, k))
    ly = np.log(positive_representative(y, k))
    if lx.size != ly.size:
        raise LengthMismatch("points live in different dimensions")
    diff = lx - ly
    return 0.5 * float(np.max(diff) - np.min(diff))


def phi_coordinates(x, k=None):
    """(log x_2/x_1, ..., log x_{k+1}/x_1)."""
    lx = np.log(positive_representative(x, k))
    return lx[1:] - lx[0]


def dist_rd(v, w):
    """Polyhedral-norm distance on R^k that makes phi_coordinates an isometry."""
    v = np.asarray(v, dtype=float)
    w = np.asarray(w, dtype=float)
    if v.shape != w.shape:
        raise LengthMismatch(f"vectors of length {v.size} and {w.size}")
    u = v - w
    if u.size == 0:
        return 0.0
    return 0.5 * max(float(np.max(np.abs(u))), float(np.max(u[:, None] - u[None, :])))


@dataclass(frozen=True)
class SimplexFlat:
    """A projective simplex given by linearly independent vertices."""

    vertices: tuple
    ambient: ConvexDomain = field(default=None, repr=False, compare=False)

    def __post_init__(self):
        m = np.array([v.coords for v in self.vertices])
        if len(m) == 0:
            raise ValidationError("simplex needs at least one vertex")
        s = np.linalg.svd(m, compute_uv=False)
        if s[-1] <= 1e-9 * s[0]:
            raise ValidationError("simplex vertices are not linearly independent")

    @property
    def dim(self):
        return len(self.vertices) - 1

    def vertex_matrix(self):
        """Vertex lifts as columns, signed so the simplex is their positive span.

        With an ambient domain the chart lifts are used; otherwise the
        canonical representatives.
        """
        if self.ambient is not None:
            return self.ambient.lifts(self.vertices).T
        return np.array([v.coords for v in self.vertices]).T

    def barycenter(self):
        return ProjectivePoint(self.vertex_matrix().sum(axis=1))

    def simplex_coordinates(self, p):
        """Coefficients c with p = V c in the vertex basis (positive inside)."""
        v = self.vertex_matrix()
        c, *_ = np.linalg.lstsq(v, p.coords, rcond=None)
        if c[np.argmax(np.abs(c))] < 0:
            c = -c
        return c

    def phi(self, p):
        """Phi coordinates of a point of the simplex in its vertex basis."""
        return phi_coordinates(self.simplex_coordinates(p))

    def point(self, phi_coords):
        """Inverse of ``phi``."""
        c = np.exp(np.concatenate([[0.0], np.asarray(phi_coords, dtype=float)]))
        return ProjectivePoint(self.vertex_matrix() @ c)

    def sample(self, n, seed=0, spread=1.0):
        """Points of the open simplex with Phi coordinates ~ N(0, spread^2)."""
        rng = np.random.default_rng(seed)
        if self.dim == 0:
            return [self.vertices[0]] * n
        return [self.point(spread * rng.standard_normal(self.dim)) for _ in range(n)]

    def properly_embedded(self):
        if self.ambient is None:
            return True
        hull = convex_hull(self.ambient, list(self.vertices))
        return properly_embedded(self.ambient, hull)


def is_simplex_automorphism(g, tol=1e-10):
    """Diagnostic: whether [g] is a positive diagonal matrix times a permutation."""
    m = g.matrix
    mask = np.abs(m) > tol
    if not (np.all(mask.sum(axis=0) == 1) and np.all(mask.sum(axis=1) == 1)):
        return False
    entries = m[mask]
    return bool(np.all(entries > 0) or np.all(entries < 0))
