"""Projective points, projective maps and limits in P(End(R^d)).

Points and maps are stored through canonical representatives so that
equality and deduplication are deterministic:

* a point is stored as a unit vector whose first non-negligible
  coordinate is positive;
* a map is stored as a matrix whose largest absolute entry is 1 and whose
  first non-negligible entry (row-major) is positive.
"""

from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from .errors import (DegenerateConfiguration, EigenSolverFailure,
                     GeometryError, NonCollinear)

POINT_TOL = 1e-9
COLLINEAR_TOL = 1e-10
RANK_CUTOFF = 1e-9
SIGN_CUTOFF = 1e-12


def _fix_sign(v):
    flat = v.ravel()
    idx = np.flatnonzero(np.abs(flat) > SIGN_CUTOFF * np.max(np.abs(flat)))
    if idx.size and flat[idx[0]] < 0:
        return -v
    return v


def _frozen(arr):
    arr = np.array(arr, dtype=float)
    arr.setflags(write=False)
    return arr


class ProjectivePoint:
    """A point [v] of P(R^d)."""

    __slots__ = ("_coords",)

    def __init__(self, coords):
        v = np.asarray(coords, dtype=float).ravel()
        if v.size < 1 or not np.all(np.isfinite(v)):
            raise GeometryError("point coordinates must be finite")
        n = np.linalg.norm(v)
        if n == 0.0:
            raise GeometryError("the zero vector is not a projective point")
        self._coords = _frozen(_fix_sign(v / n))

    @property
    def coords(self):
        return self._coords

    @property
    def dim(self):
        """Dimension d of the ambient vector space R^d."""
        return self._coords.size

    def distance(self, other):
        """Chordal distance between canonical representatives, sign-blind."""
        a, b = self._coords, other._coords
        return float(min(np.linalg.norm(a - b), np.linalg.norm(a + b)))

    def isclose(self, other, tol=POINT_TOL):
        return self.dim == other.dim and self.distance(other) <= tol

    def __eq__(self, other):
        if not isinstance(other, ProjectivePoint):
            return NotImplemented
        return self.isclose(other)

    __hash__ = None

    def key(self, quantum=POINT_TOL):
        """Hashable key of the canonical representative quantized at ``quantum``."""
        return tuple(np.round(self._coords / quantum).astype(np.int64).tolist())

    def __repr__(self):
        return "ProjectivePoint([" + ", ".join(f"{c:.6g}" for c in self._coords) + "])"


class ProjectiveMap:
    """An element of PGL_d(R)."""

    __slots__ = ("_matrix", "__dict__")

    def __init__(self, matrix):
        m = np.array(matrix, dtype=float)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise GeometryError(f"projective map needs a square matrix, got shape {m.shape}")
        if not np.all(np.isfinite(m)):
            raise GeometryError("matrix entries must be finite")
        scale = np.max(np.abs(m))
        if scale == 0.0:
            raise GeometryError("zero matrix")
        m = _fix_sign(m / scale)
        s = np.linalg.svd(m, compute_uv=False)
        if s[-1] <= 1e-14 * s[0]:
            raise GeometryError("projective map must be invertible")
        self._matrix = _frozen(m)

    @property
    def matrix(self):
        return self._matrix

    @property
    def dim(self):
        return self._matrix.shape[0]

    @cached_property
    def spectrum(self):
        return eigenvalue_moduli(self)

    @cached_property
    def condition(self):
        s = np.linalg.svd(self._matrix, compute_uv=False)
        return float(s[0] / s[-1])

    def inverse(self):
        return ProjectiveMap(np.linalg.inv(self._matrix))

    def __matmul__(self, other):
        if isinstance(other, ProjectiveMap):
            return ProjectiveMap(self._matrix @ other._matrix)
        return NotImplemented

    def __call__(self, p):
        return apply_map(self, p)

    def power(self, n):
        if n < 0:
            return self.inverse().power(-n)
        result = np.eye(self.dim)
        base = self._matrix.copy()
        while n:
            if n & 1:
                result = result @ base
                result /= np.max(np.abs(result))
            n >>= 1
            if n:
                base = base @ base
                base /= np.max(np.abs(base))
        return ProjectiveMap(result)

    def distance(self, other):
        a, b = self._matrix, other._matrix
        return float(min(np.max(np.abs(a - b)), np.max(np.abs(a + b))))

    def isclose(self, other, tol=1e-10):
        return self.dim == other.dim and self.distance(other) <= tol

    def __eq__(self, other):
        if not isinstance(other, ProjectiveMap):
            return NotImplemented
        return self.isclose(other)

    __hash__ = None

    def commutator_residual(self, other):
        """How far [g, h] is from a scalar matrix, relative to the lifts."""
        a, b = self._matrix, other._matrix
        c = a @ b @ np.linalg.inv(b @ a)
        lam = np.trace(c) / self.dim
        return float(np.max(np.abs(c - lam * np.eye(self.dim))) / max(abs(lam), 1e-300))

    def __repr__(self):
        return f"ProjectiveMap({self._matrix.tolist()!r})"


@dataclass(frozen=True)
class EndomorphismClass:
    """A point [T] of P(End(R^d)) with its image and kernel.

    ``image`` and ``kernel`` are orthonormal column bases computed from the
    singular values of ``matrix`` with cutoff ``RANK_CUTOFF`` relative to the
    largest one.  ``residual`` is the distance between the last two terms of
    the sequence the class was extracted from (0 for a single matrix).
    """

    matrix: np.ndarray
    rank: int
    image: np.ndarray
    kernel: np.ndarray
    singular_values: np.ndarray
    residual: float = 0.0
    converged: bool = True

    @property
    def dim(self):
        return self.matrix.shape[0]

    def apply(self, p):
        v = self.matrix @ p.coords
        if np.linalg.norm(v) <= RANK_CUTOFF:
            raise DegenerateConfiguration("point lies in P(ker T)")
        return ProjectivePoint(v)

    def kernel_residual(self, p):
        """Norm of the component of p orthogonal to ker T (0 iff p in P(ker T))."""
        v = p.coords
        if self.kernel.shape[1] == 0:
            return float(np.linalg.norm(v))
        return float(np.linalg.norm(v - self.kernel @ (self.kernel.T @ v)))

    def image_residual(self, basis):
        """Largest component of image(T) outside span(basis)."""
        if self.image.shape[1] == 0:
            return 0.0
        if basis.shape[1] == 0:
            return 1.0
        q, _ = np.linalg.qr(basis)
        return float(np.max(np.linalg.norm(self.image - q @ (q.T @ self.image), axis=0)))


def endomorphism_class(matrix, residual=0.0, converged=True):
    m = np.array(matrix, dtype=float)
    scale = np.max(np.abs(m))
    if scale == 0.0:
        raise GeometryError("zero endomorphism")
    m = _fix_sign(m / scale)
    u, s, vt = np.linalg.svd(m)
    rank = int(np.sum(s > RANK_CUTOFF * s[0]))
    # keep only the retained singular directions so T is exactly rank-deficient
    clean = (u[:, :rank] * s[:rank]) @ vt[:rank]
    clean = _fix_sign(clean / np.max(np.abs(clean)))
    return EndomorphismClass(
        matrix=_frozen(clean),
        rank=rank,
        image=_frozen(u[:, :rank]),
        kernel=_frozen(vt[rank:].T),
        singular_values=_frozen(s / s[0]),
        residual=float(residual),
        converged=converged,
    )


def apply_map(g, p):
    if g.dim != p.dim:
        raise GeometryError(f"dimension mismatch: map on R^{g.dim}, point in R^{p.dim}")
    return ProjectivePoint(g.matrix @ p.coords)


def cross_ratio(a, x, y, b):
    """Cross ratio [a, x, y, b] = |x-b||y-a| / (|x-a||y-b|).

    Evaluated with 2x2 determinants in a basis of the common line, which is
    independent of the affine chart and of the chosen lifts.
    """
    pts = np.vstack([a.coords, x.coords, y.coords, b.coords])
    s, vt = np.linalg.svd(pts, full_matrices=False)[1:]
    if s.size > 2 and s[2] > COLLINEAR_TOL * s[0]:
        raise NonCollinear(f"points span more than a line (sigma_3/sigma_1 = {s[2] / s[0]:.3e})")
    c = pts @ vt[:2].T
    c /= np.linalg.norm(c, axis=1, keepdims=True)
    ca, cx, cy, cb = c

    def det(p, q):
        return p[0] * q[1] - p[1] * q[0]

    xa, yb = det(cx, ca), det(cy, cb)
    if abs(xa) <= POINT_TOL or abs(yb) <= POINT_TOL:
        raise DegenerateConfiguration("x coincides with a or y coincides with b")
    return float(abs(det(cx, cb) * det(cy, ca) / (xa * yb)))


def eigenvalue_moduli(g):
    try:
        ev = np.linalg.eigvals(g.matrix)
    except np.linalg.LinAlgError as exc:
        raise EigenSolverFailure(str(exc)) from exc
    if not np.all(np.isfinite(ev)):
        raise EigenSolverFailure("non-finite eigenvalues")
    return _frozen(np.sort(np.abs(ev))[::-1])


def _as_matrix(m):
    m = m.matrix if isinstance(m, ProjectiveMap) else np.asarray(m, dtype=float)
    return _fix_sign(m / np.max(np.abs(m)))


def _matrix_distance(a, b):
    return float(min(np.max(np.abs(a - b)), np.max(np.abs(a + b))))


def projective_limit(maps, threshold=1e-10):
    """Limit class of a finite sequence in P(End(R^d)).

    Terms may be ProjectiveMaps or raw matrices.  The class of the last term
    is returned; its ``residual`` is the distance between the last two
    normalized terms and ``converged`` records whether the residual is below
    ``threshold``.
    """
    mats = [_as_matrix(m) for m in maps]
    if not mats:
        raise GeometryError("projective_limit needs a nonempty sequence")
    residual = 0.0 if len(mats) == 1 else _matrix_distance(mats[-1], mats[-2])
    return endomorphism_class(mats[-1], residual=residual,
                              converged=residual <= threshold)


def power_sequence(g, threshold=1e-10, max_power=4096):
    """Normalized matrices of g, g^2, ... until consecutive terms differ by < threshold.

    Plain arrays are returned because high powers are typically singular to
    working precision.
    """
    base = _as_matrix(g)
    seq = [base]
    while len(seq) < max_power:
        seq.append(_as_matrix(seq[-1] @ base))
        if _matrix_distance(seq[-1], seq[-2]) < threshold:
            break
    return seq


@dataclass(frozen=True)
class Subspace:
    """Linear subspace of R^d given by an orthonormal column basis."""

    basis: np.ndarray = field(repr=False)

    @property
    def dim(self):
        return self.basis.shape[1]

    def contains(self, v, tol=POINT_TOL):
        v = np.asarray(v, dtype=float)
        v = v / np.linalg.norm(v)
        return float(np.linalg.norm(v - self.basis @ (self.basis.T @ v))) <= tol


def span(vectors, tol=RANK_CUTOFF):
    vectors = np.atleast_2d(np.asarray(vectors, dtype=float))
    if vectors.size == 0:
        return Subspace(np.zeros((0, 0)))
    u, s, _ = np.linalg.svd(vectors.T, full_matrices=False)
    rank = int(np.sum(s > tol * s[0])) if s.size and s[0] > 0 else 0
    return Subspace(_frozen(u[:, :rank]))
