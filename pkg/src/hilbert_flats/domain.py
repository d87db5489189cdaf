"""Properly convex domains, their faces and convex subsets.

A domain lives in P(R^d) and is either a polytope (positive span of vertex
vectors, whose signs select the cone) or an ellipsoid ({p : p^T Q p < 0}
for a quadric Q of signature (d-1, 1)).  Every domain carries an affine
chart functional ``chart`` that is strictly positive on its closure;
"chart lifts" are representatives v with chart . v = 1.
"""

from dataclasses import dataclass, field
from itertools import combinations

import numpy as np
from scipy.optimize import linprog
from scipy.spatial import ConvexHull, QhullError
from scipy.stats import qmc

from .errors import (EmptyInput, FaceMembershipViolated,
                     InvariantViolation, NotPolytope, OutsideDomain,
                     ValidationError)
from .projective import ProjectiveMap, ProjectivePoint, Subspace, _frozen, span

BOUNDARY_TOL = 1e-10
_LP_OPTIONS = {"primal_feasibility_tolerance": 1e-10,
               "dual_feasibility_tolerance": 1e-10}


@dataclass(frozen=True)
class Containment:
    """Result of a membership query.

    ``kind`` is one of "interior", "boundary", "outside".  ``active`` lists
    the facets (polytope) through the point; ``residual`` is the smallest
    normalized facet value or the normalized quadric value.
    """

    kind: str
    active: tuple = ()
    residual: float = 0.0

    @property
    def in_closure(self):
        return self.kind != "outside"


class ConvexDomain:
    """A properly convex open domain in P(R^d)."""

    def __init__(self, kind, dim, chart, vertices=None, facets=None, quadric=None):
        self.kind = kind
        self.dim = dim
        self.chart = _frozen(chart)
        self.vertices = None if vertices is None else _frozen(vertices)
        self.facets = None if facets is None else _frozen(facets)
        self.quadric = None if quadric is None else _frozen(quadric)
        self.chart_origin = _frozen(self.chart / (self.chart @ self.chart))
        # orthonormal basis of ker(chart) for chart coordinates
        q, _ = np.linalg.qr(np.column_stack([self.chart, np.eye(dim)]))
        self.chart_basis = _frozen(q[:, 1:dim])

    # ------------------------------------------------------------------ build
    @classmethod
    def polytope(cls, vertices, chart=None):
        """Polytope spanned by the given vertex vectors.

        Raises ValidationError when the cone is not properly convex, has empty
        interior, or some vertex is not extreme.
        """
        verts = np.atleast_2d(np.asarray(
            [v.coords if isinstance(v, ProjectivePoint) else v for v in vertices], dtype=float))
        n, d = verts.shape
        if d < 2:
            raise ValidationError("polytope needs ambient dimension d >= 2")
        if n < d:
            raise ValidationError(f"domain not properly convex: {n} vertices cannot span R^{d}")
        unit = verts / np.linalg.norm(verts, axis=1, keepdims=True)
        if chart is None:
            chart = _choose_chart(unit)
        chart = np.asarray(chart, dtype=float)
        chart = chart / np.linalg.norm(chart)
        vals = unit @ chart
        bad = np.flatnonzero(vals <= 1e-12)
        if bad.size:
            raise ValidationError(
                f"domain not properly convex: vertex {int(bad[0])} non-positive under chart")
        lifts = verts / (verts @ chart)[:, None]
        dom = cls("polytope", d, chart, vertices=lifts)
        dom.facets = _frozen(dom._derive_facets(lifts))
        return dom

    @classmethod
    def ellipsoid(cls, center, shape):
        """Ellipsoid {y : (y-c)^T A (y-c) < 1} in the chart [y : 1]."""
        c = np.asarray(center, dtype=float).ravel()
        a = np.atleast_2d(np.asarray(shape, dtype=float))
        k = c.size
        if a.shape != (k, k):
            raise ValidationError(f"ellipsoid shape must be {k}x{k}, got {a.shape}")
        a = 0.5 * (a + a.T)
        if np.min(np.linalg.eigvalsh(a)) <= 0:
            raise ValidationError("ellipsoid shape matrix must be positive definite")
        q = np.zeros((k + 1, k + 1))
        q[:k, :k] = a
        q[:k, k] = q[k, :k] = -a @ c
        q[k, k] = c @ a @ c - 1.0
        chart = np.zeros(k + 1)
        chart[k] = 1.0
        return cls.from_quadric(q, chart)

    @classmethod
    def from_quadric(cls, quadric, chart):
        q = np.asarray(quadric, dtype=float)
        q = 0.5 * (q + q.T)
        q = q / np.max(np.abs(q))
        chart = np.asarray(chart, dtype=float)
        chart = chart / np.linalg.norm(chart)
        d = q.shape[0]
        dom = cls("ellipsoid", d, chart, quadric=q)
        b = dom.chart_basis
        if np.min(np.linalg.eigvalsh(b.T @ q @ b)) <= 0:
            raise ValidationError("domain not properly convex: quadric unbounded in the chart")
        center = dom.center_lift()
        if center @ q @ center >= 0:
            raise ValidationError("domain not properly convex: quadric has empty interior")
        return dom

    def _derive_facets(self, lifts):
        y = self.to_chart_lifts(lifts)
        k = y.shape[1]
        if k == 1:
            order = np.argsort(y[:, 0])
            if y.shape[0] != 2 or abs(y[order[1], 0] - y[order[0], 0]) < 1e-12:
                raise ValidationError("a 1-dimensional polytope needs exactly 2 distinct vertices")
            eqs = np.array([[-1.0, y[order[0], 0]], [1.0, -y[order[1], 0]]])
        else:
            try:
                hull = ConvexHull(y)
            except QhullError as exc:
                raise ValidationError(f"domain not properly convex: empty interior ({exc})") from None
            missing = sorted(set(range(len(y))) - set(hull.vertices.tolist()))
            if missing:
                raise ValidationError(f"vertex {missing[0]} is not extreme")
            eqs = _unique_rows(hull.equations)
        # n . y + c <= 0 in the chart  <=>  f . v >= 0 on chart lifts
        normals, offsets = eqs[:, :-1], eqs[:, -1]
        f = -(normals @ self.chart_basis.T) - offsets[:, None] * self.chart[None, :]
        f /= np.linalg.norm(f, axis=1, keepdims=True)
        f[np.abs(f) < 1e-15] = 0.0
        return f

    def transformed(self, g):
        """The domain g(Omega), with facets transported as f o g^-1."""
        m = g.matrix if isinstance(g, ProjectiveMap) else np.asarray(g, dtype=float)
        minv = np.linalg.inv(m)
        chart = minv.T @ self.chart
        if self.kind == "polytope":
            dom = ConvexDomain("polytope", self.dim, chart / np.linalg.norm(chart),
                               vertices=self.vertices @ m.T)
            dom.vertices = _frozen(dom.vertices / (dom.vertices @ dom.chart)[:, None])
            f = self.facets @ minv
            dom.facets = _frozen(f / np.linalg.norm(f, axis=1, keepdims=True))
            return dom
        return ConvexDomain.from_quadric(minv.T @ self.quadric @ minv, chart)

    # ------------------------------------------------------------- coordinates
    def lift(self, p):
        """Chart lift of a point, or None if the point is on the chart's infinity."""
        v = p.coords if isinstance(p, ProjectivePoint) else np.asarray(p, dtype=float)
        s = v @ self.chart
        if abs(s) <= 1e-12 * np.linalg.norm(v):
            return None
        return v / s

    def lifts(self, points):
        """Chart lifts of many points (rows); rows at chart infinity become nan."""
        arr = np.atleast_2d(np.asarray(
            [p.coords if isinstance(p, ProjectivePoint) else p for p in points], dtype=float))
        s = arr @ self.chart
        bad = np.abs(s) <= 1e-12 * np.linalg.norm(arr, axis=1)
        s = np.where(bad, np.nan, s)
        return arr / s[:, None]

    def to_chart_lifts(self, lifts):
        return np.atleast_2d(lifts) @ self.chart_basis

    def to_chart(self, points):
        return self.to_chart_lifts(self.lifts(points))

    def from_chart(self, coords):
        coords = np.atleast_2d(np.asarray(coords, dtype=float))
        return self.chart_origin[None, :] + coords @ self.chart_basis.T

    def center_lift(self):
        """A canonical interior point (vertex barycenter or quadric center) as a chart lift."""
        if self.kind == "polytope":
            return self.vertices.mean(axis=0)
        b, q, z0 = self.chart_basis, self.quadric, self.chart_origin
        y = np.linalg.solve(b.T @ q @ b, -b.T @ q @ z0)
        return z0 + b @ y

    @property
    def vertex_points(self):
        if self.vertices is None:
            raise NotPolytope("ellipsoids have no vertex list")
        return [ProjectivePoint(v) for v in self.vertices]

    # -------------------------------------------------------------- membership
    def margins(self, lifts):
        """Normalized interior margins of chart lifts (positive inside).

        Polytope: smallest facet value of the unit representative; ellipsoid:
        -Q(v)/|v|^2.  Rows that are nan give -inf.
        """
        z = np.atleast_2d(lifts)
        unit = z / np.linalg.norm(z, axis=1, keepdims=True)
        if self.kind == "polytope":
            m = np.min(unit @ self.facets.T, axis=1)
        else:
            m = -np.einsum("ij,jk,ik->i", unit, self.quadric, unit)
        return np.where(np.isnan(m), -np.inf, m)

    def facet_values(self, lifts):
        return np.atleast_2d(lifts) @ self.facets.T

    def contains(self, p, tol=BOUNDARY_TOL):
        z = self.lift(p)
        if z is None:
            return Containment("outside", residual=-np.inf)
        unit = z / np.linalg.norm(z)
        if self.kind == "polytope":
            vals = self.facets @ unit
            res = float(np.min(vals))
            if res < -tol:
                return Containment("outside", residual=res)
            active = tuple(int(i) for i in np.flatnonzero(np.abs(vals) <= tol))
            if active:
                return Containment("boundary", active=active, residual=res)
            return Containment("interior", residual=res)
        res = float(-(unit @ self.quadric @ unit))
        if res < -tol:
            return Containment("outside", residual=res)
        if res <= tol:
            return Containment("boundary", residual=res)
        return Containment("interior", residual=res)

    def is_interior(self, p, tol=BOUNDARY_TOL):
        return self.contains(p, tol).kind == "interior"

    # ------------------------------------------------------------------ chords
    def chord_params(self, x, y):
        """Exit parameters (t_a, t_b) of the lines z(t) = x + t (y - x).

        ``x`` and ``y`` are (n, d) arrays of chart lifts of interior points;
        t_a < 0 < 1 < t_b locate the two boundary points.
        """
        x = np.atleast_2d(x)
        y = np.atleast_2d(y)
        if self.kind == "polytope":
            fx = x @ self.facets.T
            fy = y @ self.facets.T
            df = fy - fx
            with np.errstate(divide="ignore", invalid="ignore"):
                t = -fx / df
            tb = np.min(np.where(df < 0, t, np.inf), axis=1)
            ta = np.max(np.where(df > 0, t, -np.inf), axis=1)
            return ta, tb
        q = self.quadric
        u = y - x
        a = np.einsum("ij,jk,ik->i", u, q, u)
        b = np.einsum("ij,jk,ik->i", x, q, u)
        c = np.einsum("ij,jk,ik->i", x, q, x)
        disc = np.sqrt(np.maximum(b * b - a * c, 0.0))
        qq = -(b + np.where(b >= 0, 1.0, -1.0) * disc)
        with np.errstate(divide="ignore", invalid="ignore"):
            r1 = qq / a
            r2 = c / qq
        return np.minimum(r1, r2), np.maximum(r1, r2)

    # ---------------------------------------------------------------- sampling
    def bounding_box(self):
        if self.kind == "polytope":
            y = self.to_chart_lifts(self.vertices)
            return y.min(axis=0), y.max(axis=0)
        b, q = self.chart_basis, self.quadric
        c = self.center_lift()
        # ellipsoid in chart coords: (y-yc)^T A (y-yc) < -Q(c)
        a = b.T @ q @ b
        level = -(c @ q @ c)
        half = np.sqrt(level * np.diag(np.linalg.inv(a)))
        yc = self.to_chart_lifts(c)[0]
        return yc - half, yc + half

    def sample_interior(self, n, seed=0, shrink=1.0):
        """Deterministic low-discrepancy interior sample as chart lifts (n, d).

        With ``shrink`` < 1 the sample is drawn from the image of the domain
        under the chart homothety about its center, keeping points away from
        the boundary.
        """
        lo, hi = self.bounding_box()
        k = self.dim - 1
        sampler = qmc.Sobol(d=k, scramble=True, seed=seed)
        out = []
        center = self.to_chart_lifts(self.center_lift())[0]
        total = 0
        while total < n:
            m = max(64, int(2 ** np.ceil(np.log2(4 * n))))
            y = qmc.scale(sampler.random(m), lo, hi) if k > 0 else np.zeros((m, 0))
            y = center + shrink * (y - center)
            z = self.from_chart(y)
            keep = z[self.margins(z) > 10 * BOUNDARY_TOL]
            out.append(keep)
            total += len(keep)
        return np.vstack(out)[:n]


def _choose_chart(unit):
    mean = unit.mean(axis=0)
    if np.linalg.norm(mean) > 0 and np.min(unit @ mean) > 1e-9 * np.linalg.norm(mean):
        return mean
    n, d = unit.shape
    # maximize t subject to unit @ l >= t, -1 <= l <= 1
    c = np.zeros(d + 1)
    c[-1] = -1.0
    a_ub = np.hstack([-unit, np.ones((n, 1))])
    res = linprog(c, A_ub=a_ub, b_ub=np.zeros(n),
                  bounds=[(-1, 1)] * d + [(None, 1)], method="highs")
    if res.status != 0 or -res.fun <= 1e-12:
        bad = int(np.argmin(unit @ mean)) if np.linalg.norm(mean) > 0 else 0
        raise ValidationError(f"domain not properly convex: vertex {bad} non-positive under chart")
    return res.x[:d]


def _unique_rows(eqs, tol=1e-9):
    kept = []
    for row in eqs:
        row = row / np.linalg.norm(row[:-1])
        if not any(np.max(np.abs(row - k)) < tol for k in kept):
            kept.append(row)
    return np.array(kept)


# ---------------------------------------------------------------------- faces
@dataclass(frozen=True)
class Face:
    """Open face F(x) of a point of the closed domain."""

    base_point: ProjectivePoint
    span: Subspace
    kind: str  # "domain" | "polytope-face" | "point"
    active: tuple = ()
    vertex_indices: tuple = ()
    relative_interior_sample: list = field(default_factory=list, repr=False)
    ambient: "ConvexDomain" = field(default=None, repr=False, compare=False)

    @property
    def dim(self):
        return self.span.dim - 1

    def contains(self, p, tol=BOUNDARY_TOL):
        """Whether p lies in the (relatively open) face."""
        omega = self.ambient
        c = omega.contains(p, tol)
        if self.kind == "domain":
            return c.kind == "interior"
        if self.kind == "point":
            return p.isclose(self.base_point, 1e-7)
        return c.kind == "boundary" and c.active == self.active


def open_face(omega, x, tol=BOUNDARY_TOL):
    c = omega.contains(x, tol)
    if c.kind == "outside":
        raise OutsideDomain(f"{x!r} is outside the closed domain")
    if c.kind == "interior":
        sample = [x] + ([ProjectivePoint(omega.center_lift())])
        idx = tuple(range(len(omega.vertices))) if omega.kind == "polytope" else ()
        return Face(x, Subspace(_frozen(np.eye(omega.dim))), "domain", (), idx, sample, omega)
    if omega.kind == "ellipsoid":
        return Face(x, span([x.coords]), "point", (), (), [x], omega)
    fv = omega.facet_values(omega.vertices)[:, list(c.active)]
    verts = tuple(int(i) for i in np.flatnonzero(np.all(np.abs(fv) <= 1e-9, axis=1)))
    vlifts = omega.vertices[list(verts)]
    sample = [x, ProjectivePoint(vlifts.mean(axis=0))]
    return Face(x, span(vlifts), "polytope-face", c.active, verts, sample, omega)


def _segment_points(omega, p, q, ts):
    zp, zq = omega.lift(p), omega.lift(q)
    return [ProjectivePoint((1 - t) * zp + t * zq) for t in ts]


def open_segment_in_domain(omega, p, q, ts=(0.25, 0.5, 0.75)):
    """Whether the open segment (p, q) of the closed domain lies in the open domain."""
    if p.isclose(q, 1e-12):
        return False
    return all(omega.is_interior(z) for z in _segment_points(omega, p, q, ts))


def face_line_property(omega, x, y, p, q):
    """Return whether (p, q) lies in the domain, checking it matches (x, y).

    p must lie in F(x) and q in F(y); the two answers agree by convexity and
    an InvariantViolation is raised if they do not.
    """
    if not open_face(omega, x).contains(p):
        raise FaceMembershipViolated("p is not in the open face of x")
    if not open_face(omega, y).contains(q):
        raise FaceMembershipViolated("q is not in the open face of y")
    pq = open_segment_in_domain(omega, p, q)
    xy = open_segment_in_domain(omega, x, y)
    if pq != xy:
        raise InvariantViolation(f"(p,q) in domain is {pq} but (x,y) in domain is {xy}")
    return pq


# ------------------------------------------------------------- convex subsets
@dataclass(frozen=True)
class ConvexSubset:
    """Convex hull of finitely many points of the closed domain.

    ``generators`` are chart lifts of the extreme points, ``span_dim`` the
    dimension of the hull.  ``facet_witnesses`` are chart lifts of one point
    in the relative interior of every relative facet of the hull.
    """

    ambient: ConvexDomain = field(repr=False)
    generators: np.ndarray
    span_dim: int
    facet_witnesses: np.ndarray = field(repr=False, default=None)

    @property
    def points(self):
        return [ProjectivePoint(g) for g in self.generators]

    def barycenter(self):
        return ProjectivePoint(self.generators.mean(axis=0))

    def contains(self, p):
        z = self.ambient.lift(p)
        return z is not None and hull_membership(self.generators, z)

    def sample(self, n, seed=0, include_generators=False):
        """Deterministic random convex combinations of the generators (chart lifts)."""
        rng = np.random.default_rng(seed)
        m = len(self.generators)
        w = rng.dirichlet(np.ones(m), size=n) if m > 1 else np.ones((n, 1))
        pts = w @ self.generators
        if include_generators:
            pts = np.vstack([self.generators, pts])
        return pts

    def interior_sample(self, n, seed=0):
        """Points of the hull lying in the open domain (chart lifts)."""
        out = []
        attempt = 0
        while sum(len(o) for o in out) < n and attempt < 20:
            pts = self.sample(4 * n, seed=seed + attempt)
            out.append(pts[self.ambient.margins(pts) > 10 * BOUNDARY_TOL])
            attempt += 1
        pts = np.vstack(out) if out else np.zeros((0, self.ambient.dim))
        return pts[:n]


def convex_hull(omega, points, tol=1e-9):
    if len(points) == 0:
        raise EmptyInput("convex hull of an empty set")
    lifts = omega.lifts(points)
    margins = omega.margins(lifts)
    bad = np.flatnonzero(~(margins >= -BOUNDARY_TOL))
    if bad.size:
        raise OutsideDomain(f"point {int(bad[0])} is outside the closed domain")
    return _hull_from_lifts(omega, lifts, tol)


def _hull_from_lifts(omega, lifts, tol=1e-9):
    y = omega.to_chart_lifts(lifts)
    center = y.mean(axis=0)
    centered = y - center
    scale = max(np.max(np.linalg.norm(centered, axis=1)), 1.0)
    if len(y) > 1:
        _, s, vt = np.linalg.svd(centered, full_matrices=False)
        k = int(np.sum(s > tol * scale))
    else:
        k, vt = 0, None
    if k == 0:
        return ConvexSubset(omega, _frozen(lifts[:1]), 0, _frozen(np.zeros((0, omega.dim))))
    proj = centered @ vt[:k].T
    if k == 1:
        idx = sorted({int(np.argmin(proj[:, 0])), int(np.argmax(proj[:, 0]))})
        gens = lifts[idx]
        return ConvexSubset(omega, _frozen(gens), 1, _frozen(gens))
    hull = ConvexHull(proj)
    idx = sorted(hull.vertices.tolist())
    witnesses = np.array([lifts[s].mean(axis=0) for s in hull.simplices])
    return ConvexSubset(omega, _frozen(lifts[idx]), k, _frozen(witnesses))


def hull_membership(generators, z):
    """LP feasibility of z as a convex combination of chart lifts."""
    g = np.atleast_2d(generators)
    m = len(g)
    a_eq = np.vstack([g.T, np.ones((1, m))])
    b_eq = np.concatenate([z, [1.0]])
    res = linprog(np.zeros(m), A_eq=a_eq, b_eq=b_eq, bounds=[(0, None)] * m,
                  method="highs", options=_LP_OPTIONS)
    return res.status == 0


def properly_embedded(omega, subset):
    """Whether the relatively open hull is properly embedded in the domain.

    The ideal boundary of the relatively open hull is its relative boundary;
    it lies in the boundary of the domain iff every generator and one point
    in every relative facet do.
    """
    if not omega.is_interior(subset.barycenter()):
        return False
    if subset.span_dim == 0:
        return True
    witnesses = np.vstack([subset.generators, subset.facet_witnesses])
    return all(omega.contains(ProjectivePoint(w)).kind == "boundary" for w in witnesses)


def hull_meets_interior(omega, lifts, margin=1e-9):
    """Whether the convex hull of the chart lifts meets the open domain.

    Returns (meets, depth, point): the best achievable interior margin and a
    chart lift attaining it.
    """
    g = np.atleast_2d(lifts)
    m = len(g)
    unit_scale = np.linalg.norm(g, axis=1).max()
    if omega.kind == "polytope":
        fv = g @ omega.facets.T / unit_scale  # (m, K)
        k = fv.shape[1]
        # maximize t: sum_i lam_i fv[i, k] >= t, sum lam = 1, lam >= 0
        c = np.zeros(m + 1)
        c[-1] = -1.0
        a_ub = np.hstack([-fv.T, np.ones((k, 1))])
        res = linprog(c, A_ub=a_ub, b_ub=np.zeros(k),
                      A_eq=np.hstack([np.ones((1, m)), np.zeros((1, 1))]), b_eq=[1.0],
                      bounds=[(0, None)] * m + [(None, None)], method="highs",
                      options=_LP_OPTIONS)
        if res.status != 0:
            return False, -np.inf, None
        lam = res.x[:m]
        point = lam @ g
        depth = float(omega.margins(point)[0])
        return -res.fun > margin and depth > margin, depth, point
    best = None
    for lam in _quadric_hull_minimizer(omega, g):
        point = lam @ g
        depth = float(omega.margins(point)[0])
        if best is None or depth > best[0]:
            best = (depth, point)
    return best[0] > margin, best[0], best[1]


def _quadric_hull_minimizer(omega, g):
    from scipy.optimize import nnls

    b, q = omega.chart_basis, omega.quadric
    c = omega.center_lift()
    a = b.T @ q @ b
    w, v = np.linalg.eigh(a)
    root = (v * np.sqrt(w)) @ v.T
    y = omega.to_chart_lifts(g)
    yc = omega.to_chart_lifts(c)[0]
    heavy = 1e4
    mat = np.vstack([root @ y.T, heavy * np.ones((1, len(g)))])
    rhs = np.concatenate([root @ yc, [heavy]])
    lam, _ = nnls(mat, rhs)
    lam = lam / lam.sum()
    return [lam]


def vertex_enumeration(omega, basis, tol=1e-9):
    """Vertices of the slice P(span(basis)) meeting the closed polytope.

    Brute force over active facet sets; returns chart lifts.
    """
    if omega.kind != "polytope":
        raise NotPolytope("vertex enumeration needs a polytope")
    b = np.atleast_2d(basis)
    m = b.shape[1]
    fb = omega.facets @ b  # (K, m)
    lb = omega.chart @ b
    found = []
    if m == 1:
        v = b[:, 0]
        for cand in (v, -v):
            if cand @ omega.chart > 1e-12 and np.all(omega.facets @ cand >= -tol * np.linalg.norm(cand)):
                found.append(cand / (cand @ omega.chart))
        return np.array(found).reshape(-1, omega.dim)
    for rows in combinations(range(len(fb)), m - 1):
        a = np.vstack([fb[list(rows)], lb])
        if abs(np.linalg.det(a)) < 1e-12:
            continue
        rhs = np.zeros(m)
        rhs[-1] = 1.0
        c = np.linalg.solve(a, rhs)
        z = b @ c
        if np.all(omega.facets @ z >= -tol * np.linalg.norm(z)):
            if not any(np.linalg.norm(z - f) < 1e-8 for f in found):
                found.append(z)
    return np.array(found).reshape(-1, omega.dim)


def hull_residual(generators, z):
    """Least-squares distance from z to the convex hull of the chart lifts.

    Non-negative least squares with a heavily weighted sum-to-one row; this
    is independent of the LP used by ``hull_membership``.
    """
    from scipy.optimize import nnls

    g = np.atleast_2d(generators)
    heavy = 1e6
    mat = np.vstack([g.T, heavy * np.ones((1, len(g)))])
    rhs = np.concatenate([np.asarray(z, dtype=float), [heavy]])
    lam, _ = nnls(mat, rhs)
    return float(np.linalg.norm(lam @ g - z))


def chord_endpoints(omega, x, y):
    """Boundary points a, b of the chord through x, y, ordered a, x, y, b."""
    from .errors import CoincidentPoints, NotInterior

    if x.isclose(y, 1e-12):
        raise CoincidentPoints("chord through coincident points")
    for name, p in (("x", x), ("y", y)):
        if not omega.is_interior(p):
            raise NotInterior(f"{name} is not an interior point")
    zx, zy = omega.lift(x), omega.lift(y)
    ta, tb = omega.chord_params(zx, zy)
    a = zx + ta[0] * (zy - zx)
    b = zx + tb[0] * (zy - zx)
    return ProjectivePoint(a), ProjectivePoint(b)
