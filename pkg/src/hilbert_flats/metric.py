"""Hilbert distance, geodesics, distances to convex subsets, center of mass."""

import logging
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np
from scipy import sparse
from scipy.optimize import linprog, minimize

from .domain import (_LP_OPTIONS, BOUNDARY_TOL, ConvexSubset, _hull_from_lifts,
                     chord_endpoints, convex_hull)
from .errors import (EmptySubset, NotConverged, NotInterior, NotPolytope,
                     ValidationError)
from .projective import ProjectivePoint, cross_ratio

log = logging.getLogger(__name__)

_GOLDEN = (np.sqrt(5.0) - 1.0) / 2.0


@dataclass(frozen=True)
class MetricConfig:
    """Tolerances and sample sizes shared by the sampled operations."""

    boundary_tolerance: float = BOUNDARY_TOL
    hausdorff_samples: int = 64
    com_samples: int = 16
    com_radius_tolerance: float = 1e-7
    rng_seed: int = 0
    grid_samples: int = 10_000
    min_tolerance: float = 1e-6
    refine_points: int = 16
    set_samples: int = 64

    def __post_init__(self):
        for name in ("boundary_tolerance", "com_radius_tolerance", "min_tolerance"):
            if not getattr(self, name) > 0:
                raise ValidationError(f"config.{name} must be positive")
        for name in ("hausdorff_samples", "com_samples", "grid_samples", "set_samples"):
            if getattr(self, name) < 2:
                raise ValidationError(f"config.{name} must be at least 2")
        if self.refine_points < 0:
            raise ValidationError("config.refine_points must be non-negative")


# ------------------------------------------------------------------ distances
def hilbert_distance(omega, x, y):
    """Hilbert distance (1/2) log [a, x, y, b] between interior points."""
    for name, p in (("x", x), ("y", y)):
        if not omega.is_interior(p):
            raise NotInterior(f"{name} is not an interior point")
    if x.isclose(y, 1e-14):
        return 0.0
    a, b = chord_endpoints(omega, x, y)
    return 0.5 * float(np.log(cross_ratio(a, x, y, b)))


def distances(omega, x, y):
    """Vectorized Hilbert distances between rows of chart lifts.

    Points outside the open domain give inf.  Polytopes use the facet form
    of the chord cross ratio, (1/2) log(max_k fx/fy * max_k fy/fx).
    """
    x = np.atleast_2d(x)
    y = np.atleast_2d(y)
    x, y = np.broadcast_arrays(x, y)
    if omega.kind == "polytope":
        fx = x @ omega.facets.T
        fy = y @ omega.facets.T
        with np.errstate(divide="ignore", invalid="ignore"):
            out = 0.5 * (np.log(np.max(fx / fy, axis=1)) + np.log(np.max(fy / fx, axis=1)))
        bad = (np.min(fx, axis=1) <= 0) | (np.min(fy, axis=1) <= 0)
    else:
        ta, tb = omega.chord_params(x, y)
        with np.errstate(divide="ignore", invalid="ignore"):
            out = 0.5 * (np.log1p(1.0 / (tb - 1.0)) + np.log1p(-1.0 / ta))
        bad = (omega.margins(x) <= 0) | (omega.margins(y) <= 0)
        same = np.linalg.norm(x - y, axis=1) <= 1e-15 * np.linalg.norm(x, axis=1)
        out = np.where(same, 0.0, out)
    out = np.where(bad, np.inf, out)
    return np.where(np.isnan(out), np.inf, np.maximum(out, 0.0))


def pairwise_distances(omega, x, y):
    """Matrix of distances between rows of x (n, d) and rows of y (m, d)."""
    x = np.atleast_2d(x)
    y = np.atleast_2d(y)
    if omega.kind == "polytope":
        fx = x @ omega.facets.T
        fy = y @ omega.facets.T
        with np.errstate(divide="ignore", invalid="ignore"):
            r = fx[:, None, :] / fy[None, :, :]
            out = 0.5 * (np.log(np.max(r, axis=2)) + np.log(np.max(1.0 / r, axis=2)))
        bad = (np.min(fx, axis=1) <= 0)[:, None] | (np.min(fy, axis=1) <= 0)[None, :]
        out = np.where(bad, np.inf, out)
        return np.where(np.isnan(out), np.inf, np.maximum(out, 0.0))
    n, m = len(x), len(y)
    xx = np.repeat(x, m, axis=0)
    yy = np.tile(y, (n, 1))
    return distances(omega, xx, yy).reshape(n, m)


def near_boundary(omega, x, y, tol=BOUNDARY_TOL):
    """True when a chord endpoint is within ``tol`` of x or y (ill-conditioned distance)."""
    if x.isclose(y, 1e-12):
        return False
    a, b = chord_endpoints(omega, x, y)
    return a.distance(x) <= tol or b.distance(y) <= tol


def _ray_lifts(omega, zx, zy, dist):
    """Chart lifts at Hilbert distance ``dist`` from zx toward zy (rows)."""
    ta, tb = omega.chord_params(zx, zy)
    k = np.exp(2.0 * np.asarray(dist)) * (-ta) / tb
    s = np.where(np.isinf(k), tb, (k * tb + ta) / (1.0 + k))
    return zx + s[:, None] * (zy - zx)


def point_at_distance(omega, x, y, dist):
    """The point at Hilbert distance ``dist`` >= 0 from x on the ray toward y."""
    a, b = chord_endpoints(omega, x, y)  # validates x, y
    del a, b
    z = _ray_lifts(omega, omega.lift(x)[None, :], omega.lift(y)[None, :], dist)
    return ProjectivePoint(z[0])


def geodesic_point(omega, x, y, t):
    """Point p on [x, y] with H(x, p) = t H(x, y), t in [0, 1]."""
    if not 0.0 <= t <= 1.0:
        raise ValueError("t must lie in [0, 1]")
    if t == 0.0:
        return x
    if t == 1.0:
        return y
    return point_at_distance(omega, x, y, t * hilbert_distance(omega, x, y))


# ------------------------------------------------------- distances to subsets
def _golden_min(func, lo, hi, iterations=64):
    """Vectorized golden-section minimization of func(u) on [lo, hi] per row."""
    a, b = lo.copy(), hi.copy()
    c = b - _GOLDEN * (b - a)
    d = a + _GOLDEN * (b - a)
    fc, fd = func(c), func(d)
    for _ in range(iterations):
        left = fc <= fd
        b = np.where(left, d, b)
        a = np.where(left, a, c)
        d_new = np.where(left, c, a + _GOLDEN * (b - a))
        c_new = np.where(left, b - _GOLDEN * (b - a), d)
        fd_new = np.where(left, fc, np.nan)
        fc_new = np.where(left, np.nan, fd)
        c, d = c_new, d_new
        need_c = np.isnan(fc_new)
        need_d = np.isnan(fd_new)
        if need_c.any():
            fc_new = np.where(need_c, func(c), fc_new)
        if need_d.any():
            fd_new = np.where(need_d, func(d), fd_new)
        fc, fd = fc_new, fd_new
    u = 0.5 * (a + b)
    return u, func(u)


def distance_to_subset(omega, subset, lifts, cfg=None, rounds=25, return_points=False,
                       method="auto"):
    """Hilbert distance from each row of ``lifts`` to a convex subset.

    ``method="exact"`` (the default for polytopes) solves one linear program
    per point, see ``polytope_distance_to_subset``.  ``method="sampled"``
    (the default for ellipsoids) takes the sampled infimum over the generators and ``cfg.set_samples`` seeded
    points of the subset, followed by golden-section refinement along the
    segments from the current best point toward each generator, repeated
    until no segment improves the value.
    """
    cfg = cfg or MetricConfig()
    if method == "auto":
        method = "exact" if omega.kind == "polytope" else "sampled"
    if method == "exact":
        return polytope_distance_to_subset(omega, subset, lifts, return_points)
    if method != "sampled":
        raise ValueError(f"unknown method {method!r}")
    p = np.atleast_2d(lifts)
    gens = subset.generators
    cand = np.vstack([gens, subset.sample(cfg.set_samples, seed=cfg.rng_seed)])
    if len(gens) > 1:
        pairs = np.array([(gens[i] + gens[j]) / 2 for i in range(len(gens))
                          for j in range(i + 1, len(gens))])
        cand = np.vstack([cand, pairs])
    dm = pairwise_distances(omega, p, cand)
    best = np.argmin(dm, axis=1)
    val = dm[np.arange(len(p)), best]
    cur = cand[best].copy()
    targets = list(gens) if len(gens) > 1 else []
    for _ in range(rounds if targets else 0):
        gain = np.zeros(len(p))
        for g in targets:
            direction = g[None, :] - cur

            def f(u, cur=cur, direction=direction):
                return distances(omega, p, cur + u[:, None] * direction)

            u, fu = _golden_min(f, np.zeros(len(p)), np.ones(len(p)))
            better = fu < val
            gain = np.maximum(gain, np.where(better, val - fu, 0.0))
            cur = np.where(better[:, None], cur + u[:, None] * direction, cur)
            val = np.where(better, fu, val)
        if np.max(gain) < 1e-13:
            break
    if return_points:
        return val, cur
    return val


def neighborhood_contains(omega, subset, r, p, cfg=None):
    """Whether H(p, D) < r for the convex subset D."""
    z = omega.lift(p)
    if z is None:
        return False
    return bool(distance_to_subset(omega, subset, z[None, :], cfg)[0] < r)


class HausdorffEstimate(NamedTuple):
    value: float
    resolution: float


def hausdorff_distance(omega, a, b, cfg=None):
    """Sampled Hausdorff distance between two convex subsets.

    Each side is represented by ``cfg.hausdorff_samples`` interior points;
    the one-sided terms use ``distance_to_subset``.  ``resolution`` is the
    largest nearest-neighbour gap inside either sample.
    """
    cfg = cfg or MetricConfig()
    sa = _subset_points(omega, a, cfg.hausdorff_samples, cfg.rng_seed)
    sb = _subset_points(omega, b, cfg.hausdorff_samples, cfg.rng_seed + 1)
    if len(sa) == 0 or len(sb) == 0:
        raise EmptySubset("subset has no interior sample points")
    ab = np.max(distance_to_subset(omega, b, sa, cfg))
    ba = np.max(distance_to_subset(omega, a, sb, cfg))
    res = max(_mesh(omega, sa), _mesh(omega, sb))
    return HausdorffEstimate(float(max(ab, ba)), res)


def _subset_points(omega, subset, n, seed):
    if len(subset.generators) == 1:
        pts = subset.generators
        return pts[omega.margins(pts) > 0]
    if subset.span_dim == 1:
        # evenly spaced along the segment, boundary endpoints excluded
        g0, g1 = subset.generators[0], subset.generators[-1]
        t = (np.arange(n) + 0.5) / n
        pts = (1 - t)[:, None] * g0 + t[:, None] * g1
        return pts[omega.margins(pts) > 0]
    return subset.interior_sample(n, seed)


def _mesh(omega, pts):
    if len(pts) < 2:
        return 0.0
    dm = pairwise_distances(omega, pts, pts)
    np.fill_diagonal(dm, np.inf)
    return float(np.max(np.min(dm, axis=1)))


# ------------------------------------------------------------- center of mass
@dataclass(frozen=True)
class CenterOfMassTrace:
    point: ProjectivePoint
    radii: tuple
    iterations: int
    diameter: float


def center_of_mass(omega, points, cfg=None, return_trace=False):
    """Projective center of mass of a finite set K of interior points.

    Iterates C_0 = hull(K), C_{n+1} = C_n(r_n) where r_n is the least r
    such that some point of C_n is within r of every point of C_n.  For
    polytopes the ball constraints are linear in the lift, so r_n is found
    by bisection on LP feasibility and C_{n+1} is recovered from LP extreme
    points in ``cfg.com_samples`` seeded directions; the iteration stops
    when that set has Hilbert diameter below ``cfg.com_radius_tolerance``
    and returns its chart centroid.  Ellipsoids use a direct minimax solve
    for the first (already 0-dimensional) step.
    """
    cfg = cfg or MetricConfig()
    hull = convex_hull(omega, points)
    if np.any(omega.margins(hull.generators) <= 0):
        raise NotInterior("center of mass needs points of the open domain")
    if omega.kind == "polytope":
        trace = _com_polytope(omega, hull, cfg)
    else:
        trace = _com_quadric(omega, hull, cfg)
    return trace if return_trace else trace.point


def _ball_constraints(omega, verts, s):
    """Rows A with A @ p <= 0 encoding H(p, v) <= (1/2) log s for all v."""
    f = omega.facets
    fv = verts @ f.T  # (m, K)
    k = f.shape[0]
    rows = []
    mask = ~np.eye(k, dtype=bool)
    for row in fv:
        # f_i(p) f_j(v) - s f_i(v) f_j(p) <= 0 for all i != j
        block = f[:, None, :] * row[None, :, None] - s * row[:, None, None] * f[None, :, :]
        rows.append(block[mask])
    return np.vstack(rows)


def _feasible(omega, verts, s, objective=None):
    m, d = verts.shape
    a_ub = _ball_constraints(omega, verts, s) @ verts.T  # in terms of lambda
    scale = np.max(np.abs(a_ub), axis=1, keepdims=True)
    a_ub = a_ub / np.where(scale > 0, scale, 1.0)
    c = np.zeros(m) if objective is None else -(verts @ objective)
    res = linprog(c, A_ub=a_ub, b_ub=np.zeros(len(a_ub)), A_eq=np.ones((1, m)), b_eq=[1.0],
                  bounds=[(0, None)] * m, method="highs", options=_LP_OPTIONS)
    if res.status != 0:
        return None
    return res.x @ verts


def _com_polytope(omega, hull, cfg):
    verts = hull.generators
    rng = np.random.default_rng(cfg.rng_seed)
    radii = []
    d = omega.dim
    for it in range(d + 1):
        if len(verts) == 1:
            return CenterOfMassTrace(ProjectivePoint(verts[0]), tuple(radii), it, 0.0)
        ecc_bary = np.max(distances(omega, verts.mean(axis=0)[None, :], verts))
        lo, hi = 0.0, float(ecc_bary)
        for _ in range(200):
            if hi - lo <= 1e-14 * max(1.0, hi):
                break
            mid = 0.5 * (lo + hi)
            if _feasible(omega, verts, np.exp(2 * mid)) is None:
                lo = mid
            else:
                hi = mid
        radii.append(hi)
        s = np.exp(2 * hi)
        dirs = np.vstack([omega.chart_basis.T, -omega.chart_basis.T,
                          rng.standard_normal((cfg.com_samples, d))])
        found = []
        for direction in dirs:
            z = _feasible(omega, verts, s, objective=direction)
            if z is not None:
                found.append(z)
        if not found:
            raise NotConverged("center of mass: no feasible point at the minimal radius")
        found = np.array(found)
        diam = float(np.max(pairwise_distances(omega, found, found)))
        if diam < cfg.com_radius_tolerance:
            return CenterOfMassTrace(ProjectivePoint(found.mean(axis=0)), tuple(radii), it + 1, diam)
        verts = _hull_from_lifts(omega, _dedupe(found)).generators
    raise NotConverged(f"center of mass: dimension did not drop within {d} iterations")


def _dedupe(rows, tol=1e-10):
    kept = []
    for r in rows:
        if not any(np.max(np.abs(r - k)) <= tol for k in kept):
            kept.append(r)
    return np.array(kept)


def _com_quadric(omega, hull, cfg):
    verts = hull.generators
    m = len(verts)
    if m == 1:
        return CenterOfMassTrace(ProjectivePoint(verts[0]), (), 0, 0.0)

    def ecc(lam):
        z = lam @ verts
        return distances(omega, z[None, :], verts)

    x0 = np.append(np.full(m, 1.0 / m), np.max(ecc(np.full(m, 1.0 / m))))
    cons = [{"type": "eq", "fun": lambda x: np.sum(x[:m]) - 1.0},
            {"type": "ineq", "fun": lambda x: x[m] - ecc(x[:m])}]
    res = minimize(lambda x: x[m], x0, method="SLSQP", constraints=cons,
                   bounds=[(0, 1)] * m + [(0, None)],
                   options={"ftol": 1e-15, "maxiter": 500})
    lam = np.clip(res.x[:m], 0, None)
    lam /= lam.sum()
    radius = float(np.max(ecc(lam)))
    return CenterOfMassTrace(ProjectivePoint(lam @ verts), (radius,), 1, 0.0)


def polytope_distance_to_subset(omega, subset, lifts, return_points=False, chunk=200):
    """Exact Hilbert distance from points to a convex subset of a polytope.

    Normalizing c in the cone over the subset by f_k(c) <= f_k(p), the
    distance is -(1/2) log of the largest s with s f_k(p) <= f_k(c) for
    every facet k: one linear program per point, solved in sparse batches.
    """
    if omega.kind != "polytope":
        raise NotPolytope("exact subset distance needs a polytope")
    gens = subset.generators
    fg = (gens @ omega.facets.T).T  # (K, m)
    k, m = fg.shape
    pts = np.atleast_2d(lifts)
    out = np.empty(len(pts))
    nearest = np.empty_like(pts)
    # independent programs are stacked block-diagonally; maximizing the sum
    # of the s variables maximizes each block
    for lo in range(0, len(pts), chunk):
        block = pts[lo:lo + chunk]
        n = len(block)
        fp = block @ omega.facets.T  # (n, K)
        scale = fp.max(axis=1)
        a_up = sparse.hstack([sparse.kron(sparse.diags(1.0 / scale), sparse.csr_matrix(fg)),
                              sparse.csr_matrix((n * k, n))])
        a_lo = sparse.hstack([sparse.kron(sparse.diags(-1.0 / scale), sparse.csr_matrix(fg)),
                              sparse.diags((fp / scale[:, None]).ravel()) @
                              sparse.kron(sparse.eye(n), np.ones((k, 1)))])
        a_ub = sparse.vstack([a_up, a_lo]).tocsr()
        b_ub = np.concatenate([(fp / scale[:, None]).ravel(), np.zeros(n * k)])
        c = np.concatenate([np.zeros(n * m), -np.ones(n)])
        res = linprog(c, A_ub=a_ub, b_ub=b_ub, bounds=[(0, None)] * (n * m + n),
                      method="highs", options=_LP_OPTIONS)
        if res.status != 0:
            raise NotConverged(f"subset distance program failed: {res.message}")
        svals = np.clip(res.x[n * m:], 0.0, 1.0)
        with np.errstate(divide="ignore"):
            out[lo:lo + n] = np.where(svals > 0, -0.5 * np.log(svals), np.inf)
        c_pts = res.x[:n * m].reshape(n, m) @ gens
        nearest[lo:lo + n] = c_pts / (c_pts @ omega.chart)[:, None]
    if return_points:
        return out, nearest
    return out


__all__ = [
    "MetricConfig", "hilbert_distance", "distances", "pairwise_distances",
    "near_boundary", "point_at_distance", "geodesic_point", "distance_to_subset",
    "neighborhood_contains", "hausdorff_distance", "HausdorffEstimate",
    "center_of_mass", "CenterOfMassTrace", "ConvexSubset",
    "polytope_distance_to_subset",
]
