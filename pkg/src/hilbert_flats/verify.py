"""Property suite run by the ``verify`` command.

Each check returns a PropertyResult holding the worst observed slack
(``value``) against its bound (``limit``).  Checks that do not apply to the
scene (for instance face checks on an ellipsoid) are skipped, not failed.
"""

from dataclasses import dataclass

import numpy as np

from .action import displacements, hull_inflation_check, translation_length
from .domain import ConvexSubset, _hull_from_lifts
from .errors import HilbertFlatsError
from .flat import common_fixed_points, minimal_simplex_search
from .metric import (MetricConfig, _ray_lifts, distance_to_subset, distances,
                     hausdorff_distance, hilbert_distance)
from .projective import ProjectiveMap, ProjectivePoint
from .randoms import random_interior, random_projective
from .simplex import dist_rd, phi_coordinates, simplex_distance


@dataclass(frozen=True)
class PropertyResult:
    name: str
    passed: bool
    value: float
    limit: float
    samples: int
    skipped: bool = False
    note: str = ""


def _result(name, value, limit, samples, note=""):
    return PropertyResult(name, bool(value <= limit), float(value), float(limit), samples, False, note)


def _skip(name, note):
    return PropertyResult(name, True, 0.0, 0.0, 0, True, note)


# --------------------------------------------------------------- properties
def check_metric_axioms(omega, rng, n=1000, tol=1e-9):
    """Symmetry, triangle inequality and H(x, x) = 0 on random triples."""
    x, y, z = (random_interior(omega, n, rng) for _ in range(3))
    dxy, dyx = distances(omega, x, y), distances(omega, y, x)
    dyz, dxz = distances(omega, y, z), distances(omega, x, z)
    sym = np.max(np.abs(dxy - dyx))
    tri = np.max(dxz - dxy - dyz)
    ident = np.max(distances(omega, x, x))
    worst = max(sym, tri, ident)
    return _result("metric-axioms", worst, tol, n, f"symmetry {sym:.2e}, triangle {tri:.2e}")


def check_route_agreement(omega, rng, n=200, tol=1e-8):
    """Chord-endpoint cross ratio route against the vectorized closed form."""
    x, y = random_interior(omega, n, rng), random_interior(omega, n, rng)
    fast = distances(omega, x, y)
    slow = np.array([hilbert_distance(omega, ProjectivePoint(a), ProjectivePoint(b))
                     for a, b in zip(x, y)])
    return _result("route-agreement", np.max(np.abs(fast - slow)), tol, n)


def check_projective_invariance(omega, rng, n=1000, tol=1e-9, group=None):
    """H_{g Omega}(gx, gy) = H_Omega(x, y) for a random g, and automorphism invariance."""
    x, y = random_interior(omega, n, rng), random_interior(omega, n, rng)
    base = distances(omega, x, y)
    g = ProjectiveMap(random_projective(omega.dim, rng))
    image = omega.transformed(g)
    gx, gy = x @ g.matrix.T, y @ g.matrix.T
    worst = np.max(np.abs(distances(image, gx / (gx @ image.chart)[:, None],
                                    gy / (gy @ image.chart)[:, None]) - base))
    if group is not None:
        for a in group.generators:
            ax, ay = x @ a.matrix.T, y @ a.matrix.T
            ax /= (ax @ omega.chart)[:, None]
            ay /= (ay @ omega.chart)[:, None]
            worst = max(worst, np.max(np.abs(distances(omega, ax, ay) - base)))
    return _result("projective-invariance", worst, tol, n)


def check_chord_geodesics(omega, rng, pairs=1000, times=20, tol=1e-9):
    """H(s1(t), s2(t)) <= H(s1(0), s2(0)) + H(s1(T), s2(T)) for unit speed chords."""
    x1, y1 = random_interior(omega, pairs, rng), random_interior(omega, pairs, rng)
    x2, y2 = random_interior(omega, pairs, rng), random_interior(omega, pairs, rng)
    big_t = np.minimum(distances(omega, x1, y1), distances(omega, x2, y2))
    ts = rng.random((times, pairs)) * big_t
    end1 = _ray_lifts(omega, x1, y1, big_t)
    end2 = _ray_lifts(omega, x2, y2, big_t)
    bound = distances(omega, x1, x2) + distances(omega, end1, end2)
    worst = -np.inf
    for t in ts:
        s1 = _ray_lifts(omega, x1, y1, t)
        s2 = _ray_lifts(omega, x2, y2, t)
        worst = max(worst, float(np.max(distances(omega, s1, s2) - bound)))
    return _result("chord-geodesic-estimate", worst, tol, pairs * times)


def _random_subset(omega, rng, max_points=4):
    k = int(rng.integers(1, max_points + 1))
    pts = random_interior(omega, k, rng)
    return _hull_from_lifts(omega, pts)


def check_neighborhood_convexity(omega, rng, configs=5, probes=200, cfg=None):
    """Midpoints of pairs in N_r(D) stay in N_r(D) (resolution-aware).

    The allowed slack is the largest disagreement between the default
    distance-to-subset route and the exact or sampled alternative on the
    probe points, so a genuine violation cannot hide below it.
    """
    cfg = cfg or MetricConfig()
    worst = -np.inf
    slack = 0.0
    count = 0
    for _ in range(configs):
        d = _random_subset(omega, rng)
        pts = random_interior(omega, 2 * probes, rng)
        dist = distance_to_subset(omega, d, pts, cfg)
        r = float(np.quantile(dist, 0.5)) + 1e-3
        inside = pts[dist < r]
        if len(inside) < 2:
            continue
        idx = rng.integers(0, len(inside), size=(probes, 2))
        mids = 0.5 * (inside[idx[:, 0]] + inside[idx[:, 1]])
        dm = distance_to_subset(omega, d, mids, cfg)
        if omega.kind == "polytope":
            alt = distance_to_subset(omega, d, mids[:20], cfg, method="sampled")
            # the sampled route is an upper estimate of the exact one
            slack = max(slack, float(np.max(dm[:20] - alt)), 0.0)
        worst = max(worst, float(np.max(dm - r)))
        count += probes
    return _result("neighborhood-convexity", worst, slack + 1e-9, count)


def _face_distance(omega, active, p, q):
    """Hilbert distance inside the open polytope face cut out by ``active`` facets."""
    if p.isclose(q, 1e-12):
        return 0.0
    zp, zq = omega.lift(p), omega.lift(q)
    keep = [k for k in range(len(omega.facets)) if k not in set(active)]
    fp, fq = omega.facets[keep] @ zp, omega.facets[keep] @ zq
    return 0.5 * float(np.log(np.max(fp / fq)) + np.log(np.max(fq / fp)))


def check_chord_hausdorff(omega, rng, trials=10, cfg=None):
    """Hausdorff distance of chords with endpoints in shared faces is at most the face distance."""
    if omega.kind != "polytope":
        return _skip("chord-hausdorff", "needs a polytope")
    cfg = cfg or MetricConfig(hausdorff_samples=32)
    verts = omega.vertices
    fv = omega.facet_values(verts)
    worst = -np.inf
    done = 0
    for _ in range(trials):
        i, j = rng.choice(len(omega.facets), size=2, replace=False)
        vi = np.flatnonzero(np.abs(fv[:, i]) <= 1e-9)
        vj = np.flatnonzero(np.abs(fv[:, j]) <= 1e-9)
        p1, p2 = (rng.dirichlet(np.ones(len(vi))) @ verts[vi] for _ in range(2))
        q1, q2 = (rng.dirichlet(np.ones(len(vj))) @ verts[vj] for _ in range(2))
        mid = 0.5 * (p1 + q1)
        if omega.margins(mid)[0] <= 1e-9:
            continue
        a = ConvexSubset(omega, np.array([p1, q1]), 1, np.array([p1, q1]))
        b = ConvexSubset(omega, np.array([p2, q2]), 1, np.array([p2, q2]))
        est = hausdorff_distance(omega, a, b, cfg)
        act_p = omega.contains(ProjectivePoint(p1)).active
        act_q = omega.contains(ProjectivePoint(q1)).active
        bound = max(_face_distance(omega, act_p, ProjectivePoint(p1), ProjectivePoint(p2)),
                    _face_distance(omega, act_q, ProjectivePoint(q1), ProjectivePoint(q2)))
        # sampled sup over the chord never exceeds the true Hausdorff distance
        worst = max(worst, est.value - bound)
        done += 1
    if not done:
        return _skip("chord-hausdorff", "no facet pair gave an interior chord")
    return _result("chord-hausdorff", worst, 1e-9, done)


def check_translation_bound(group, rng, n=1000, tol=1e-9):
    """Displacement never drops below the eigenvalue translation length."""
    omega = group.ambient
    x = random_interior(omega, n, rng)
    worst = -np.inf
    for g in group.generators:
        worst = max(worst, float(np.max(translation_length(g) - displacements(omega, g, x))))
    return _result("translation-lower-bound", worst, tol, n * len(group.generators))


def check_hull_inflation(group, cfg=None):
    if not group.commuting or not group.generators:
        return _skip("hull-inflation", "needs a commuting family")
    cfg = cfg or MetricConfig(grid_samples=2000)
    r = 1.2 * max(translation_length(g) for g in group.generators) + 0.2
    rep = hull_inflation_check(group, r, cfg)
    return _result("hull-inflation", rep.worst_displacement - rep.factor * r, 1e-6,
                   rep.hull_samples, f"worst ratio {rep.worst_ratio:.4f} vs {rep.factor:g}")


def check_simplex_in_min(group, cfg=None, samples=200):
    """A properly embedded simplex with fixed vertices lies in every Min(a)."""
    if not group.commuting or not group.generators:
        return _skip("simplex-in-min", "needs a commuting family")
    cfg = cfg or MetricConfig()
    try:
        fixed = common_fixed_points(group, seed=cfg.rng_seed)
        simplex = minimal_simplex_search(group, fixed)
    except HilbertFlatsError as exc:
        return _skip("simplex-in-min", f"no invariant simplex: {exc}")
    omega = group.ambient
    pts = omega.lifts(simplex.sample(samples, seed=cfg.rng_seed)) if simplex.dim else \
        omega.lifts(simplex.vertices)
    worst = max(float(np.max(displacements(omega, g, pts) - translation_length(g)))
                for g in group.generators)
    return _result("simplex-in-min", worst, cfg.min_tolerance, len(pts))


def check_phi_isometry(k, rng, n=1000, tol=1e-10):
    """simplex_distance(x, y) = dist_rd(Phi x, Phi y)."""
    worst = 0.0
    for _ in range(n):
        x = np.exp(rng.normal(size=k + 1))
        y = np.exp(rng.normal(size=k + 1))
        worst = max(worst, abs(simplex_distance(x, y) - dist_rd(phi_coordinates(x), phi_coordinates(y))))
    return _result("phi-isometry", worst, tol, n)


# ------------------------------------------------------------------- suite
def run_suite(omega, group=None, seed=0, sizes=None, cfg=None):
    """All applicable properties for one scene, in a fixed order."""
    sizes = {"triples": 1000, "geodesics": 1000, "times": 20, "nbhd_configs": 5,
             "nbhd_probes": 200, "chords": 10, "route": 200, **(sizes or {})}
    rng = np.random.default_rng(seed)
    out = [
        check_metric_axioms(omega, rng, sizes["triples"]),
        check_route_agreement(omega, rng, sizes["route"]),
        check_projective_invariance(omega, rng, sizes["triples"], group=group),
        check_chord_geodesics(omega, rng, sizes["geodesics"], sizes["times"]),
        check_neighborhood_convexity(omega, rng, sizes["nbhd_configs"], sizes["nbhd_probes"], cfg),
        check_chord_hausdorff(omega, rng, sizes["chords"]),
        check_phi_isometry(max(omega.dim - 1, 1), rng, sizes["triples"]),
    ]
    if group is not None and group.generators:
        out.append(check_translation_bound(group, rng, sizes["triples"]))
        out.append(check_hull_inflation(group))
        out.append(check_simplex_in_min(group, cfg))
    return out


__all__ = ["PropertyResult", "run_suite"] + [n for n in dir() if n.startswith("check_")]
