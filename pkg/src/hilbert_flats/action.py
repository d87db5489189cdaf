"""Automorphism groups of convex domains: translation lengths, displacement,
Min-sets, M_r sets, orbits and the worked example constructions."""

import logging
from collections import deque
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import linprog, minimize

from .domain import (_LP_OPTIONS, ConvexDomain, ConvexSubset, _hull_from_lifts,
                     convex_hull, hull_membership, open_face)
from .errors import (NonBoundaryLimit, NotConverged, NotPolytope, OrbitBlowup,
                     ValidationError)
from .metric import MetricConfig, distances, hilbert_distance
from .projective import (ProjectiveMap, ProjectivePoint, power_sequence,
                         projective_limit)

log = logging.getLogger(__name__)

COMMUTE_TOL = 1e-10
AUT_TOL = 1e-8
# refinement stays this far inside: distances degenerate at the boundary
REFINE_MARGIN = 1e-6


# ---------------------------------------------------------------- group data
@dataclass(frozen=True)
class GroupSpec:
    """Finitely generated group of automorphisms of ``ambient``.

    ``invariant_subset`` is the closed convex set C of a naive convex
    co-compact triple (ambient, C, group); None stands for the whole domain.
    """

    generators: tuple
    labels: tuple
    ambient: ConvexDomain = field(repr=False)
    commuting: bool = False
    invariant_subset: ConvexSubset = field(default=None, repr=False)

    @property
    def dim(self):
        return self.ambient.dim

    def matrices(self):
        return [g.matrix for g in self.generators]


def build_group(generators, ambient, labels=None, invariant_subset=None,
                commuting=None, check=True):
    """Validate generators and assemble a GroupSpec.

    Raises ValidationError if a generator is not an automorphism of the
    domain, or if ``commuting`` is claimed but some commutator is not scalar.
    """
    gens = tuple(g if isinstance(g, ProjectiveMap) else ProjectiveMap(g) for g in generators)
    if labels is None:
        labels = tuple(f"a{i + 1}" for i in range(len(gens)))
    labels = tuple(labels)
    if len(labels) != len(gens):
        raise ValidationError("one label per generator is required")
    for lab, g in zip(labels, gens):
        if g.dim != ambient.dim:
            raise ValidationError(f"generator {lab} acts on R^{g.dim}, domain is in P(R^{ambient.dim})")
        if check and not is_automorphism(ambient, g):
            raise ValidationError(f"generator {lab} does not preserve the domain")
    worst = max((gens[i].commutator_residual(gens[j]) for i in range(len(gens))
                 for j in range(i + 1, len(gens))), default=0.0)
    actual = worst <= COMMUTE_TOL
    if commuting and not actual:
        raise ValidationError(
            f"generators labeled commuting but commutator residual is {worst:.3e}")
    return GroupSpec(gens, labels, ambient, actual, invariant_subset)


def is_automorphism(omega, g, tol=AUT_TOL):
    """Structural test of g(Omega) = Omega (vertex permutation or quadric match)."""
    m = g.matrix
    if omega.kind == "polytope":
        images = omega.lifts(omega.vertices @ m.T)
        if np.any(np.isnan(images)):
            return False
        verts = omega.vertices
        used = set()
        for z in images:
            dist = np.linalg.norm(verts - z, axis=1) / np.linalg.norm(z)
            j = int(np.argmin(dist))
            if dist[j] > tol or j in used:
                return False
            used.add(j)
        centre = omega.lifts([m @ omega.center_lift()])
        return bool(omega.margins(centre)[0] > 0)
    minv = np.linalg.inv(m)
    q = omega.quadric
    q2 = minv.T @ q @ minv
    c = np.sum(q2 * q) / np.sum(q * q)
    return bool(c > 0 and np.max(np.abs(q2 - c * q)) <= tol * np.max(np.abs(q2)))


def translation_length(g):
    """(1/2) log(lambda_1 / lambda_d) from the eigenvalue moduli."""
    lam = g.spectrum
    return 0.5 * float(np.log(lam[0] / lam[-1]))


def displacement(omega, g, x):
    return hilbert_distance(omega, x, g(x))


def displacements(omega, g, lifts):
    """Vectorized H(x, g x) for rows of chart lifts."""
    lifts = np.atleast_2d(lifts)
    images = lifts @ g.matrix.T
    return distances(omega, lifts, images / (images @ omega.chart)[:, None])


# ----------------------------------------------------------------- sampling
def _base_sample(omega, subset, cfg):
    if subset is None:
        return omega.sample_interior(cfg.grid_samples, seed=cfg.rng_seed)
    return subset.interior_sample(cfg.grid_samples, seed=cfg.rng_seed)


def _refine(omega, subset, objective, starts):
    """Local Nelder-Mead refinement of an objective on chart lifts.

    Over the whole domain the search runs in chart coordinates; inside a
    subset it runs over softmax weights of the subset's generators.
    """
    out = []
    if subset is None:
        def to_lift(y):
            return omega.from_chart(y)[0]
        x0s = [omega.to_chart_lifts(s)[0] for s in starts]
    else:
        gens = subset.generators

        def to_lift(w):
            e = np.exp(w - np.max(w))
            return (e / e.sum()) @ gens
        x0s = []
        for s in starts:
            lam, *_ = np.linalg.lstsq(np.vstack([gens.T, np.ones(len(gens))]),
                                      np.append(s, 1.0), rcond=None)
            x0s.append(np.log(np.clip(lam, 1e-6, None)))

    def f(y):
        z = to_lift(y)
        if omega.margins(z)[0] <= REFINE_MARGIN:
            return np.inf
        return float(objective(z[None, :])[0])

    for x0 in x0s:
        res = minimize(f, x0, method="Nelder-Mead",
                       options={"xatol": 1e-12, "fatol": 1e-14, "maxiter": 4000})
        out.append(to_lift(res.x))
    return np.array(out).reshape(-1, omega.dim)


def min_set_sample(omega, g, cfg=None, subset=None):
    """Sampled points x with H(x, g x) <= tau(g) + cfg.min_tolerance.

    Grid points passing the threshold are returned first, followed by the
    passing results of local refinement from the ``cfg.refine_points`` best
    grid points.  An empty result is logged, not raised.
    """
    cfg = cfg or MetricConfig()
    tau = translation_length(g)
    pts = _base_sample(omega, subset, cfg)
    disp = displacements(omega, g, pts)
    keep = pts[disp <= tau + cfg.min_tolerance]
    order = np.argsort(disp, kind="stable")[: cfg.refine_points]
    refined = _refine(omega, subset, lambda z: displacements(omega, g, z), pts[order])
    if len(refined):
        refined = refined[displacements(omega, g, refined) <= tau + cfg.min_tolerance]
    out = np.vstack([keep, refined]) if len(refined) else keep
    if len(out) == 0:
        log.warning("min_set_sample: no sample within %.1e of tau at %d grid points",
                    cfg.min_tolerance, cfg.grid_samples)
    return [ProjectivePoint(z) for z in out]


def min_displacement(omega, g, cfg=None, subset=None):
    """(grid minimum, refined minimum) of the displacement function."""
    cfg = cfg or MetricConfig()
    pts = _base_sample(omega, subset, cfg)
    disp = displacements(omega, g, pts)
    order = np.argsort(disp, kind="stable")[: max(cfg.refine_points, 1)]
    refined = _refine(omega, subset, lambda z: displacements(omega, g, z), pts[order])
    return float(np.min(disp)), float(min(np.min(disp), np.min(displacements(omega, g, refined))))


def _m_r_lifts(triple, r, cfg):
    pts = _base_sample(triple.ambient, triple.invariant_subset, cfg)
    if not triple.generators:
        return pts
    disp = np.column_stack([displacements(triple.ambient, g, pts) for g in triple.generators])
    return pts[np.all(disp <= r, axis=1)]


def m_r_sample(triple, r, cfg=None):
    """Sampled points of C moved at most r by every generator."""
    cfg = cfg or MetricConfig()
    if r <= 0:
        raise ValueError("r must be positive")
    return [ProjectivePoint(z) for z in _m_r_lifts(triple, r, cfg)]


@dataclass(frozen=True)
class HullInflationReport:
    passed: bool
    r: float
    factor: float
    worst_displacement: float
    worst_ratio: float
    m_r_size: int
    hull_samples: int

    def as_dict(self):
        return dict(self.__dict__)


def hull_inflation_check(triple, r, cfg=None, tol=1e-6, hull_samples=2000):
    """Check that hull(M_r) lies in M_{2^(d-1) r} on a resampled hull.

    ``worst_ratio`` is the largest generator displacement on the hull sample
    divided by r.
    """
    cfg = cfg or MetricConfig()
    omega = triple.ambient
    factor = 2.0 ** (omega.dim - 1)
    m_r = _m_r_lifts(triple, r, cfg)
    if len(m_r) == 0:
        return HullInflationReport(True, r, factor, 0.0, 0.0, 0, 0)
    hull = _hull_from_lifts(omega, m_r)
    gens = hull.generators
    rng = np.random.default_rng(cfg.rng_seed)
    rows = [gens]
    m = len(gens)
    for _ in range(hull_samples):
        size = int(rng.integers(2, min(omega.dim, m) + 1)) if m > 1 else 1
        idx = rng.choice(m, size=size, replace=False)
        w = rng.dirichlet(np.ones(size))
        rows.append((w @ gens[idx])[None, :])
    pts = np.vstack(rows)
    pts = pts[omega.margins(pts) > 0]
    worst = 0.0
    for g in triple.generators:
        worst = max(worst, float(np.max(displacements(omega, g, pts))))
    return HullInflationReport(bool(worst <= factor * r + tol), r, factor, worst,
                               worst / r, len(m_r), len(pts))


# -------------------------------------------------------------------- orbits
@dataclass(frozen=True)
class OrbitSample:
    base_point: ProjectivePoint
    word_radius: int
    points: list = field(repr=False)
    boundary_accumulation: list = field(repr=False)


def orbit(triple, p, word_radius, eps_acc=1e-3, quantum=1e-9):
    """All images of p under words of length <= word_radius.

    Breadth-first search on points in the Schreier graph of the generators
    and their inverses, deduplicated by quantized canonical representative.
    ``boundary_accumulation`` holds images whose interior margin is below
    ``eps_acc``.
    """
    omega = triple.ambient
    if not omega.is_interior(p):
        raise ValidationError("orbit base point must be interior")
    moves = []
    for g in triple.generators:
        moves.append(g.matrix)
        moves.append(g.inverse().matrix)
    seen = {p.key(quantum)}
    points = [p]
    frontier = deque([(p, 0)])
    while frontier:
        q, depth = frontier.popleft()
        if depth == word_radius:
            continue
        for m in moves:
            v = m @ q.coords
            if not np.all(np.isfinite(v)):
                raise OrbitBlowup("orbit point overflowed")
            img = ProjectivePoint(v)
            k = img.key(quantum)
            if k not in seen:
                seen.add(k)
                points.append(img)
                frontier.append((img, depth + 1))
    margins = omega.margins(omega.lifts(points))
    acc = [q for q, mg in zip(points, margins) if mg < eps_acc]
    return OrbitSample(p, word_radius, points, acc)


def orbital_limit_sample(triple, base_points, word_radius, eps_acc=1e-3):
    """Union of the boundary accumulation of orbits of several base points."""
    acc = []
    seen = set()
    for p in base_points:
        for q in orbit(triple, p, word_radius, eps_acc).boundary_accumulation:
            k = q.key(1e-9)
            if k not in seen:
                seen.add(k)
                acc.append(q)
    return acc


def affine_span_dim(omega, points, tol=1e-6):
    """Dimension of the affine span of points in the chart."""
    y = omega.to_chart(points)
    if len(y) < 2:
        return 0
    s = np.linalg.svd(y - y.mean(axis=0), compute_uv=False)
    return int(np.sum(s > tol * max(1.0, s[0])))


# ---------------------------------------------------------- product example
def build_product_example(omega, group):
    """Omega_* = {[(v, w)] : v, w in C}, C_* its diagonal, Lambda_* = {g + g}.

    Returns (Omega_*, C_*, Lambda_*) with Lambda_* acting by block-diagonal
    matrices and C_* recorded as its invariant subset.
    """
    if omega.kind != "polytope":
        raise NotPolytope("the product construction needs a polytope")
    d = omega.dim
    v = omega.vertices
    z = np.zeros_like(v)
    star_vertices = np.vstack([np.hstack([v, z]), np.hstack([z, v])])
    star = ConvexDomain.polytope(star_vertices, chart=np.concatenate([omega.chart, omega.chart]))
    diag_pts = [ProjectivePoint(np.concatenate([u, u])) for u in v]
    c_star = convex_hull(star, diag_pts)
    gens = []
    for g in group.generators:
        blk = np.zeros((2 * d, 2 * d))
        blk[:d, :d] = g.matrix
        blk[d:, d:] = g.matrix
        gens.append(ProjectiveMap(blk))
    labels = tuple(f"{lab}*" for lab in group.labels)
    lam_star = build_group(gens, star, labels, invariant_subset=c_star)
    return star, c_star, lam_star


# ------------------------------------------------------------ face dynamics
def subspace_depth(omega, basis):
    """Largest interior margin attained on P(span(basis)); <= 0 iff it misses Omega."""
    b = np.atleast_2d(basis)
    if b.size == 0 or b.shape[1] == 0:
        return -np.inf
    if omega.kind == "polytope":
        m = b.shape[1]
        fb = omega.facets @ b
        c = np.zeros(m + 1)
        c[-1] = -1.0
        a_ub = np.hstack([-fb, np.ones((len(fb), 1))])
        res = linprog(c, A_ub=a_ub, b_ub=np.zeros(len(fb)),
                      A_eq=np.append(omega.chart @ b, 0.0)[None, :], b_eq=[1.0],
                      bounds=[(None, None)] * m + [(None, 1.0)], method="highs",
                      options=_LP_OPTIONS)
        if res.status != 0:
            return -np.inf
        z = b @ res.x[:m]
        return float(omega.margins(z)[0])
    w = np.linalg.eigvalsh(b.T @ omega.quadric @ b)
    return float(-w[0])


@dataclass
class FaceDynamicsReport:
    limit: object
    inverse_limit: object
    x: ProjectivePoint
    y: ProjectivePoint
    face: object
    powers: int
    verdicts: dict
    residuals: dict

    @property
    def passed(self):
        return all(self.verdicts.values())


def face_dynamics_check(omega, g_seq, p0, subset=None, tol=1e-9, threshold=1e-10):
    """Certify image(T) in span F(x), P(ker T) misses Omega, y in P(ker T).

    ``g_seq`` is a sequence of automorphisms or a single map whose powers
    are taken until consecutive normalized terms differ by < ``threshold``.
    Also checks T(Omega) = F(x) on vertices and interior samples, and
    T(C) in F(x) intersected with the ideal boundary of C when a subset is
    given.
    """
    if isinstance(g_seq, ProjectiveMap):
        seq = power_sequence(g_seq, threshold)
        inv = power_sequence(g_seq.inverse(), threshold)
    else:
        seq = [g.matrix for g in g_seq]
        inv = [g.inverse().matrix for g in g_seq]
    t = projective_limit(seq, threshold)
    s = projective_limit(inv, threshold)
    if not (t.converged and s.converged):
        raise NotConverged(f"limit residuals {t.residual:.3e}, {s.residual:.3e}")
    x = t.apply(p0)
    y = s.apply(p0)
    if omega.is_interior(x):
        raise NonBoundaryLimit("g_n p0 converges to an interior point")
    face = open_face(omega, x)
    residuals = {
        "limit_residual": t.residual,
        "orbit_residual": ProjectivePoint(seq[-1] @ p0.coords).distance(x),
        "image_in_face_span": t.image_residual(face.span.basis),
        "kernel_depth": max(subspace_depth(omega, t.kernel), 0.0),
        "y_in_kernel": t.kernel_residual(y),
    }
    verdicts = {
        "image_in_face_span": residuals["image_in_face_span"] < tol,
        "kernel_misses_domain": residuals["kernel_depth"] < tol,
        "y_in_kernel": residuals["y_in_kernel"] < tol,
    }
    # T(Omega) = F(x): samples land in the face and the dimensions agree
    samples = omega.sample_interior(64, seed=0)
    images = [t.apply(ProjectivePoint(z)) for z in samples]
    residuals["face_dim_gap"] = float(abs(face.span.dim - t.rank))
    onto = all(face.contains(q) for q in images) and face.span.dim == t.rank
    if omega.kind == "polytope" and face.kind == "polytope-face":
        vimg = [t.matrix @ v for v in omega.vertices]
        vimg = [ProjectivePoint(w) for w in vimg if np.linalg.norm(w) > 1e-9]
        fverts = [ProjectivePoint(omega.vertices[i]) for i in face.vertex_indices]
        onto = onto and all(any(fv.isclose(w, 1e-8) for w in vimg) for fv in fverts)
    verdicts["image_equals_face"] = bool(onto)
    if subset is not None:
        csamp = subset.interior_sample(32, seed=1)
        ok = True
        for z in csamp:
            q = t.apply(ProjectivePoint(z))
            zq = omega.lift(q)
            ok = ok and face.contains(q) and zq is not None and hull_membership(subset.generators, zq)
        verdicts["subset_image_in_ideal_face"] = bool(ok)
    return FaceDynamicsReport(t, s, x, y, face, len(seq), verdicts, residuals)
