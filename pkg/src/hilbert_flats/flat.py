"""Invariant simplices of commuting automorphism groups and their Z^k lattices.

Constructive scope: commuting families that are simultaneously
diagonalizable over R, plus elliptic families (every translation length
zero) with finite orbits.  Anything else is refused with a typed error.
"""

import itertools
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np
from sympy import Matrix
from sympy.matrices.normalforms import hermite_normal_form

from .action import _refine, displacements, orbit, translation_length
from .domain import (_hull_from_lifts, hull_meets_interior,
                     vertex_enumeration)
from .errors import (DegenerateConfiguration, HilbertFlatsError, MinSetEmpty,
                     NoSimplexFound, NotSimultaneouslyDiagonalizable,
                     ValidationError, VertexNotFixed)
from .metric import MetricConfig, center_of_mass
from .projective import ProjectivePoint
from .simplex import SimplexFlat, dist_rd

FIX_TOL = 1e-9
EIG_TOL = 1e-8
ELLIPTIC_TOL = 1e-9


@dataclass(frozen=True)
class FixedPoint:
    point: ProjectivePoint
    eigenvalues: tuple  # one real eigenvalue per generator (Rayleigh ratio)


@dataclass
class FlatReport:
    simplex: SimplexFlat = None
    fixed_points_used: list = field(default_factory=list)
    rank: int = None
    lattice_basis: list = field(default_factory=list)
    cocompact: bool = None
    min_set_witnesses: list = field(default_factory=list)
    diagnostics: dict = field(default_factory=dict)
    stages: list = field(default_factory=list)
    error: str = None

    @property
    def dim(self):
        return None if self.simplex is None else self.simplex.dim


def _lift_stack(group):
    return [g.matrix for g in group.generators]


def rayleigh(m, v):
    return float(v @ (m @ v) / (v @ v))


# -------------------------------------------------------------- fixed points
def common_fixed_points(group, seed=0, diagnostics=None):
    """Common eigendirections of the generators lying in the closed domain.

    Joint eigenspaces are read off a generic random combination of the
    lifts.  A joint eigenspace of dimension > 1 contributes the vertices of
    its slice of the closed polytope.
    """
    if not group.commuting:
        raise ValidationError("common fixed points need a commuting family")
    omega = group.ambient
    d = omega.dim
    mats = _lift_stack(group)
    diag = diagnostics if diagnostics is not None else {}
    if not mats:
        mats = [np.eye(d)]
    rng = np.random.default_rng(seed)
    combo = sum(c * m for c, m in zip(rng.uniform(0.5, 1.5, len(mats)), mats))
    w, v = np.linalg.eig(combo)
    if np.max(np.abs(w.imag)) > EIG_TOL * np.max(np.abs(w)):
        raise NotSimultaneouslyDiagonalizable("complex spectrum")
    v = np.real(v)
    v /= np.linalg.norm(v, axis=0)
    cond = np.linalg.cond(v)
    if not np.isfinite(cond) or cond > 1e10:
        raise NotSimultaneouslyDiagonalizable(f"defective spectrum (eigenbasis condition {cond:.2e})")
    vinv = np.linalg.inv(v)
    off = 0.0
    for m in mats:
        dm = vinv @ m @ v
        off = max(off, float(np.max(np.abs(dm - np.diag(np.diag(dm)))) / np.max(np.abs(dm))))
    diag["diagonalization_residual"] = off
    if off > 1e-7:
        raise NotSimultaneouslyDiagonalizable(f"generators not diagonal in a common basis ({off:.2e})")

    # group eigenvectors by their joint eigenvalue tuple
    tuples = np.array([[rayleigh(m, v[:, j]) for m in mats] for j in range(d)])
    groups = []
    for j in range(d):
        for grp in groups:
            ref = tuples[grp[0]]
            if np.all(np.abs(tuples[j] - ref) <= EIG_TOL * np.maximum(np.abs(ref), 1.0)):
                grp.append(j)
                break
        else:
            groups.append([j])
    diag["joint_eigenspace_dims"] = sorted(len(g) for g in groups)
    if len(groups) == 1:
        diag["full_fix"] = True

    found = []
    for grp in groups:
        basis = v[:, grp]
        if len(grp) == 1:
            vec = basis[:, 0]
            for cand in (vec, -vec):
                if cand @ omega.chart > 1e-12 and omega.margins(cand)[0] >= -1e-10:
                    found.append((cand / (cand @ omega.chart), tuples[grp[0]]))
            continue
        if omega.kind != "polytope":
            raise DegenerateConfiguration(
                "positive-dimensional fixed locus on a non-polytopal domain")
        q, _ = np.linalg.qr(basis)
        for z in vertex_enumeration(omega, q):
            found.append((z, tuple(rayleigh(m, z) for m in mats)))
    pts = [FixedPoint(ProjectivePoint(z), tuple(float(x) for x in t)) for z, t in found]
    pts.sort(key=lambda f: tuple(-f.point.coords))
    return pts


# ------------------------------------------------------------ simplex search
def minimal_simplex_search(group, fixed, diagnostics=None):
    """First subset of fixed points (by size, then lexicographic) whose hull meets the domain."""
    omega = group.ambient
    if not fixed:
        raise NoSimplexFound("no fixed points supplied")
    points = [f.point if isinstance(f, FixedPoint) else f for f in fixed]
    lifts = omega.lifts(points)
    diag = diagnostics if diagnostics is not None else {}
    for size in range(1, len(points) + 1):
        for combo in itertools.combinations(range(len(points)), size):
            meets, depth, _ = hull_meets_interior(omega, lifts[list(combo)])
            if not meets:
                continue
            sub = lifts[list(combo)]
            s = np.linalg.svd(sub / np.linalg.norm(sub, axis=1, keepdims=True), compute_uv=False)
            diag["independence"] = float(s[-1] / s[0])
            if s[-1] <= 1e-9 * s[0]:
                raise NoSimplexFound("minimal vertex subset is linearly dependent")
            simplex = SimplexFlat(tuple(points[i] for i in combo), omega)
            diag["hull_depth"] = depth
            diag["vertex_indices"] = list(combo)
            diag["properly_embedded"] = bool(simplex.properly_embedded())
            diag["minimal"] = not any(
                hull_meets_interior(omega, lifts[list(c)])[0]
                for k in range(1, size) for c in itertools.combinations(combo, k))
            return simplex
    raise NoSimplexFound(f"no subset of {len(points)} fixed points has hull meeting the domain")


# -------------------------------------------------------------- lattice rank
def translation_vectors(group, simplex):
    """Rows (log mu_2/mu_1, ..., log mu_{k+1}/mu_1) per generator at the simplex vertices."""
    lifts = simplex.vertex_matrix().T
    rows = []
    worst = 0.0
    for lab, g in zip(group.labels, group.generators):
        mu = []
        for v in lifts:
            res = ProjectivePoint(g.matrix @ v).distance(ProjectivePoint(v))
            worst = max(worst, res)
            if res > FIX_TOL:
                raise VertexNotFixed(f"generator {lab} moves a vertex by {res:.3e}")
            mu.append(abs(rayleigh(g.matrix, v)))
        lm = np.log(mu)
        rows.append(lm[1:] - lm[0])
    return np.array(rows).reshape(len(rows), simplex.dim), worst


def lll_reduce(basis, delta=0.75):
    """LLL reduction of the rows of a real basis matrix."""
    b = np.array(basis, dtype=float)
    n = len(b)
    if n <= 1:
        return b

    def gram_schmidt(b):
        bs = np.zeros_like(b)
        mu = np.zeros((n, n))
        for i in range(n):
            bs[i] = b[i]
            for j in range(i):
                mu[i, j] = b[i] @ bs[j] / (bs[j] @ bs[j])
                bs[i] -= mu[i, j] * bs[j]
        return bs, mu

    bs, mu = gram_schmidt(b)
    k = 1
    while k < n:
        for j in range(k - 1, -1, -1):
            q = round(mu[k, j])
            if q:
                b[k] -= q * b[j]
                bs, mu = gram_schmidt(b)
        if bs[k] @ bs[k] >= (delta - mu[k, k - 1] ** 2) * (bs[k - 1] @ bs[k - 1]):
            k += 1
        else:
            b[[k, k - 1]] = b[[k - 1, k]]
            bs, mu = gram_schmidt(b)
            k = max(k - 1, 1)
    return b


def _lattice_basis(vectors, rank, tol, max_denominator=1000):
    """Reduced basis of the subgroup generated by the rows, or None if not discrete."""
    if rank == 0:
        return np.zeros((0, vectors.shape[1])), True
    chosen = []
    for i in range(len(vectors)):
        if np.linalg.matrix_rank(vectors[chosen + [i]], tol=tol) > len(chosen):
            chosen.append(i)
    base = vectors[chosen]
    coeffs = vectors @ np.linalg.pinv(base)
    fracs = [[Fraction(c).limit_denominator(max_denominator) for c in row] for row in coeffs]
    approx = np.array([[float(f) for f in row] for row in fracs])
    if np.max(np.abs(approx @ base - vectors)) > tol * max(1.0, np.max(np.abs(vectors))):
        return lll_reduce(base), False
    den = int(np.lcm.reduce([f.denominator for row in fracs for f in row]))
    ints = Matrix([[int(f * den) for f in row] for row in fracs])
    # HNF of the column lattice of ints^T spans the same integer row lattice
    h = hermite_normal_form(ints.T)
    cols = np.array(h.tolist(), dtype=float).T
    cols = cols[np.any(cols != 0, axis=1)]
    return lll_reduce(cols @ base / den), True


def rank_certificate(group, simplex, tol=1e-8, diagnostics=None):
    """(rank, lattice_basis) of the translation vectors at the simplex vertices."""
    vecs, worst = translation_vectors(group, simplex)
    diag = diagnostics if diagnostics is not None else {}
    diag["vertex_fix_residual"] = worst
    if simplex.dim == 0 or len(vecs) == 0:
        return 0, []
    scale = max(1.0, float(np.max(np.abs(vecs))))
    rank = int(np.linalg.matrix_rank(vecs, tol=tol * scale)) if np.max(np.abs(vecs)) > tol else 0
    basis, discrete = _lattice_basis(vecs, rank, tol)
    diag["discrete"] = bool(discrete)
    return rank, [row for row in basis]


# ------------------------------------------------------------------ min hull
def min_hull(group, cfg=None, simplex=None, diagnostics=None):
    """Sampled common Min-set of the generators inside C, with its hull.

    Returns (witnesses, report).  When ``simplex`` is given the report also
    carries the largest excess displacement tau-gap along simplex samples.
    """
    cfg = cfg or MetricConfig()
    omega = group.ambient
    c = group.invariant_subset
    pts = omega.sample_interior(cfg.grid_samples, seed=cfg.rng_seed) if c is None \
        else c.interior_sample(cfg.grid_samples, seed=cfg.rng_seed)
    taus = np.array([translation_length(g) for g in group.generators])

    def excess_of(z):
        if not len(taus):
            return np.zeros(len(z))
        return np.max(np.column_stack([displacements(omega, g, z) - t
                                       for g, t in zip(group.generators, taus)]), axis=1)

    excess = excess_of(pts)
    order = np.argsort(excess, kind="stable")[: cfg.refine_points]
    refined = _refine(omega, c, excess_of, pts[order]) if len(taus) else np.zeros((0, omega.dim))
    if len(refined):
        pts = np.vstack([pts, refined])
        excess = np.concatenate([excess, excess_of(refined)])
    mask = excess <= cfg.min_tolerance
    witnesses = pts[mask]
    report = {"grid_samples": int(len(pts) - len(refined)), "refined_points": int(len(refined)), "witness_count": int(mask.sum()),
              "min_excess": float(excess.min()) if len(excess) else 0.0}
    if simplex is not None and len(taus):
        if simplex.dim == 0:
            samp = omega.lifts(simplex.vertices)
        else:
            samp = omega.lifts(simplex.sample(cfg.set_samples, seed=cfg.rng_seed))
        report["simplex_min_residual"] = float(max(
            np.max(displacements(omega, g, samp) - t) for g, t in zip(group.generators, taus)))
    if not len(witnesses):
        raise MinSetEmpty(f"no common Min-set sample among {len(pts)} grid points "
                          f"(best excess {report['min_excess']:.3e})")
    hull = _hull_from_lifts(omega, witnesses)
    report["hull_dim"] = int(hull.span_dim)
    if diagnostics is not None:
        diagnostics.update(report)
    return [ProjectivePoint(z) for z in witnesses], report


# ---------------------------------------------------------------- elliptic
def _orbit_closure(group, p, max_radius=64):
    prev = -1
    for radius in range(1, max_radius + 1):
        orb = orbit(group, p, radius)
        if len(orb.points) == prev:
            return orb.points
        prev = len(orb.points)
    raise NotSimultaneouslyDiagonalizable("elliptic family with an orbit that does not close")


def _elliptic_simplex(group, cfg, diagnostics):
    omega = group.ambient
    p = ProjectivePoint(omega.center_lift())
    pts = _orbit_closure(group, p)
    diagnostics["finite_orbit_size"] = len(pts)
    centre = center_of_mass(omega, pts, cfg)
    return SimplexFlat((centre,), omega)


# ------------------------------------------------------------ covering radius
def covering_radius(simplex, group, basis, word_radius=None, samples=256, seed=0):
    """Covering radius of the Phi-image of a word-ball orbit of the barycenter.

    Also returns how far those orbit points are from the lattice through the
    barycenter spanned by ``basis``.
    """
    k = simplex.dim
    basis = np.array(basis)
    if word_radius is None:
        word_radius = 2 * k + 2
    orb = orbit(group, simplex.barycenter(), word_radius, eps_acc=0.0, quantum=1e-7)
    phis = np.array([simplex.phi(q) for q in orb.points])
    origin = simplex.phi(simplex.barycenter())
    coeffs = (phis - origin) @ np.linalg.pinv(basis)
    off_lattice = float(np.max(np.abs(coeffs - np.round(coeffs))))
    rng = np.random.default_rng(seed)
    probes = origin + rng.random((samples, k)) @ basis
    radius = max(min(dist_rd(p, q) for q in phis) for p in probes)
    return float(radius), off_lattice


# ------------------------------------------------------------------ pipeline
def flat_torus_report(group, cfg=None, strict=True):
    """Fixed points -> minimal simplex -> checks -> rank certificate -> Min-hull."""
    cfg = cfg or MetricConfig()
    rep = FlatReport()
    diag = rep.diagnostics
    try:
        if not group.commuting:
            raise ValidationError("flat torus pipeline needs a commuting family")
        taus = [translation_length(g) for g in group.generators]
        diag["translation_lengths"] = taus
        if all(t <= ELLIPTIC_TOL for t in taus):
            diag["elliptic"] = True
            rep.simplex = _elliptic_simplex(group, cfg, diag)
            rep.fixed_points_used = list(rep.simplex.vertices)
            rep.stages.append("fixed-point")
        else:
            diag["elliptic"] = False
            fixed = common_fixed_points(group, seed=cfg.rng_seed, diagnostics=diag)
            diag["fixed_point_count"] = len(fixed)
            rep.stages.append("common-fixed-points")
            rep.simplex = minimal_simplex_search(group, fixed, diagnostics=diag)
            rep.fixed_points_used = list(rep.simplex.vertices)
            rep.stages.append("minimal-simplex")
            if not diag["properly_embedded"]:
                raise ValidationError("detected simplex is not properly embedded")
        rep.rank, rep.lattice_basis = rank_certificate(group, rep.simplex, diagnostics=diag)
        rep.cocompact = rep.rank == rep.simplex.dim
        rep.stages.append("rank-certificate")
        if rep.cocompact and rep.simplex.dim > 0 and diag.get("discrete", True):
            diag["covering_radius"], diag["lattice_residual"] = covering_radius(
                rep.simplex, group, rep.lattice_basis, seed=cfg.rng_seed)
        witnesses, _ = min_hull(group, cfg, rep.simplex, diagnostics=diag)
        rep.min_set_witnesses = witnesses
        rep.stages.append("min-hull")
    except HilbertFlatsError as exc:
        if strict:
            raise
        rep.error = f"{type(exc).__name__}: {exc}"
    return rep
