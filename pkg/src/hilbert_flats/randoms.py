"""Seeded random domains, automorphisms and point samples for property tests.

Random polytopes are projective images of joins of polygon cones and
simplex cones.  Block-scalar diagonal maps preserve such a join, so each
random polytope comes with a commuting family of hyperbolic automorphisms.
"""

from dataclasses import dataclass

import numpy as np

from .domain import ConvexDomain


def random_projective(d, rng, spread=1.0):
    """Random element of GL_d with condition number at most exp(2 spread)."""
    q1, _ = np.linalg.qr(rng.standard_normal((d, d)))
    q2, _ = np.linalg.qr(rng.standard_normal((d, d)))
    return q1 @ np.diag(np.exp(rng.uniform(-spread, spread, d))) @ q2


def random_polygon_cone(m, rng):
    """Vectors (x, y, 1) over a random convex m-gon inscribed in a jittered circle."""
    # jitter stays below half a gap so the polygon keeps the origin inside
    angles = np.linspace(0, 2 * np.pi, m, endpoint=False) + rng.uniform(-0.3, 0.3, m) * np.pi / m
    return np.column_stack([np.cos(angles), np.sin(angles), np.ones(m)])


@dataclass(frozen=True)
class JoinStructure:
    """Block layout of a join: ("polygon", 3) or ("simplex", n) blocks."""

    blocks: tuple
    frame: np.ndarray  # the projective map h applied to the standard join

    @property
    def dim(self):
        return sum(n for _, n in self.blocks)


def _join_vertices(blocks, rng):
    """Vertex rows of the standard join and a chart positive on all of them."""
    d = sum(n for _, n in blocks)
    rows = []
    chart = np.zeros(d)
    start = 0
    for kind, n in blocks:
        if kind == "polygon":
            cone = random_polygon_cone(int(rng.integers(4, 8)), rng)
            chart[start + 2] = 1.0
        else:
            cone = np.eye(n)
            chart[start:start + n] = 1.0
        for v in cone:
            row = np.zeros(d)
            row[start:start + n] = v
            rows.append(row)
        start += n
    return np.array(rows), chart


def random_join_blocks(d, rng):
    if d <= 3:
        return (("simplex", d),)
    if d == 6 and rng.random() < 0.5:
        return (("polygon", 3), ("polygon", 3))
    return (("polygon", 3), ("simplex", d - 3))


def random_polytope(d, rng, spread=0.5):
    """(domain, structure): a random projective image of a join of cones."""
    blocks = random_join_blocks(d, rng)
    h = random_projective(d, rng, spread)
    verts, chart = _join_vertices(blocks, rng)
    verts = verts @ h.T
    chart = np.linalg.inv(h).T @ chart
    return ConvexDomain.polytope(verts, chart=chart), JoinStructure(blocks, h)


def random_block_diagonal(structure, rng, scale=1.0):
    """Random lift of a block-scalar positive diagonal automorphism."""
    entries = []
    for kind, n in structure.blocks:
        if kind == "polygon":
            entries.extend([np.exp(scale * rng.standard_normal())] * n)
        else:
            entries.extend(np.exp(scale * rng.standard_normal(n)))
    h = structure.frame
    return h @ np.diag(entries) @ np.linalg.inv(h)


def random_ellipsoid(d, rng, spread=0.5):
    """(domain, frame): projective image of the Klein-model ball under a random map."""
    j = np.eye(d)
    j[-1, -1] = -1.0
    h = random_projective(d, rng, spread)
    hinv = np.linalg.inv(h)
    chart = hinv.T @ np.eye(d)[-1]
    return ConvexDomain.from_quadric(hinv.T @ j @ hinv, chart), h


def random_boost(frame, rng, scale=1.0):
    """Hyperbolic automorphism of the image ellipsoid (boost along the first axis)."""
    d = frame.shape[0]
    t = scale * rng.standard_normal()
    b = np.eye(d)
    b[0, 0] = b[-1, -1] = np.cosh(t)
    b[0, -1] = b[-1, 0] = np.sinh(t)
    return frame @ b @ np.linalg.inv(frame)


def random_interior(omega, n, rng):
    """Random interior chart lifts: Dirichlet vertex combinations or ball points."""
    if omega.kind == "polytope":
        w = rng.dirichlet(np.ones(len(omega.vertices)), size=n)
        return w @ omega.vertices
    lo, hi = omega.bounding_box()
    out = []
    while sum(len(o) for o in out) < n:
        y = rng.uniform(lo, hi, size=(4 * n, len(lo)))
        z = omega.from_chart(y)
        out.append(z[omega.margins(z) > 1e-6])
    return np.vstack(out)[:n]
