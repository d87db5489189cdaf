"""Scene files: JSON declarations of a domain, groups, subsets, points and config.

A scene may name a template; the template expands into explicit
declarations first and any field given in the file overrides the expansion.
The normalized (expanded) dictionary is what ``echo`` writes back, so
parse -> emit -> parse is the identity on scenes.
"""

import copy
import json
import math
from dataclasses import dataclass, field, fields

import numpy as np

from .action import build_group, build_product_example
from .domain import ConvexDomain, convex_hull
from .errors import HilbertFlatsError, ParseError, ValidationError
from .metric import MetricConfig
from .projective import ProjectivePoint
from .randoms import (random_block_diagonal, random_boost, random_ellipsoid,
                      random_polytope)
from .simplex import build_standard_simplex

TEMPLATES = ("example-3.1", "example-3.2", "example-3.3", "example-product",
             "random-polytope", "random-ellipsoid")


@dataclass
class Scene:
    domain: ConvexDomain
    groups: dict = field(default_factory=dict)
    subsets: dict = field(default_factory=dict)
    points: dict = field(default_factory=dict)
    params: dict = field(default_factory=dict)
    config: MetricConfig = field(default_factory=MetricConfig)
    template: str = None
    data: dict = field(default_factory=dict, repr=False)

    def point(self, name):
        if name not in self.points:
            raise ValidationError(f"scene has no point named {name!r}")
        return self.points[name]

    def group(self, name=None):
        if name is None:
            if not self.groups:
                raise ValidationError("scene declares no group")
            name = next(iter(self.groups))
        if name not in self.groups:
            raise ValidationError(f"scene has no group named {name!r}")
        return self.groups[name]

    def subset(self, name):
        if name not in self.subsets:
            raise ValidationError(f"scene has no subset named {name!r}")
        return self.subsets[name]


# ---------------------------------------------------------------- templates
def _diag(v):
    return np.diag(np.asarray(v, dtype=float)).tolist()


def _tolist(a):
    return np.asarray(a, dtype=float).tolist()


def _expand_example_31(opts):
    k = int(opts.get("k", 2))
    z = opts.get("z", [math.log(2.0) * (k - i) for i in range(k + 1)])
    if len(z) != k + 1:
        raise ValidationError(f"example-3.1 needs {k + 1} exponents, got {len(z)}")
    return {
        "domain": {"kind": "simplex", "k": k},
        "groups": {"A": {"generators": [_diag(np.exp(z))], "labels": ["a"], "commuting": True}},
        "points": {"x": [1.0] * (k + 1), "y": [2.0 ** i for i in range(k + 1)]},
    }


def _expand_example_32(opts):
    d = int(opts.get("d", 2))
    gens = [_diag(np.exp(np.eye(d + 1)[i])) for i in range(d + 1)]
    return {
        "domain": {"kind": "simplex", "k": d},
        "groups": {"A": {"generators": gens, "labels": [f"e{i + 1}" for i in range(d + 1)],
                         "commuting": True}},
        "points": {"x": [1.0] * (d + 1)},
    }


def _expand_example_33(opts):
    d = int(opts.get("d", 2))
    w = float(opts.get("w", 1.0))
    phi = opts.get("phi", [[j * w for j in range(d + 1)]])
    k = int(opts.get("k", len(phi)))
    if len(phi) != k or any(len(row) != d + 1 for row in phi):
        raise ValidationError(f"example-3.3 needs k={k} exponent vectors of length {d + 1}")
    gens = [_diag(np.exp(row)) for row in phi]
    return {
        "domain": {"kind": "simplex", "k": d},
        "groups": {"A": {"generators": gens, "labels": [f"phi{i + 1}" for i in range(k)],
                         "commuting": True}},
        "points": {"x": [1.0] * (d + 1)},
    }


def _expand_product(opts):
    lam = float(opts.get("lambda", 2.0))
    interval = build_standard_simplex(1)
    base = build_group([np.diag([lam, 1.0])], interval, labels=["g"])
    star, c_star, l_star = build_product_example(interval, base)
    return {
        "domain": {"kind": "polytope", "vertices": _tolist(star.vertices), "chart": _tolist(star.chart)},
        "subsets": {"C": {"points": _tolist(c_star.generators)}},
        "groups": {"L": {"generators": [_tolist(g.matrix) for g in l_star.generators],
                         "labels": list(l_star.labels), "commuting": True,
                         "invariant_subset": "C"}},
        "points": {"x": _tolist(star.center_lift())},
    }


def _expand_random_polytope(opts):
    d = int(opts.get("d", 3))
    seed = int(opts.get("seed", 0))
    rng = np.random.default_rng(seed)
    omega, structure = random_polytope(d, rng)
    gens = [random_block_diagonal(structure, rng) for _ in range(int(opts.get("generators", 2)))]
    return {
        "domain": {"kind": "polytope", "vertices": _tolist(omega.vertices), "chart": _tolist(omega.chart)},
        "groups": {"A": {"generators": [_tolist(g) for g in gens], "commuting": True}},
        "points": {"x": _tolist(omega.center_lift())},
        "config": {"rng_seed": seed},
    }


def _expand_random_ellipsoid(opts):
    d = int(opts.get("d", 3))
    seed = int(opts.get("seed", 0))
    rng = np.random.default_rng(seed)
    omega, frame = random_ellipsoid(d, rng)
    gens = [random_boost(frame, rng) for _ in range(int(opts.get("generators", 2)))]
    return {
        "domain": {"kind": "quadric", "quadric": _tolist(omega.quadric), "chart": _tolist(omega.chart)},
        "groups": {"A": {"generators": [_tolist(g) for g in gens], "commuting": True}},
        "points": {"x": _tolist(omega.center_lift())},
        "config": {"rng_seed": seed},
    }


_EXPANDERS = {
    "example-3.1": _expand_example_31,
    "example-3.2": _expand_example_32,
    "example-3.3": _expand_example_33,
    "example-product": _expand_product,
    "random-polytope": _expand_random_polytope,
    "random-ellipsoid": _expand_random_ellipsoid,
}


def expand_template(data):
    """Merge a template expansion under the explicit fields of ``data``."""
    tmpl = data.get("template")
    if tmpl is None:
        return copy.deepcopy(data)
    if isinstance(tmpl, str):
        tmpl = {"name": tmpl}
    if not isinstance(tmpl, dict) or "name" not in tmpl:
        raise ParseError("template must be a name or an object with a name", field="template")
    name = tmpl["name"]
    if name not in _EXPANDERS:
        raise ParseError(f"unknown template {name!r} (known: {', '.join(TEMPLATES)})", field="template.name")
    opts = {k: v for k, v in tmpl.items() if k != "name"}
    out = _EXPANDERS[name](opts)
    for key, value in data.items():
        if key == "template":
            continue
        if isinstance(value, dict) and isinstance(out.get(key), dict):
            out[key] = {**out[key], **value}
        else:
            out[key] = value
    out["template"] = {"name": name, **opts}
    return out


# ----------------------------------------------------------------- parsing
def _vector(value, where, length=None):
    if not isinstance(value, list) or not value:
        raise ParseError("expected a nonempty array of numbers", field=where)
    for i, v in enumerate(value):
        if isinstance(v, bool) or not isinstance(v, (int, float)):
            raise ParseError(f"entry {i} is not a number", field=where)
    if length is not None and len(value) != length:
        raise ParseError(f"expected {length} entries, got {len(value)}", field=where)
    return np.array(value, dtype=float)


def _matrix(value, where, cols=None):
    if not isinstance(value, list) or not value:
        raise ParseError("expected a nonempty array of rows", field=where)
    rows = [_vector(r, f"{where}[{i}]") for i, r in enumerate(value)]
    width = cols if cols is not None else len(rows[0])
    for i, r in enumerate(rows):
        if len(r) != width:
            raise ParseError(f"row {i} has length {len(r)}, expected {width}", field=f"{where}[{i}]")
    return np.array(rows)


def _domain(decl):
    if not isinstance(decl, dict) or "kind" not in decl:
        raise ParseError("domain must be an object with a kind", field="domain")
    kind = decl["kind"]
    if kind == "simplex":
        return build_standard_simplex(int(decl.get("k", 2)))
    if kind == "polytope":
        verts = _matrix(decl.get("vertices"), "domain.vertices")
        chart = decl.get("chart")
        if chart is not None:
            chart = _vector(chart, "domain.chart", verts.shape[1])
        return ConvexDomain.polytope(verts, chart=chart)
    if kind == "ellipsoid":
        center = _vector(decl.get("center"), "domain.center")
        shape = _matrix(decl.get("shape"), "domain.shape", len(center))
        return ConvexDomain.ellipsoid(center, shape)
    if kind == "quadric":
        q = _matrix(decl.get("quadric"), "domain.quadric")
        if q.shape[0] != q.shape[1]:
            raise ParseError("quadric must be square", field="domain.quadric")
        return ConvexDomain.from_quadric(q, _vector(decl.get("chart"), "domain.chart", q.shape[0]))
    raise ParseError(f"unknown domain kind {kind!r}", field="domain.kind")


def _config(decl):
    decl = decl or {}
    known = {f.name: f.type for f in fields(MetricConfig)}
    kwargs = {}
    for key, value in decl.items():
        if key not in known:
            raise ParseError(f"unknown config key {key!r}", field=f"config.{key}")
        kwargs[key] = float(value) if known[key] in (float, "float") else int(value)
    return MetricConfig(**kwargs)


def build_scene(data):
    """Validate a (possibly templated) scene dictionary."""
    if not isinstance(data, dict):
        raise ParseError("scene must be a JSON object")
    data = expand_template(data)
    unknown = set(data) - {"template", "domain", "groups", "subsets", "points", "params", "config", "verify"}
    if unknown:
        raise ParseError(f"unknown top-level key {sorted(unknown)[0]!r}", field=sorted(unknown)[0])
    if "domain" not in data:
        raise ParseError("scene needs a domain", field="domain")
    omega = _domain(data["domain"])
    d = omega.dim
    cfg = _config(data.get("config"))

    points = {}
    for name, coords in (data.get("points") or {}).items():
        points[name] = ProjectivePoint(_vector(coords, f"points.{name}", d))

    subsets = {}
    for name, decl in (data.get("subsets") or {}).items():
        pts = _matrix((decl or {}).get("points"), f"subsets.{name}.points", d)
        subsets[name] = convex_hull(omega, [ProjectivePoint(p) for p in pts])

    groups = {}
    for name, decl in (data.get("groups") or {}).items():
        where = f"groups.{name}"
        if not isinstance(decl, dict):
            raise ParseError("group must be an object", field=where)
        gens = decl.get("generators", [])
        if not isinstance(gens, list):
            raise ParseError("generators must be an array of matrices", field=f"{where}.generators")
        mats = [_matrix(m, f"{where}.generators[{i}]", d) for i, m in enumerate(gens)]
        for i, m in enumerate(mats):
            if m.shape != (d, d):
                raise ParseError(f"generator must be {d}x{d}", field=f"{where}.generators[{i}]")
        sub = decl.get("invariant_subset")
        if sub is not None and sub not in subsets:
            raise ValidationError(f"{where}.invariant_subset refers to unknown subset {sub!r}")
        groups[name] = build_group(mats, omega, labels=decl.get("labels"),
                                   invariant_subset=subsets.get(sub) if sub else None,
                                   commuting=decl.get("commuting"))

    tmpl = data.get("template")
    return Scene(omega, groups, subsets, points, dict(data.get("params") or {}), cfg,
                 tmpl["name"] if tmpl else None, data)


def parse_scene_text(text):
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(exc.msg, line=exc.lineno) from exc
    try:
        return build_scene(data)
    except (ParseError, ValidationError):
        raise
    except HilbertFlatsError as exc:
        raise ValidationError(str(exc)) from exc
    except (TypeError, ValueError) as exc:
        raise ParseError(str(exc)) from exc


def parse_scene(path):
    with open(path, encoding="utf-8") as fh:
        return parse_scene_text(fh.read())
