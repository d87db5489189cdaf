"""Command line entry point: ``hilbert-flats <command> --scene <path>``.

Exit codes: 0 success, 1 hard error, 2 a verification verdict failed.
"""

import argparse
import dataclasses
import logging
import sys

import numpy as np

from . import action, flat, metric, verify
from .domain import _hull_from_lifts, chord_endpoints, hull_membership, hull_residual
from .errors import HilbertFlatsError, UnknownCommand, ValidationError
from .projective import ProjectivePoint
from .report import VERSION, Report, digest, emit_report, normalize_format, to_plain
from .scene import build_scene, parse_scene

log = logging.getLogger(__name__)

COMMANDS = ("dist", "geodesic", "tau", "displacement", "minset", "mr", "hull-check", "com",
            "orbit", "limitset", "face-dynamics", "flat", "verify", "echo")


def _chart_rows(omega, lifts, **columns):
    """One row per point with chart coordinates and extra per-point columns."""
    y = omega.to_chart_lifts(np.atleast_2d(lifts)) if len(lifts) else np.zeros((0, omega.dim - 1))
    rows = []
    for i, coords in enumerate(y):
        row = {f"y{j + 1}": float(c) for j, c in enumerate(coords)}
        for key, values in columns.items():
            row[key] = values[i]
        rows.append(row)
    return rows


def _generator(group, label):
    if label is None:
        return group.labels[0], group.generators[0]
    if label not in group.labels:
        raise ValidationError(f"group has no generator labeled {label!r}")
    i = group.labels.index(label)
    return label, group.generators[i]


# ------------------------------------------------------------------ commands
def cmd_dist(scene, rep):
    p = scene.params
    x, y = scene.point(p.get("x", "x")), scene.point(p.get("y", "y"))
    omega = scene.domain
    value = metric.hilbert_distance(omega, x, y)
    fast = metric.distances(omega, omega.lift(x), omega.lift(y))[0]
    rep.outputs["distance"] = value
    rep.outputs["near_boundary"] = metric.near_boundary(omega, x, y)
    if not x.isclose(y, 1e-12):
        rep.outputs["chord_endpoints"] = list(chord_endpoints(omega, x, y))
    rep.residuals["route_agreement"] = abs(value - fast)


def cmd_geodesic(scene, rep):
    p = scene.params
    omega = scene.domain
    x, y = scene.point(p.get("x", "x")), scene.point(p.get("y", "y"))
    ts = p.get("ts", [p.get("t", 0.5)])
    total = metric.hilbert_distance(omega, x, y)
    pts, worst = [], 0.0
    for t in ts:
        q = metric.geodesic_point(omega, x, y, float(t))
        pts.append(q)
        if 0.0 < t < 1.0:
            worst = max(worst, abs(metric.hilbert_distance(omega, x, q) - t * total),
                        abs(metric.hilbert_distance(omega, q, y) - (1 - t) * total))
    rep.outputs["length"] = total
    rep.outputs["points"] = pts
    rep.residuals["arclength"] = worst
    rep.rows = _chart_rows(omega, omega.lifts(pts), t=[float(t) for t in ts])


def cmd_tau(scene, rep):
    group = scene.group(scene.params.get("group"))
    rep.outputs["translation_lengths"] = {
        lab: action.translation_length(g) for lab, g in zip(group.labels, group.generators)}
    rep.outputs["eigenvalue_moduli"] = {
        lab: g.spectrum for lab, g in zip(group.labels, group.generators)}


def cmd_displacement(scene, rep):
    p = scene.params
    omega = scene.domain
    group = scene.group(p.get("group"))
    x = scene.point(p.get("x", "x"))
    out = {}
    for lab, g in zip(group.labels, group.generators):
        out[lab] = {"displacement": action.displacement(omega, g, x),
                    "translation_length": action.translation_length(g)}
    rep.outputs["at_point"] = out
    n = int(p.get("field_samples", 256))
    if n:
        grid = omega.sample_interior(n, seed=scene.config.rng_seed)
        cols = {lab: action.displacements(omega, g, grid).tolist()
                for lab, g in zip(group.labels, group.generators)}
        rep.rows = _chart_rows(omega, grid, **cols)
    rep.residuals["below_translation_length"] = max(
        max(0.0, v["translation_length"] - v["displacement"]) for v in out.values()) if out else 0.0
    rep.verdicts["displacement_at_least_tau"] = rep.residuals["below_translation_length"] <= 1e-9


def cmd_minset(scene, rep):
    p = scene.params
    omega = scene.domain
    group = scene.group(p.get("group"))
    lab, g = _generator(group, p.get("generator"))
    subset = scene.subset(p["subset"]) if "subset" in p else group.invariant_subset
    wit = action.min_set_sample(omega, g, scene.config, subset)
    tau = action.translation_length(g)
    lifts = omega.lifts(wit) if wit else np.zeros((0, omega.dim))
    disp = action.displacements(omega, g, lifts) if wit else np.zeros(0)
    rep.outputs.update({"generator": lab, "translation_length": tau, "witnesses": len(wit),
                        "grid_samples": scene.config.grid_samples})
    rep.residuals["max_excess"] = float(np.max(disp - tau)) if wit else 0.0
    rep.rows = _chart_rows(omega, lifts, displacement=disp.tolist())


def cmd_mr(scene, rep):
    p = scene.params
    omega = scene.domain
    group = scene.group(p.get("group"))
    r = float(p.get("r", 1.0))
    pts = action.m_r_sample(group, r, scene.config)
    rep.outputs.update({"r": r, "count": len(pts), "grid_samples": scene.config.grid_samples})
    rep.rows = _chart_rows(omega, omega.lifts(pts) if pts else np.zeros((0, omega.dim)))


def cmd_hull_check(scene, rep):
    p = scene.params
    group = scene.group(p.get("group"))
    r = float(p.get("r", 1.0))
    res = action.hull_inflation_check(group, r, scene.config)
    rep.outputs.update(res.as_dict())
    rep.residuals["excess_over_bound"] = res.worst_displacement - res.factor * r
    rep.verdicts["hull_inflation"] = res.passed


def cmd_com(scene, rep):
    p = scene.params
    omega = scene.domain
    if "subset" in p:
        pts = scene.subset(p["subset"]).points
    elif "K" in p:
        pts = [scene.point(n) for n in p["K"]]
    else:
        pts = list(scene.points.values())
    trace = metric.center_of_mass(omega, pts, scene.config, return_trace=True)
    gens = _hull_from_lifts(omega, omega.lifts(pts)).generators
    z = omega.lift(trace.point)
    rep.outputs.update({"center": trace.point, "radii": list(trace.radii),
                        "iterations": trace.iterations, "final_diameter": trace.diameter})
    rep.residuals["hull_residual"] = hull_residual(gens, z)
    rep.verdicts["in_convex_hull"] = bool(hull_membership(gens, z)) and rep.residuals["hull_residual"] < 1e-8


def cmd_orbit(scene, rep):
    p = scene.params
    omega = scene.domain
    group = scene.group(p.get("group"))
    x = scene.point(p.get("x", "x"))
    orb = action.orbit(group, x, int(p.get("word_radius", 3)), float(p.get("eps_acc", 1e-3)))
    rep.outputs.update({"word_radius": orb.word_radius, "size": len(orb.points),
                        "boundary_accumulation": len(orb.boundary_accumulation)})
    lifts = omega.lifts(orb.points)
    rep.rows = _chart_rows(omega, lifts, margin=omega.margins(lifts).tolist())


def cmd_limitset(scene, rep):
    p = scene.params
    omega = scene.domain
    group = scene.group(p.get("group"))
    if "base_points" in p:
        base = [scene.point(n) for n in p["base_points"]]
    else:
        n = int(p.get("base_samples", 4))
        base = [ProjectivePoint(z) for z in omega.sample_interior(n, seed=scene.config.rng_seed)]
    acc = action.orbital_limit_sample(group, base, int(p.get("word_radius", 20)),
                                      float(p.get("eps_acc", 1e-3)))
    hull_dim = action.affine_span_dim(omega, acc) if acc else -1
    rep.outputs.update({"base_points": base, "accumulation_points": len(acc),
                        "hull_dim": hull_dim, "domain_dim": omega.dim - 1,
                        "full_dimensional": hull_dim == omega.dim - 1})
    rep.rows = _chart_rows(omega, omega.lifts(acc) if acc else np.zeros((0, omega.dim)))


def cmd_face_dynamics(scene, rep):
    p = scene.params
    group = scene.group(p.get("group"))
    lab, g = _generator(group, p.get("generator"))
    subset = scene.subset(p["subset"]) if "subset" in p else None
    res = action.face_dynamics_check(scene.domain, g, scene.point(p.get("x", "x")), subset)
    rep.outputs.update({"generator": lab, "powers": res.powers, "x": res.x, "y": res.y,
                        "limit": res.limit.matrix, "rank": res.limit.rank,
                        "image": res.limit.image, "kernel": res.limit.kernel,
                        "face_dim": res.face.dim})
    rep.residuals.update(res.residuals)
    rep.verdicts.update(res.verdicts)


def cmd_flat(scene, rep):
    p = scene.params
    group = scene.group(p.get("group"))
    fr = flat.flat_torus_report(group, scene.config, strict=False)
    s = fr.simplex
    rep.outputs.update({
        "dim": fr.dim, "rank": fr.rank, "cocompact": fr.cocompact,
        "vertices": list(s.vertices) if s is not None else [],
        "vertex_matrix": s.vertex_matrix() if s is not None else [],
        "lattice_basis": fr.lattice_basis, "stages": fr.stages,
        "min_set_witnesses": len(fr.min_set_witnesses)})
    diag = fr.diagnostics
    rep.outputs["diagnostics"] = {k: v for k, v in diag.items()
                                  if not isinstance(v, float) or k == "covering_radius"}
    for key in ("vertex_fix_residual", "simplex_min_residual", "lattice_residual",
                "diagonalization_residual", "hull_depth", "independence", "min_excess"):
        if key in diag:
            rep.residuals[key] = diag[key]
    if fr.error:
        rep.error = fr.error
        return
    rep.verdicts["vertices_fixed"] = diag.get("vertex_fix_residual", 0.0) < 1e-9
    if "properly_embedded" in diag:
        rep.verdicts["properly_embedded"] = diag["properly_embedded"]
        rep.verdicts["minimal"] = diag["minimal"]
    if "simplex_min_residual" in diag:
        rep.verdicts["simplex_in_min"] = diag["simplex_min_residual"] < scene.config.min_tolerance
    if "lattice_residual" in diag:
        rep.verdicts["orbit_on_lattice"] = diag["lattice_residual"] < 1e-6


def _suite_rows(results, scene_label):
    return [{"scene": scene_label, "property": r.name, "passed": r.passed, "skipped": r.skipped,
             "value": r.value, "limit": r.limit, "samples": r.samples} for r in results]


def cmd_verify(scene, rep):
    """Property suite on the scene, or on seeded random scenes when asked."""
    spec = scene.data.get("verify") or {}
    sizes = spec.get("sizes")
    seed = scene.config.rng_seed
    runs = []
    count = int(spec.get("random_scenes", 0))
    if count:
        dims = spec.get("dims", [2, 3, 4])
        kinds = spec.get("kinds", ["random-polytope"])
        for i in range(count):
            kind = kinds[i % len(kinds)]
            d = int(dims[i % len(dims)])
            sub = build_scene({"template": {"name": kind, "d": d, "seed": seed + i}})
            runs.append((f"{kind}-d{d}-s{seed + i}", sub))
    else:
        runs.append(("scene", scene))
    for label, sc in runs:
        group = next(iter(sc.groups.values())) if sc.groups else None
        results = verify.run_suite(sc.domain, group, seed=seed, sizes=sizes, cfg=sc.config)
        rep.rows.extend(_suite_rows(results, label))
        for r in results:
            key = f"{label}/{r.name}" if len(runs) > 1 else r.name
            rep.verdicts[key] = r.passed
            rep.residuals[key] = r.value
    rep.outputs["scenes"] = [label for label, _ in runs]
    rep.outputs["properties"] = len(rep.verdicts)
    rep.outputs["failed"] = sorted(k for k, v in rep.verdicts.items() if not v)


def cmd_echo(scene, rep):
    rep.outputs["scene"] = scene.data


_DISPATCH = {
    "dist": cmd_dist, "geodesic": cmd_geodesic, "tau": cmd_tau,
    "displacement": cmd_displacement, "minset": cmd_minset, "mr": cmd_mr,
    "hull-check": cmd_hull_check, "com": cmd_com, "orbit": cmd_orbit,
    "limitset": cmd_limitset, "face-dynamics": cmd_face_dynamics, "flat": cmd_flat,
    "verify": cmd_verify, "echo": cmd_echo,
}


def run_command(scene, command, seed=None):
    """Dispatch ``command`` on ``scene``; library errors are embedded in the report."""
    if command not in _DISPATCH:
        raise UnknownCommand(f"unknown command {command!r} (known: {', '.join(COMMANDS)})")
    overrides = {}
    if seed is not None and seed != scene.config.rng_seed:
        overrides["rng_seed"] = seed
        scene = dataclasses.replace(scene, config=dataclasses.replace(scene.config, rng_seed=seed))
    rep = Report(command, digest(scene.data, command, scene.config.rng_seed))
    rep.provenance = {"seed": scene.config.rng_seed, "version": VERSION,
                      "template": scene.template,
                      "tolerances": dataclasses.asdict(scene.config), "overrides": overrides}
    try:
        _DISPATCH[command](scene, rep)
    except HilbertFlatsError as exc:
        rep.error = f"{type(exc).__name__}: {exc}"
    rep.outputs = to_plain(rep.outputs)
    return rep


def exit_code(report):
    if report.error is not None:
        return 1
    return 0 if all(report.verdicts.values()) else 2


def main(argv=None):
    parser = argparse.ArgumentParser(prog="hilbert-flats",
                                     description="Hilbert geometry of convex projective domains.")
    parser.add_argument("command", help=", ".join(COMMANDS))
    parser.add_argument("--scene", required=True, help="scene file (JSON)")
    parser.add_argument("--out", help="write the report here instead of stdout")
    parser.add_argument("--format", default="structured-text",
                        help="structured-text (default) or comma-separated-values")
    parser.add_argument("--seed", type=int, help="override config.rng_seed")
    parser.add_argument("-v", "--verbose", action="store_true")
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse exits with 2, which is reserved for failed verification
        return 1 if exc.code else 0
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        fmt = normalize_format(args.format)
        if args.command not in _DISPATCH:
            raise UnknownCommand(f"unknown command {args.command!r} (known: {', '.join(COMMANDS)})")
        scene = parse_scene(args.scene)
        report = run_command(scene, args.command, args.seed)
        text = emit_report(report, fmt, args.out)
    except (HilbertFlatsError, ValueError, OSError) as exc:
        print(f"hilbert-flats: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1
    if args.out is None:
        sys.stdout.write(text)
    if report.error:
        print(f"hilbert-flats: {report.error}", file=sys.stderr)
    return exit_code(report)


if __name__ == "__main__":
    sys.exit(main())
