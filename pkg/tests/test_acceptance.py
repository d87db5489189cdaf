"""Acceptance criteria, one test each.

Every test prints one ``[criterion N] PASS|FAIL`` line; the lines are also
collected in RESULTS and repeated in the terminal summary by conftest.
"""

import json
import subprocess
import sys

import numpy as np

from hilbert_flats import (MetricConfig, ProjectiveMap, ProjectivePoint, build_group,
                           build_product_example, build_standard_simplex, center_of_mass,
                           dist_rd, face_dynamics_check, hilbert_distance, phi_coordinates,
                           simplex_distance, translation_length)
from hilbert_flats.action import (affine_span_dim, displacements, hull_inflation_check,
                                  min_displacement, orbital_limit_sample)
from hilbert_flats.cli import main, run_command
from hilbert_flats.domain import hull_residual
from hilbert_flats.randoms import (random_block_diagonal, random_boost, random_ellipsoid,
                                   random_interior, random_polytope, random_projective)
from hilbert_flats.report import render
from hilbert_flats.scene import build_scene
from hilbert_flats.verify import (check_chord_geodesics, check_metric_axioms,
                                  check_neighborhood_convexity, check_projective_invariance)

RESULTS = []


def record(n, title, passed, detail):
    line = f"[criterion {n:2d}] {'PASS' if passed else 'FAIL'} {title}: {detail}"
    RESULTS.append(line)
    print(line)
    assert passed, line


def random_domains(seed, dims=(2, 3, 4, 5, 6), ellipsoid_dims=(3, 4)):
    """Random polytopes with their commuting automorphisms, then random ellipsoids."""
    rng = np.random.default_rng(seed)
    out = []
    for d in dims:
        omega, structure = random_polytope(d, rng)
        gens = [random_block_diagonal(structure, rng) for _ in range(2)]
        out.append((f"polytope-d{d}", omega, build_group(gens, omega, commuting=True)))
    for d in ellipsoid_dims:
        omega, frame = random_ellipsoid(d, rng)
        gens = [random_boost(frame, rng) for _ in range(2)]
        out.append((f"ellipsoid-d{d}", omega, build_group(gens, omega, commuting=True)))
    return out


def test_criterion_01_simplex_oracle():
    rng = np.random.default_rng(1)
    worst = 0.0
    for _ in range(1000):
        k = int(rng.integers(1, 7))
        omega = build_standard_simplex(k)
        x, y = np.exp(rng.normal(size=(2, k + 1)))
        generic = hilbert_distance(omega, ProjectivePoint(x), ProjectivePoint(y))
        worst = max(worst, abs(generic - simplex_distance(x, y)))
    record(1, "simplex metric oracle equivalence", worst <= 1e-8,
           f"max |chord route - closed form| = {worst:.3e} over 1000 pairs, dims 1-6 (tol 1e-8)")


def test_criterion_02_phi_isometry():
    rng = np.random.default_rng(2)
    worst = 0.0
    for _ in range(1000):
        k = int(rng.integers(1, 7))
        x, y = np.exp(rng.normal(scale=2.0, size=(2, k + 1)))
        worst = max(worst, abs(simplex_distance(x, y) - dist_rd(phi_coordinates(x), phi_coordinates(y))))
    record(2, "Phi is an isometry onto (R^k, dist_rd)", worst <= 1e-10,
           f"max deviation {worst:.3e} over 1000 pairs (tol 1e-10)")


def test_criterion_03_translation_length():
    rng = np.random.default_rng(3)
    # constant displacement of positive diagonal maps on a 10^3 grid
    grid = np.exp(np.stack(np.meshgrid(*[np.linspace(-3, 3, 10)] * 3, indexing="ij"), -1).reshape(-1, 3))
    omega = build_standard_simplex(2)
    lifts = grid / grid.sum(axis=1, keepdims=True)
    worst_const = 0.0
    for _ in range(10):
        lam = np.exp(rng.normal(size=3))
        disp = displacements(omega, ProjectiveMap(np.diag(lam)), lifts)
        worst_const = max(worst_const, float(np.max(np.abs(disp - 0.5 * np.log(lam.max() / lam.min())))))
    # random diagonalizable automorphisms of random polytopes
    worst_below, worst_gap = -np.inf, 0.0
    cfg = MetricConfig(grid_samples=1000, refine_points=4)
    for i in range(100):
        omega, structure = random_polytope(int(2 + i % 5), rng)
        g = ProjectiveMap(random_block_diagonal(structure, rng))
        tau = translation_length(g)
        grid_min, refined = min_displacement(omega, g, cfg)
        worst_below = max(worst_below, tau - grid_min, tau - refined)
        worst_gap = max(worst_gap, refined - tau)
    ok = worst_const <= 1e-8 and worst_below <= 1e-8 and worst_gap <= 1e-3
    record(3, "displacement and translation length", ok,
           f"diagonal grid deviation {worst_const:.3e} (tol 1e-8); 100 polytope maps: "
           f"max (tau - min) {worst_below:.3e} (tol 1e-8), refined gap {worst_gap:.3e} (tol 1e-3)")


def test_criterion_04_axioms_and_invariance():
    rng = np.random.default_rng(4)
    worst = {}
    for name, omega, group in random_domains(4):
        ax = check_metric_axioms(omega, rng, 1000, tol=1e-9)
        inv = check_projective_invariance(omega, rng, 1000, tol=1e-9, group=group)
        worst[name] = max(ax.value, inv.value)
    value = max(worst.values())
    record(4, "metric axioms and projective invariance", value <= 1e-9,
           f"worst slack {value:.3e} over {len(worst)} domains x 1000 triples (tol 1e-9)")


def test_criterion_05_chord_geodesics():
    rng = np.random.default_rng(5)
    worst = -np.inf
    domains = random_domains(5, dims=(3, 4, 6), ellipsoid_dims=(3,))
    for _, omega, _ in domains:
        worst = max(worst, check_chord_geodesics(omega, rng, pairs=1000, times=20, tol=1e-9).value)
    record(5, "chord geodesic estimate", worst <= 1e-9,
           f"worst violation {worst:.3e} over {len(domains)} domains x 1000 pairs x 20 times (slack 1e-9)")


def test_criterion_06_neighborhood_convexity():
    rng = np.random.default_rng(6)
    domains = random_domains(6, dims=(2, 3, 4, 5, 6) * 2, ellipsoid_dims=())
    failures = []
    configs = 0
    for name, omega, _ in domains:
        res = check_neighborhood_convexity(omega, rng, configs=5, probes=1000)
        configs += 5
        if not res.passed:
            failures.append(f"{name}: {res.value:.3e} > {res.limit:.3e}")
    record(6, "neighborhood convexity", not failures and configs == 50,
           f"{configs} configurations x 1000 midpoint probes, failures: {failures or 'none'}")


def test_criterion_07_hull_inflation():
    rng = np.random.default_rng(7)
    cfg = MetricConfig(grid_samples=2000)
    worst = -np.inf
    scenes = 0
    for i in range(20):
        d = int(2 + i % 3)
        if i % 2 and d >= 3:
            omega, frame = random_ellipsoid(d, rng)
            gens = [random_boost(frame, rng) for _ in range(2)]
        else:
            omega, structure = random_polytope(d, rng)
            gens = [random_block_diagonal(structure, rng) for _ in range(2)]
        group = build_group(gens, omega, commuting=True)
        r = 1.2 * max(translation_length(g) for g in group.generators) + 0.2
        rep = hull_inflation_check(group, r, cfg, tol=1e-6)
        worst = max(worst, rep.worst_displacement - rep.factor * r)
        scenes += 1
    record(7, "hull of M_r inside M_{2^(d-1) r}", worst <= 1e-6,
           f"max (displacement - 2^(d-1) r) = {worst:.3e} over {scenes} commuting-pair scenes, d <= 4 (tol 1e-6)")


def test_criterion_08_center_of_mass():
    rng = np.random.default_rng(8)
    cfg = MetricConfig()
    omega, _ = random_polytope(3, rng)
    worst_hull = 0.0
    for _ in range(10):
        pts = random_interior(omega, int(rng.integers(2, 6)), rng)
        com = center_of_mass(omega, [ProjectivePoint(p) for p in pts], cfg)
        worst_hull = max(worst_hull, hull_residual(pts, omega.lift(com)))
    pts = random_interior(omega, 4, rng)
    base = center_of_mass(omega, [ProjectivePoint(p) for p in pts], cfg)
    worst_eq = 0.0
    for _ in range(50):
        g = ProjectiveMap(random_projective(3, rng, spread=1.0))
        moved = omega.transformed(g)
        com = center_of_mass(moved, [ProjectivePoint(g.matrix @ p) for p in pts], cfg)
        worst_eq = max(worst_eq, com.distance(ProjectivePoint(g.matrix @ base.coords)))
    simplex = build_standard_simplex(2)
    sym = [ProjectivePoint(np.roll([4.0, 1.0, 1.0], i)) for i in range(3)]
    worst_sym = center_of_mass(simplex, sym, cfg).distance(ProjectivePoint([1.0, 1.0, 1.0]))
    ok = worst_hull < 1e-8 and worst_eq <= 1e-6 and worst_sym <= 1e-8
    record(8, "center of mass", ok,
           f"hull residual {worst_hull:.3e} (< 1e-8), equivariance {worst_eq:.3e} over 50 maps (tol 1e-6), "
           f"symmetric barycenter {worst_sym:.3e} (tol 1e-8)")


def _flat(data):
    rep = run_command(build_scene(data), "flat")
    assert rep.error is None, rep.error
    return rep


def test_criterion_09_flat_torus_pipeline():
    cfg = {"grid_samples": 2000}
    notes = []
    ok = True
    for d in (2, 3):
        rep = _flat({"template": {"name": "example-3.2", "d": d}, "config": cfg})
        out, res = rep.outputs, rep.residuals
        good = (out["dim"] == d and out["rank"] == d and out["cocompact"]
                and res["vertex_fix_residual"] < 1e-9 and res["simplex_min_residual"] < 1e-6)
        ok &= good
        notes.append(f"example-3.2 d={d}: dim {out['dim']} rank {out['rank']} cocompact {out['cocompact']} "
                     f"fix {res['vertex_fix_residual']:.1e} min {res['simplex_min_residual']:.1e}")
    rep = _flat({"template": {"name": "example-3.3", "d": 2, "w": 1.0, "k": 1}, "config": cfg})
    out = rep.outputs
    good = out["rank"] == 1 and out["dim"] == 2 and not out["cocompact"]
    ok &= good
    notes.append(f"example-3.3: dim {out['dim']} rank {out['rank']} cocompact {out['cocompact']}")
    finite = {"domain": {"kind": "simplex", "k": 2},
              "groups": {"F": {"generators": [np.eye(3)[[1, 2, 0]].tolist()], "commuting": True}},
              "config": cfg}
    rep = _flat(finite)
    centre = ProjectivePoint(rep.outputs["vertices"][0])
    good = (rep.outputs["dim"] == 0 and rep.outputs["rank"] == 0
            and centre.isclose(ProjectivePoint([1.0, 1.0, 1.0]), 1e-8))
    ok &= good
    notes.append(f"finite group: dim {rep.outputs['dim']} at fixed point {good}")
    record(9, "flat torus pipeline", ok, "; ".join(notes))


def test_criterion_10_face_dynamics():
    omega = build_standard_simplex(2)
    rep = face_dynamics_check(omega, ProjectiveMap(np.diag([4.0, 2.0, 1.0])), ProjectivePoint([1.0, 1.0, 1.0]))
    image = rep.limit.image[:, 0]
    image_ok = rep.limit.rank == 1 and np.allclose(np.abs(image), [1.0, 0.0, 0.0], atol=1e-9)
    worst = max(rep.residuals.values())
    ok = rep.passed and image_ok and worst < 1e-9
    record(10, "face dynamics of diag(4,2,1) powers", ok,
           f"verdicts {rep.verdicts}, image = span(e1) {image_ok}, max residual {worst:.3e} (< 1e-9)")


def test_criterion_11_product_construction():
    interval = build_standard_simplex(1)
    base = build_group([np.diag([2.0, 1.0])], interval)
    star, c_star, l_star = build_product_example(interval, base)
    bases = [ProjectivePoint(z) for z in star.sample_interior(4, seed=0)]
    acc = orbital_limit_sample(l_star, bases, 20)
    hull_dim = affine_span_dim(star, acc)
    record(11, "orbital limit set hull of the product example", hull_dim == star.dim - 1,
           f"hull span dimension {hull_dim}, domain dimension {star.dim - 1}, {len(acc)} limit samples")


def test_criterion_12_determinism(tmp_path):
    scene = build_scene({"template": {"name": "random-polytope", "d": 3, "seed": 3},
                         "config": {"grid_samples": 2000}})
    commands = ["dist", "tau", "displacement", "minset", "mr", "hull-check", "com", "orbit",
                "limitset", "flat", "echo"]
    scene.params.update({"y": "x"})
    differing = [c for c in commands
                 if render(run_command(scene, c, seed=5)) != render(run_command(scene, c, seed=5))]
    path = tmp_path / "verify.json"
    path.write_text(json.dumps({"template": {"name": "random-polytope", "d": 3},
                                "verify": {"random_scenes": 10}}))
    runs = [subprocess.run([sys.executable, "-m", "hilbert_flats.cli", "verify", "--scene", str(path),
                            "--seed", "0"], capture_output=True, text=True) for _ in range(2)]
    codes = [r.returncode for r in runs]
    same = runs[0].stdout == runs[1].stdout and runs[0].stdout != ""
    ok = not differing and codes == [0, 0] and same
    record(12, "determinism", ok,
           f"{len(commands)} commands rerun identically: {not differing} {differing or ''}; "
           f"verify on 10 seeded scenes exit codes {codes}, byte-identical across processes {same}")
    assert main(["verify", "--scene", str(path), "--out", str(tmp_path / "v.json")]) == 0
