"""Acceptance criteria 1-10; each test prints one ``criterion NN: PASS/FAIL`` line."""
import os
import random
import subprocess
import sys
import time

import numpy as np
import pytest

from gaugestack.fuzz import check_truncation_case, random_over_objects
from gaugestack.gauge import FLAVORS, GaugeContext, SiteCalculus, classifying_presheaf, path2, path3, square, strip
from gaugestack.gauge.concretify import compare_with_vertical, concretify, naive_concretify_FS, too_many_objects_witness
from gaugestack.gauge.stacks import (data_stack, essentially_surjective_report, gbun, gcon_vertical, j_map,
                                     lorenz_sol_stack, omega_stack, sol_stack)
from gaugestack.groupoid import J, cyclic, group_groupoid, is_weak_equivalence, pushout_product, symmetric
from gaugestack.groupoid.family import FunctorCensus, small_groupoids
from gaugestack.groupoid.model import table_functor
from gaugestack.presheaf import circle3_site, constant_presheaf, descent_comparison_for, interval_site, is_stack
from gaugestack.presheaf.site import SAMPLE_SITES
from gaugestack.ym.dec import CubicalComplex, codifferential, d, hodge, inner
from gaugestack.ym.dynamics import (LorentzGrid, cauchy_solve, data_extract, extension_kernel_dimension,
                                    gauge_fix_solve, gauge_act, lorenz_residual_max, random_datum,
                                    slice_gauge_match, ym_residual_max)

from oracles import conjugacy_class_count, triangle_cocycle_classes

ROOT = os.path.join(os.path.dirname(os.path.abspath(__file__)), "..")
INST = os.path.join(ROOT, "instances")
LATTICES = {"path3": path3, "square": square, "strip": strip}


def test_criterion_01_model_axioms(criterion):
    t = time.perf_counter()
    c = FunctorCensus(small_groupoids())
    n1, f1 = c.lifting_failures("acof", "fib")
    n2, f2 = c.lifting_failures("cof", "afib")
    n3, f3 = c.two_out_of_three_failures()
    dt = time.perf_counter() - t
    ok = not f1 and not f2 and not f3 and dt <= 60
    criterion(1, ok, f"{len(c.groupoids)} groupoids, {n1} (acof, fib) and {n2} (cof, afib) squares lift, "
                     f"{n3} composable triples satisfy 2-out-of-3, {dt:.1f} s")
    assert ok, (f1[:3], f2[:3], f3[:3], dt)


def test_criterion_02_descent_oracle(criterion):
    S = circle3_site()
    got, want = [], []
    for G in (cyclic(2), cyclic(3), symmetric(3)):
        H, _ = descent_comparison_for(constant_presheaf(S, group_groupoid(G), "BG"), "C", S.cover("C", "arcs"))
        got.append(len(H.component_reps()))
        want.append(triangle_cocycle_classes(G))
        assert want[-1] == conjugacy_class_count(G)
    ok = got == want == [2, 3, 3]
    criterion(2, ok, f"pi0 holim for Z2, Z3, S3 = {got}, orbit oracle {want}")
    assert ok


def _gauge_stacks(ctx):
    out = [("GCon", gcon_vertical(ctx)), ("GBun", gbun(ctx)), ("GSol", sol_stack(ctx))]
    out += [(f"Omega{p}", omega_stack(ctx, p)) for p in range(ctx.inst.m + 1)]
    if ctx.inst.m == 2:
        out.append(("GData", data_stack(ctx)))
    return out


def test_criterion_03_stack_checker(criterion):
    checked, bad = [], []
    for sname in ("interval", "twopoint"):
        S = SAMPLE_SITES[sname]()
        for G in (cyclic(2), symmetric(3)):
            for fl in FLAVORS:
                checked.append(f"BG[{fl}]({G.name})@{sname}")
                if not is_stack(classifying_presheaf(SiteCalculus(S, G), fl)).ok:
                    bad.append(checked[-1])
    S = circle3_site()
    for G in (cyclic(2), symmetric(3)):
        checked.append(f"BG[local_system]({G.name})@circle3")
        if not is_stack(classifying_presheaf(SiteCalculus(S, G), "local_system")).ok:
            bad.append(checked[-1])
    site = interval_site()
    for lname, mk in LATTICES.items():
        ctx = GaugeContext(mk(cyclic(2)), site)
        for name, X in _gauge_stacks(ctx):
            checked.append(f"{name}({lname})")
            if not is_stack(X).ok:
                bad.append(checked[-1])
    r = is_stack(constant_presheaf(S, group_groupoid(cyclic(2)), "BZ2"))
    witness_ok = (not r.ok) and r.witness is not None and tuple(r.witness[:2]) == ("C", "arcs")
    ok = not bad and witness_ok
    criterion(3, ok, f"{len(checked) - len(bad)}/{len(checked)} presheaves are stacks; constant BZ2 fails "
                     f"at {r.witness[:2] if r.witness else None}")
    assert ok, bad


def test_criterion_04_truncation_suite(criterion):
    cases = random_over_objects(7, 102)
    sites = {c.site for c in cases}
    bad = []
    for k, case in enumerate(cases):
        r = check_truncation_case(case)
        if not r.ok:
            bad.append((k, case.label, r.detail))
    ok = len(cases) >= 100 and len(sites) == 3 and not bad
    criterion(4, ok, f"{len(cases) - len(bad)}/{len(cases)} fuzzed over-objects on {len(sites)} sites pass "
                     f"S-1-locality, pi0-epi, Im → Im1 local weq and the empty-or-point law")
    assert ok, bad[:3]


def test_criterion_05_concretification(criterion):
    rows = []
    good = True
    for lname, mk in LATTICES.items():
        r = compare_with_vertical(concretify(GaugeContext(mk(cyclic(2)), interval_site())))
        rows.append(f"{lname}={'iso' if r else 'not iso'}")
        good = good and bool(r)
    nc = naive_concretify_FS(GaugeContext(path2(cyclic(2)), interval_site()))
    w = too_many_objects_witness(nc, "V1")
    print(f"G~Con witness on path2 over V1: {w}")
    ok = good and w is not None
    criterion(5, ok, f"Im(c) ≅ GCon on {', '.join(rows)}; G~Con(V1) witness found = {w is not None}")
    assert ok


def test_criterion_06_pushout_product(criterion):
    t = time.perf_counter()
    census = FunctorCensus(small_groupoids())
    cofs = [table_functor(census.skeletons[a], census.skeletons[b], tb)
            for (a, b), L in census.kinds["cof"].items() for tb in L]
    # F □ F′ is a cofibration iff its object map is injective, and that map is a function of
    # the object maps of F and F′ alone: one representative per object-map class covers every pair
    classes: dict = {}
    for F in cofs:
        tgt = list(F.target.objects)
        key = (len(F.source.objects), len(tgt), tuple(tgt.index(F.obj(x)) for x in F.source.objects))
        classes.setdefault(key, []).append(F)
    reps = [L[0] for L in classes.values()]
    bad_pairs = [(F, G) for F in reps for G in reps if not pushout_product(F, G).is_cofibration()]
    rng = random.Random(6)
    for _ in range(2000):
        F, G = rng.choice(cofs), rng.choice(cofs)
        if not pushout_product(F, G).is_cofibration():
            bad_pairs.append((F, G))
    covered = sum(len(L) for L in classes.values()) ** 2
    bad_j = 0
    for F in cofs:
        pp = pushout_product(F, J())
        if not (pp.is_cofibration() and pp.functor is not None and is_weak_equivalence(pp.functor)):
            bad_j += 1
    dt = time.perf_counter() - t
    ok = not bad_pairs and bad_j == 0 and dt <= 60
    criterion(6, ok, f"{covered} cofibration pairs via {len(reps)}² object-map classes give cofibrations; "
                     f"F □ J acyclic for all {len(cofs)} cofibrations; {dt:.1f} s")
    assert ok


def test_criterion_07_dec(criterion):
    rng = np.random.default_rng(2025)
    worst, dd, stars, n_pairs = 0.0, 0, True, 0
    grids = [((6, 5), (0.5, 1.0)), ((4, 5, 3), (0.3, 1.0, 0.7)), ((8, 8), (1.0, 1.0))]
    for shape, spacing in grids:
        for lorentzian in (True, False):
            cx = CubicalComplex(shape, periodic=(True,) * len(shape), spacing=spacing, lorentzian=lorentzian)
            for p in range(cx.m - 1):
                dd = max(dd, abs(cx.D(p + 1) @ cx.D(p)).max(), abs(cx.D_dual(p + 1) @ cx.D_dual(p)).max())
            for p in range(1, cx.m + 1):
                A = rng.standard_normal((1000, cx.n_cells(p - 1)))
                B = rng.standard_normal((1000, cx.n_cells(p)))
                for a, b in zip(A, B):
                    lhs = inner(cx, d(cx, a, p - 1), b, p)
                    rhs = inner(cx, a, codifferential(cx, b, p), p - 1)
                    worst = max(worst, abs(lhs - rhs) / max(1.0, abs(lhs)))
                n_pairs += 1000
            s = 1 if lorentzian else 0
            for p in range(cx.m + 1):
                w = rng.integers(-5, 6, cx.n_cells(p)).astype(float)
                back = hodge(cx, hodge(cx, w, p), p, dual=True)
                stars = stars and np.array_equal(np.round(back, 12), (-1) ** (p * (cx.m - p) + s) * w)
    ok = dd == 0 and worst <= 1e-12 and stars
    criterion(7, ok, f"d∘d max {dd}, adjointness error {worst:.2e} over {n_pairs} cochain pairs, "
                     f"⋆⋆ sign law {'exact' if stars else 'violated'}")
    assert ok


def _twenty_fields():
    grid = LorentzGrid(64, 64, 0.5 / 64, 1 / 64)
    rng = np.random.default_rng(64)
    return grid, [random_datum(grid, rng) for _ in range(20)]


def test_criterion_08_cauchy(criterion):
    t = time.perf_counter()
    grid, data = _twenty_fields()
    worst, matched = 0.0, 0
    for datum in data:
        A = cauchy_solve(grid, datum)
        worst = max(worst, ym_residual_max(grid, A))
        matched += slice_gauge_match(grid, data_extract(grid, A), datum) is not None
    kernel = extension_kernel_dimension(grid)
    dt = time.perf_counter() - t
    ok = worst <= 1e-10 and matched == 20 and kernel == 0 and dt <= 30 and grid.cfl == 0.5
    criterion(8, ok, f"64×64, CFL {grid.cfl}: ym_residual_max {worst:.2e}, {matched}/20 round-trips, "
                     f"kernel dimension {kernel}, {dt:.1f} s")
    assert ok


def test_criterion_09_lorenz(criterion):
    t = time.perf_counter()
    grid, data = _twenty_fields()
    worst = 0.0
    for datum in data:
        A = cauchy_solve(grid, datum)
        B = gauge_act(grid, A, gauge_fix_solve(grid, A))
        worst = max(worst, lorenz_residual_max(grid, B))
    surj = {}
    for lname in ("square", "strip"):
        ctx = GaugeContext(LATTICES[lname](cyclic(2)), interval_site())
        Sol = sol_stack(ctx)
        surj[lname] = all(ok for _, ok, _ in essentially_surjective_report(j_map(lorenz_sol_stack(ctx, Sol), Sol)))
    dt = time.perf_counter() - t
    ok = worst < 1e-8 and all(surj.values()) and dt <= 60
    criterion(9, ok, f"lorenz_residual_max {worst:.2e} over 20 fields; j_M essentially surjective on "
                     f"{', '.join(k for k, v in surj.items() if v)}; {dt:.1f} s")
    assert ok


CLI_RUNS = [
    ["report", "--seed", "5"],
    ["holim", "circle3.site", "bg_s3.psh", "C"],
    ["check-stack", "circle3.site", "const_bz2.psh"],
    ["check-stack", "circle3.site", "bg_s3.psh", "--format", "json-lines"],
    ["s1-local", "--seed", "0", "--count", "3"],
    ["im-vs-im1", "--seed", "0", "--count", "3", "--format", "json-lines"],
    ["concretify", "path3.lat"],
    ["compare-fs", "path2.lat"],
    ["curvature", "square_z3.lat", "square_curved.gf"],
    ["cauchy", "grid2d.grd", "datum.gf", "-o", "{out}"],
    ["cauchy-check", "small.grd", "small_datum.gf", "--gauge-family", "nonsmooth"],
    ["lorenz-fix", "small.grd", "small_solution.gf"],
    ["weq", "collapse.fun"],
]


def _run_cli(argv, out_path, hashseed):
    env = dict(os.environ, PYTHONHASHSEED=str(hashseed))
    writes = "{out}" in argv
    argv = [out_path if a == "{out}" else a for a in argv]
    r = subprocess.run([sys.executable, "-m", "gaugestack", *argv], cwd=INST, capture_output=True,
                       env=env, timeout=300)
    extra = b""
    if writes:
        with open(out_path, "rb") as fh:
            extra = fh.read()
        os.remove(out_path)
    return r.returncode, r.stdout, extra


def test_criterion_10_determinism(criterion, tmp_path):
    diffs = []
    for k, argv in enumerate(CLI_RUNS):
        a = _run_cli(argv, str(tmp_path / "run.out"), 1)
        b = _run_cli(argv, str(tmp_path / "run.out"), 2)
        if a != b or a[0] not in (0, 1):
            diffs.append(argv[0])
    ok = not diffs
    criterion(10, ok, f"{len(CLI_RUNS) - len(diffs)}/{len(CLI_RUNS)} CLI reports byte-identical across two runs")
    assert ok, diffs
