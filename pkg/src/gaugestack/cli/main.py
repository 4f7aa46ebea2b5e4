"""Command-line entry point: ``gaugestack <subcommand> [files] [options]``.

Exit codes: 0 pass, 1 mathematical failure (a witness is printed), 2 input error.
"""
from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from ..errors import ContractViolation, EnumerationLimit, ParseError, StructuralError
from ..groupoid.core import DEFAULT_MAX_ENUMERATION
from . import formats as fm

PASS, FAIL, INPUT_ERROR = 0, 1, 2
SUBCOMMANDS = ("check-groupoid", "weq", "holim", "hofib", "check-stack", "sheafify", "s1-local",
               "im-vs-im1", "concretify", "compare-fs", "curvature", "ym-residual", "check-sol",
               "extract-data", "cauchy", "cauchy-check", "lorenz-fix", "report")


class InputError(Exception):
    pass


def _plain(v):
    if isinstance(v, (list, tuple)):
        return [_plain(x) for x in v]
    if isinstance(v, dict):
        return {str(k): _plain(x) for k, x in v.items()}
    if isinstance(v, (np.floating, float)):
        return float(v)
    if isinstance(v, (np.integer,)):
        return int(v)
    if v is None or isinstance(v, (bool, int, str)):
        return v
    return repr(v)


class Reporter:
    """Fixed-order output in text or json-lines."""

    def __init__(self, fmt: str, out):
        self.fmt = fmt
        self.out = out

    def emit(self, event: str, text: str, **fields):
        if self.fmt == "json-lines":
            rec = {"event": event}
            rec.update({k: _plain(v) for k, v in fields.items()})
            self.out.write(json.dumps(rec, sort_keys=True, ensure_ascii=False) + "\n")
        else:
            self.out.write(text + "\n")

    def result(self, ok: bool, witness=None) -> int:
        if ok:
            self.emit("result", "result: pass", ok=True)
            return PASS
        self.emit("result", "result: fail" + (f" (witness: {witness})" if witness is not None else ""),
                  ok=False, witness=witness)
        return FAIL


def _sci(x: float) -> str:
    return f"{x:.1e}"


# -- loading helpers -----------------------------------------------------------------------

def _kind_of(path: str) -> str:
    try:
        with open(path, encoding="utf-8") as fh:
            for line in fh:
                if line.startswith("gaugestack:"):
                    return line.split(":", 1)[1].strip()
    except OSError as e:
        raise ParseError(f"cannot read file: {e.strerror}", 0, 0, path) from None
    raise ParseError("missing 'gaugestack:' header", 1, 1, path)


def load_site(path):
    return fm.parse_site(fm.parse_file(path, "site"))


def load_presheaf(path, site):
    return fm.parse_presheaf(fm.parse_file(path, "presheaf")).build(site)


def load_lattice(path):
    return fm.parse_lattice(fm.parse_file(path, "lattice"))


def load_grid(path):
    return fm.parse_grid(fm.parse_file(path, "grid"))


def _interval():
    from ..presheaf.site import interval_site
    return interval_site()


def _ctx(inst, args):
    from ..gauge.stacks import GaugeContext
    return GaugeContext(inst, _interval(), args.max_enumeration)


# -- groupoid-core -------------------------------------------------------------------------

def cmd_check_groupoid(args, rep: Reporter) -> int:
    spec = fm.parse_groupoid(fm.parse_file(args.files[0], "groupoid"))
    try:
        G = spec.build()
    except StructuralError as e:
        raise InputError(str(e)) from None
    reps = G.component_reps()
    rep.emit("groupoid", f"groupoid {G.name}: {G.n_objects()} objects, {sum(1 for _ in G.morphisms())} "
             f"morphisms, {len(reps)} components", name=G.name, objects=G.n_objects(),
             morphisms=sum(1 for _ in G.morphisms()), components=len(reps))
    for x in reps:
        rep.emit("component", f"component of {x!r}: vertex group order {G.aut_order(x)}",
                 rep=x, aut_order=G.aut_order(x))
    return rep.result(True)


def cmd_weq(args, rep: Reporter) -> int:
    from ..groupoid.model import fibration_report, is_cofibration, weak_equivalence_report
    spec = fm.parse_functor(fm.parse_file(args.files[0], "functor"))
    F = spec.build()
    ok, why = weak_equivalence_report(F)
    fib, fwhy = fibration_report(F)
    cof = is_cofibration(F)
    rep.emit("functor", f"functor {spec.name}: {spec.source.name} → {spec.target.name}",
             name=spec.name, source=spec.source.name, target=spec.target.name)
    rep.emit("fibration", f"fibration: {str(fib).lower()}" + ("" if fib else f" ({fwhy})"),
             fibration=fib, reason=fwhy)
    rep.emit("cofibration", f"cofibration: {str(cof).lower()}", cofibration=cof)
    rep.emit("weak_equivalence", f"weak_equivalence: {str(ok).lower()}" + ("" if ok else f" ({why})"),
             weak_equivalence=ok, reason=why)
    return rep.result(ok, None if ok else why)


def cmd_hofib(args, rep: Reporter) -> int:
    from ..groupoid.homotopy import FiberProduct, HomotopyFiberProduct
    if len(args.files) != 2:
        raise InputError("hofib needs two functor files with a common target")
    s1 = fm.parse_functor(fm.parse_file(args.files[0], "functor"))
    s2 = fm.parse_functor(fm.parse_file(args.files[1], "functor"))
    if s1.target != s2.target:
        raise InputError(f"functors have different targets ({s1.target.name}, {s2.target.name})")
    f1, f2 = s1.build(), s2.build()
    H = HomotopyFiberProduct(f1, f2, max_enumeration=args.max_enumeration)
    reps = H.component_reps()
    rep.emit("hofib", f"homotopy fiber product: {H.n_objects()} objects, {len(reps)} components",
             objects=H.n_objects(), components=len(reps))
    for x in reps:
        rep.emit("component", f"component of {x!r}: automorphism group order {H.aut_order(x)}",
                 rep=x, aut_order=H.aut_order(x))
    P = FiberProduct(f1, f2)
    rep.emit("strict", f"strict fiber product: {P.n_objects()} objects, {P.n_components()} components",
             objects=P.n_objects(), components=P.n_components())
    return rep.result(True)


# -- site-presheaf -------------------------------------------------------------------------

def cmd_holim(args, rep: Reporter) -> int:
    from ..presheaf.presheaf import descent_comparison_for
    from ..groupoid.model import weak_equivalence_report
    if len(args.files) != 3:
        raise InputError("holim needs SITE PRESHEAF OBJECT")
    site = load_site(args.files[0])
    X = load_presheaf(args.files[1], site)
    U = args.files[2]
    if U not in site.objects:
        raise InputError(f"unknown site object {U!r}")
    covers = [c for c in site.covers[U] if not c.is_trivial()]
    if args.cover:
        covers = [c for c in covers if c.name == args.cover]
    if not covers:
        raise InputError(f"object {U!r} has no non-trivial cover" + (f" named {args.cover!r}" if args.cover else ""))
    cover = covers[0]
    H, c = descent_comparison_for(X, U, cover, args.max_enumeration)
    reps = H.component_reps()
    rep.emit("holim", f"holim {X.name} over {U} cover {cover.name} ({', '.join(cover.members)}): "
             f"pi0 = {len(reps)}", object=U, cover=cover.name, members=list(cover.members), pi0=len(reps))
    for x in reps:
        rep.emit("component", f"component automorphism group order {H.aut_order(x)}", aut_order=H.aut_order(x))
    ok, why = weak_equivalence_report(c)
    rep.emit("comparison", f"{X.name}({U}) → holim weak equivalence: {str(ok).lower()}", ok=ok, reason=why)
    return rep.result(True)


def cmd_check_stack(args, rep: Reporter) -> int:
    from ..presheaf.presheaf import is_stack
    if len(args.files) != 2:
        raise InputError("check-stack needs SITE PRESHEAF")
    site = load_site(args.files[0])
    X = load_presheaf(args.files[1], site)
    r = is_stack(X, args.max_enumeration)
    rep.emit("stack", f"{X.name} on {site.name}: stack = {str(r.ok).lower()}", presheaf=X.name,
             site=site.name, stack=r.ok)
    if r.ok:
        return rep.result(True)
    U, cname, why = r.witness
    cover = next(c for c in site.covers[U] if c.name == cname)
    w = f"object {U}, cover {cname} = ({', '.join(cover.members)}): {why}"
    rep.emit("witness", f"witness: {w}", object=U, cover=cname, members=list(cover.members), reason=why)
    return rep.result(False, f"{U} / {cname}")


def cmd_sheafify(args, rep: Reporter) -> int:
    from ..presheaf.presheaf import pi0, sheafify
    site = load_site(args.files[0])
    X = load_presheaf(args.files[1], site)
    P = pi0(X)
    S = sheafify(P)
    for U in site.objects:
        a, b = len(P.stage(U)), len(S.stage(U))
        rep.emit("stage", f"{U}: pi0 = {a}, sheafified pi0 = {b}", object=U, pi0=a, sheafified=b)
    return rep.result(True)


# -- over-truncation -----------------------------------------------------------------------

def _fuzz_cases(args):
    from ..fuzz import random_over_objects
    return random_over_objects(args.seed, args.count)


def cmd_s1_local(args, rep: Reporter) -> int:
    from ..fuzz import check_truncation_case
    bad = None
    for k, case in enumerate(_fuzz_cases(args)):
        r = check_truncation_case(case)
        ok = r.s_minus1_local and r.empty_or_point
        rep.emit("case", f"case {k} [{case.site}] {case.label}: Im1 S-1-local = {str(r.s_minus1_local).lower()}, "
                 f"mapping groupoids empty-or-point = {str(r.empty_or_point).lower()}", case=k, site=case.site,
                 label=case.label, s_minus1_local=r.s_minus1_local, empty_or_point=r.empty_or_point)
        if not ok and bad is None:
            bad = f"case {k}: {'; '.join(r.detail)}"
    return rep.result(bad is None, bad)


def cmd_im_vs_im1(args, rep: Reporter) -> int:
    from ..fuzz import check_truncation_case
    bad = None
    for k, case in enumerate(_fuzz_cases(args)):
        r = check_truncation_case(case)
        ok = r.pi0_epi == "certified" and r.im_im1_weq
        rep.emit("case", f"case {k} [{case.site}] {case.label}: X → Im1 pi0-epi {r.pi0_epi}, "
                 f"Im → Im1 local weq = {str(r.im_im1_weq).lower()}", case=k, site=case.site,
                 label=case.label, pi0_epi=r.pi0_epi, im_im1_weq=r.im_im1_weq)
        if not ok and bad is None:
            bad = f"case {k}: {'; '.join(r.detail) or r.pi0_epi}"
    return rep.result(bad is None, bad)


# -- gauge-stacks --------------------------------------------------------------------------

def cmd_concretify(args, rep: Reporter) -> int:
    from ..gauge.concretify import compare_with_vertical, concretify
    inst = load_lattice(args.files[0])
    res = compare_with_vertical(concretify(_ctx(inst, args)))
    for U, n_im, n_gc, iso, nat in res.rows:
        rep.emit("stage", f"{U}: Im(c) {n_im} objects, GCon {n_gc} objects, isomorphic = {str(iso).lower()}, "
                 f"natural = {str(nat).lower()}", object=U, image=n_im, gcon=n_gc, iso=iso, natural=nat)
    bad = next((r[0] for r in res.rows if not (r[3] and r[4])), None)
    return rep.result(res.ok, None if res.ok else f"stage {bad}")


def cmd_compare_fs(args, rep: Reporter) -> int:
    from ..gauge.concretify import naive_concretify_FS, recovers_gcon, too_many_objects_witness
    inst = load_lattice(args.files[0])
    if len(inst.charts) != 1:
        raise InputError("compare-fs needs a single-chart lattice")
    ctx = _ctx(inst, args)
    nc = naive_concretify_FS(ctx)
    U = args.object or "V1"
    if U not in ctx.site.objects:
        raise InputError(f"unknown parameter object {U!r}")
    w = too_many_objects_witness(nc, U)
    if w is None:
        rep.emit("witness", f"{U}: no object without a morphism to an identity family", object=U, found=False)
    else:
        obj, n = w
        rep.emit("witness", f"{U}: object {obj!r} has no morphism to any of the {n} objects with h = e",
                 object=U, found=True, witness=obj, checked=n)
    rec = recovers_gcon(nc)
    for V, ok, why in rec:
        rep.emit("recovers", f"{V}: GCon → Im(GCon → G̃Con) weak equivalence = {str(ok).lower()}",
                 object=V, ok=ok, reason=why)
    ok = w is not None and all(r[1] for r in rec)
    return rep.result(ok, None if ok else "no witness or image mismatch")


def _load_lattice_field(args):
    if len(args.files) != 2:
        raise InputError("expected LATTICE FIELD")
    inst = load_lattice(args.files[0])
    obj = fm.parse_lattice_field(fm.parse_file(args.files[1], "lattice_field"), inst)
    return inst, obj


def cmd_curvature(args, rep: Reporter) -> int:
    inst, obj = _load_lattice_field(args)
    if inst.m < 2:
        raise InputError("curvature needs a 2D lattice")
    F, _ = inst.curvature_point(obj)
    for i, c in enumerate(inst.charts):
        cells = inst.cells(i, 2)
        vals = [f"{list(n)}:{a}" for (_, n), a in zip(cells, F[i])]
        rep.emit("chart", f"chart {c.name}: F = {' '.join(vals) or '(no plaquettes)'}", chart=c.name,
                 plaquettes=[[list(n), a] for (_, n), a in zip(cells, F[i])])
    ok = inst.compatibility_failure("form", 2, (F, obj[1])) is None
    rep.emit("covariance", f"curvature compatible across overlaps: {str(ok).lower()}", ok=ok)
    return rep.result(ok)


def cmd_check_sol(args, rep: Reporter) -> int:
    inst, obj = _load_lattice_field(args)
    r = inst.ym_residual_point(obj)
    witness = None
    for i, c in enumerate(inst.charts):
        nz = [(cell, x) for cell, x in zip(inst.cells(i, 1), r[i]) if x != 0]
        rep.emit("chart", f"chart {c.name}: nonzero residual on {len(nz)} edges", chart=c.name, nonzero=len(nz))
        if nz and witness is None:
            (I, n), x = nz[0]
            witness = f"chart {c.name}, edge along axis {I[0]} at {list(n)}, residual {x}"
    return rep.result(witness is None, witness)


# -- ym-dynamics ---------------------------------------------------------------------------

def _grid_field(args):
    if len(args.files) != 2:
        raise InputError("expected GRID FIELD")
    grid = load_grid(args.files[0])
    A = fm.parse_grid_field(fm.parse_file(args.files[1], "grid_field"), grid)
    return grid, A


def _grid_line(grid):
    return (f"grid {grid.nt}x{grid.nx}, dt = {grid.dt:.6g}, dx = {grid.dx:.6g}, CFL = {grid.cfl:.6g}, "
            f"slice t0 = {grid.t0}")


def cmd_ym_residual(args, rep: Reporter) -> int:
    from ..ym.dynamics import ym_residual_max
    grid, A = _grid_field(args)
    tol = args.tolerance if args.tolerance is not None else 1e-10
    r = ym_residual_max(grid, A)
    rep.emit("grid", _grid_line(grid), nt=grid.nt, nx=grid.nx, cfl=grid.cfl)
    rep.emit("residual", f"ym_residual_max = {r:.3e}", ym_residual_max=r)
    return rep.result(r <= tol, None if r <= tol else f"ym_residual_max {r:.3e} > {_sci(tol)}")


def cmd_extract_data(args, rep: Reporter) -> int:
    from ..ym.dynamics import constraint_residual, data_extract
    grid, A = _grid_field(args)
    d = data_extract(grid, A)
    c = float(np.max(np.abs(constraint_residual(grid, d))))
    rep.emit("grid", _grid_line(grid), nt=grid.nt, nx=grid.nx, cfl=grid.cfl)
    rep.emit("constraint", f"constraint residual max = {c:.3e}", constraint_residual_max=c)
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(fm.dump_datum(d))
        rep.emit("output", f"datum written to {args.output}", path=args.output)
    else:
        rep.emit("datum", fm.dump_datum(d).rstrip("\n"), A=list(d.A), E=list(d.E))
    return rep.result(True)


def _datum_args(args):
    if len(args.files) != 2:
        raise InputError("expected GRID DATUM")
    grid = load_grid(args.files[0])
    d = fm.parse_datum(fm.parse_file(args.files[1], "datum"), grid)
    return grid, d


def cmd_cauchy(args, rep: Reporter) -> int:
    from ..ym.dynamics import cauchy_solve, data_extract, slice_gauge_match, ym_residual_max
    grid, d = _datum_args(args)
    tol = args.tolerance if args.tolerance is not None else 1e-10
    rep.emit("grid", _grid_line(grid), nt=grid.nt, nx=grid.nx, cfl=grid.cfl)
    A = cauchy_solve(grid, d, tol)
    r = ym_residual_max(grid, A)
    if r < tol:
        rep.emit("residual", f"ym_residual_max < {_sci(tol)}", ym_residual_max=r, tolerance=tol)
    else:
        rep.emit("residual", f"ym_residual_max = {r:.3e} >= {_sci(tol)}", ym_residual_max=r, tolerance=tol)
    h = slice_gauge_match(grid, data_extract(grid, A), d, tol)
    rep.emit("roundtrip", "data_extract(solution) ≅ datum: " + ("true" if h is not None else "false"),
             roundtrip=h is not None)
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(fm.dump_grid_field(grid, A))
        rep.emit("output", f"field written to {args.output}", path=args.output)
    ok = r < tol and h is not None
    return rep.result(ok, None if ok else "residual or round trip")


def cmd_cauchy_check(args, rep: Reporter) -> int:
    from ..ym.dynamics import cauchy_wellposed_check
    grid, d = _datum_args(args)
    site = _interval()
    U = args.object or "I"
    if U not in site.objects:
        raise InputError(f"unknown parameter object {U!r}")
    reg = site.region(U)
    data = [d] * len(reg.components)
    family = None
    if args.gauge_family != "none":
        rng = np.random.default_rng(args.seed)
        base = np.cumsum(rng.standard_normal(grid.nx))
        family = {}
        for comp in reg.components:
            for k, v in enumerate(sorted(comp, key=str)):
                family[v] = base + (k if args.gauge_family == "nonsmooth" else 0.0)
    rep.emit("grid", _grid_line(grid), nt=grid.nt, nx=grid.nx, cfl=grid.cfl)
    r = cauchy_wellposed_check(grid, site, U, data, family, args.tolerance or 1e-10)
    for what, where, ok, detail in r.rows:
        rep.emit(what, f"{what} [{U} component {where}]: {str(ok).lower()} ({detail})", check=what,
                 component=where, ok=ok, detail=detail)
    bad = next((f"{w} at component {c}: {det}" for w, c, ok, det in r.rows if not ok), None)
    return rep.result(r.ok, bad)


def cmd_lorenz_fix(args, rep: Reporter) -> int:
    if args.files and _kind_of(args.files[0]) == "lattice":
        return _lorenz_lattice(args, rep)
    from ..ym.dynamics import gauge_act, gauge_fix_solve, lorenz_residual_max
    grid, A = _grid_field(args)
    tol = args.tolerance if args.tolerance is not None else 1e-8
    rep.emit("grid", _grid_line(grid), nt=grid.nt, nx=grid.nx, cfl=grid.cfl)
    before = lorenz_residual_max(grid, A)
    rep.emit("before", f"lorenz_residual_max before = {before:.3e}", lorenz_residual_max=before)
    try:
        chi = gauge_fix_solve(grid, A, tol)
    except ContractViolation as e:
        rep.emit("error", str(e), error=str(e))
        return rep.result(False, str(e))
    after = lorenz_residual_max(grid, gauge_act(grid, A, chi))
    rep.emit("after", f"lorenz_residual_max after < {_sci(tol)}", lorenz_residual_max=after, tolerance=tol)
    return rep.result(after < tol)


def _lorenz_lattice(args, rep: Reporter) -> int:
    from ..gauge.stacks import essentially_surjective_report, j_map, lorenz_sol_stack, sol_stack
    inst = load_lattice(args.files[0])
    ctx = _ctx(inst, args)
    Sol = sol_stack(ctx)
    rows = essentially_surjective_report(j_map(lorenz_sol_stack(ctx, Sol), Sol))
    for U, ok, miss in rows:
        rep.emit("stage", f"{U}: j_M essentially surjective = {str(ok).lower()}", object=U, ok=ok,
                 witness=miss)
    bad = next((f"{U}: {miss!r}" for U, ok, miss in rows if not ok), None)
    return rep.result(bad is None, bad)


# -- report --------------------------------------------------------------------------------

def cmd_report(args, rep: Reporter) -> int:
    from ..gauge.classifying import SiteCalculus, classifying_presheaf
    from ..gauge.concretify import compare_with_vertical, concretify
    from ..gauge.lattice import SAMPLE_LATTICES
    from ..gauge.stacks import GaugeContext
    from ..groupoid.groups import by_name
    from ..presheaf.presheaf import descent_comparison_for, is_stack
    from ..presheaf.site import circle3_site, interval_site
    from ..ym.dec import CubicalComplex, d, inner, codifferential
    from ..ym.dynamics import (LorentzGrid, cauchy_solve, gauge_act, gauge_fix_solve,
                               lorenz_residual_max, random_datum, ym_residual_max)
    ok = True
    c3 = circle3_site()
    for g in ("Z2", "Z3", "S3"):
        X = classifying_presheaf(SiteCalculus(c3, by_name(g)), "bundle")
        H, _ = descent_comparison_for(X, "C", c3.covers["C"][1])
        rep.emit("holim", f"holim BG over the 3-arc circle, G = {g}: pi0 = {H.n_components()}",
                 group=g, pi0=H.n_components())
    for flavor in ("local_system",):
        X = classifying_presheaf(SiteCalculus(c3, by_name("S3")), flavor)
        r = is_stack(X)
        rep.emit("stack", f"{X.name} on circle3: stack = {str(r.ok).lower()}", presheaf=X.name, stack=r.ok)
        ok = ok and r.ok
    for name in ("path3", "square"):
        from ..groupoid.groups import cyclic
        inst = SAMPLE_LATTICES[name](cyclic(2))
        res = compare_with_vertical(concretify(GaugeContext(inst, interval_site())))
        rep.emit("concretify", f"{name}: Im(c) ≅ GCon at every stage = {str(res.ok).lower()}",
                 lattice=name, ok=res.ok)
        ok = ok and res.ok
    rng = np.random.default_rng(args.seed)
    cx = CubicalComplex((6, 5), periodic=(False, True), spacing=(0.3, 0.7))
    worst = 0.0
    for p in range(2):
        a = rng.standard_normal(cx.n_cells(p))
        b = rng.standard_normal(cx.n_cells(p + 1))
        worst = max(worst, abs(inner(cx, d(cx, a, p), b, p + 1) - inner(cx, a, codifferential(cx, b, p + 1), p)))
    rep.emit("dec", f"adjointness error on a 6x5 grid <= 1e-12: {str(worst <= 1e-12).lower()}",
             ok=worst <= 1e-12)
    grid = LorentzGrid(32, 32, 0.5 / 32, 1 / 32)
    d0 = random_datum(grid, rng)
    A = cauchy_solve(grid, d0)
    r = ym_residual_max(grid, A)
    chi = gauge_fix_solve(grid, A)
    lr = lorenz_residual_max(grid, gauge_act(grid, A, chi))
    rep.emit("cauchy", f"cauchy 32x32: ym_residual_max < 1.0e-10: {str(r < 1e-10).lower()}", ok=r < 1e-10)
    rep.emit("lorenz", f"lorenz 32x32: lorenz_residual_max < 1.0e-08: {str(lr < 1e-8).lower()}", ok=lr < 1e-8)
    ok = ok and worst <= 1e-12 and r < 1e-10 and lr < 1e-8
    return rep.result(ok)


HANDLERS = {
    "check-groupoid": cmd_check_groupoid, "weq": cmd_weq, "holim": cmd_holim, "hofib": cmd_hofib,
    "check-stack": cmd_check_stack, "sheafify": cmd_sheafify, "s1-local": cmd_s1_local,
    "im-vs-im1": cmd_im_vs_im1, "concretify": cmd_concretify, "compare-fs": cmd_compare_fs,
    "curvature": cmd_curvature, "ym-residual": cmd_ym_residual, "check-sol": cmd_check_sol,
    "extract-data": cmd_extract_data, "cauchy": cmd_cauchy, "cauchy-check": cmd_cauchy_check,
    "lorenz-fix": cmd_lorenz_fix, "report": cmd_report,
}


ARITY = {
    "check-groupoid": (1, 1, "GROUPOID"), "weq": (1, 1, "FUNCTOR"), "hofib": (2, 2, "FUNCTOR FUNCTOR"),
    "holim": (3, 3, "SITE PRESHEAF OBJECT"), "check-stack": (2, 2, "SITE PRESHEAF"),
    "sheafify": (2, 2, "SITE PRESHEAF"), "s1-local": (0, 0, ""), "im-vs-im1": (0, 0, ""),
    "concretify": (1, 1, "LATTICE"), "compare-fs": (1, 1, "LATTICE"),
    "curvature": (2, 2, "LATTICE FIELD"), "check-sol": (2, 2, "LATTICE FIELD"),
    "ym-residual": (2, 2, "GRID FIELD"), "extract-data": (2, 2, "GRID FIELD"),
    "cauchy": (2, 2, "GRID DATUM"), "cauchy-check": (2, 2, "GRID DATUM"),
    "lorenz-fix": (1, 2, "GRID FIELD | LATTICE"), "report": (0, 0, ""),
}


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="gaugestack", description="Presheaves of groupoids and lattice gauge stacks.")
    p.add_argument("subcommand", choices=SUBCOMMANDS)
    p.add_argument("files", nargs="*", help="input files (and an object name for holim)")
    p.add_argument("--tolerance", type=float, default=None)
    p.add_argument("--max-enumeration", type=int, default=DEFAULT_MAX_ENUMERATION)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--format", choices=("text", "json-lines"), default="text")
    p.add_argument("--count", type=int, default=12, help="number of fuzzed over-objects")
    p.add_argument("--cover", default=None, help="cover name for holim")
    p.add_argument("--object", default=None, help="parameter object for compare-fs / cauchy-check")
    p.add_argument("--gauge-family", choices=("none", "smooth", "nonsmooth"), default="none")
    p.add_argument("--output", "-o", default=None)
    return p


def main(argv=None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return INPUT_ERROR if e.code else PASS
    rep = Reporter(args.format, out)
    lo, hi, usage = ARITY[args.subcommand]
    if not lo <= len(args.files) <= hi:
        sys.stderr.write(f"error: usage: gaugestack {args.subcommand} {usage}".rstrip() + "\n")
        return INPUT_ERROR
    try:
        return HANDLERS[args.subcommand](args, rep)
    except (ParseError, InputError, StructuralError, ContractViolation) as e:
        sys.stderr.write(f"error: {e}\n")
        return INPUT_ERROR
    except EnumerationLimit as e:
        sys.stderr.write(f"error: enumeration limit: {e}\n")
        return INPUT_ERROR
    except OSError as e:
        sys.stderr.write(f"error: {e}\n")
        return INPUT_ERROR


def main_exit():
    sys.exit(main())


if __name__ == "__main__":
    main_exit()
