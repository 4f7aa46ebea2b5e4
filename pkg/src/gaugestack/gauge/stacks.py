"""Gauge presheaves of a lattice instance M over a parameter graph site.

Stage U of every presheaf here is an action groupoid: one point-level datum per
connected component of U (smooth families), acted on by one point-level gauge
transformation per component. The full connection model (mapping_cocycle_groupoid)
adds components along U: one link variable per (M-vertex, U-edge), arbitrary.
"""
from __future__ import annotations

import functools
import itertools
from dataclasses import dataclass

from ..errors import ContractViolation, EnumerationLimit
from ..groupoid.core import DEFAULT_MAX_ENUMERATION, ActionGroupoid, GroupoidFunctor
from ..groupoid.groups import power
from ..presheaf.presheaf import PresheafMorphism, PresheafOfGroupoids, full_subpresheaf, hofib_presheaf
from ..presheaf.site import PT, FiniteSite
from .classifying import SiteCalculus
from .lattice import Chart, LatticeInstance


@dataclass
class GaugeContext:
    """A lattice instance together with the parameter site."""

    inst: LatticeInstance
    site: FiniteSite
    max_enumeration: int = DEFAULT_MAX_ENUMERATION

    @property
    def calc(self) -> SiteCalculus:
        return SiteCalculus(self.site, self.inst.group)

    def nc(self, U: str) -> int:
        return self.calc.n_components(U)

    def group_at(self, U: str):
        return power(self.inst.point_gauge_group, self.nc(U))

    def reindex(self, f, x) -> tuple:
        """Pull a per-component tuple back along a site morphism."""
        return tuple(x[c] for c in self.calc.component_map(f))


def _family_presheaf(ctx: GaugeContext, points_pt, act_pt, name: str, contains_pt=None
                     ) -> PresheafOfGroupoids:
    """Stage U = (point data)^{π₀U} // (point gauge group)^{π₀U}."""
    cache: dict = {}
    act_pt = functools.lru_cache(maxsize=1 << 16)(act_pt)

    def base():
        if "pts" not in cache:
            cache["pts"] = list(points_pt())
        return cache["pts"]

    def stage(U):
        k = ctx.nc(U)
        total = len(base()) ** k
        if total > ctx.max_enumeration:
            raise EnumerationLimit(f"{name}({U}): {total} objects")

        def act(x, h):
            return tuple(act_pt(a, b) for a, b in zip(x, h))

        return ActionGroupoid(lambda: itertools.product(base(), repeat=k), ctx.group_at(U), act,
                              name=f"{name}({U})")

    def restrict(f):
        return GroupoidFunctor(stage(f.tgt), stage(f.src), lambda x: ctx.reindex(f, x),
                               lambda m: (ctx.reindex(f, m[0]), ctx.reindex(f, m[1])))

    X = PresheafOfGroupoids(ctx.site, stage, restrict, name=name)
    X.point_data = base
    return X


def gcon_vertical(ctx: GaugeContext) -> PresheafOfGroupoids:
    """GCon(M): cocycle gauge fields with vertical (smooth) link variables."""
    inst = ctx.inst
    X = _family_presheaf(ctx, lambda: inst.point_fields("connection", 1, ctx.max_enumeration),
                         lambda a, h: inst.act_point("connection", 1, a, h), f"GCon({inst.name})")
    X.kind, X.degree = "connection", 1
    return X


def gbun(ctx: GaugeContext) -> PresheafOfGroupoids:
    """GBun(M): transition cocycles modulo smooth gauge transformations."""
    inst = ctx.inst
    X = _family_presheaf(ctx, lambda: inst.cocycles(ctx.max_enumeration),
                         lambda g, h: inst.act_cocycle(g, h), f"GBun({inst.name})")
    X.kind = "bundle"
    return X


def omega_stack(ctx: GaugeContext, p: int) -> PresheafOfGroupoids:
    """𝛀^p(M, ad G): p-form families compatible under ad of the transitions."""
    if p < 0 or p > ctx.inst.m:
        raise ContractViolation(f"form degree {p} outside 0..{ctx.inst.m}")
    inst = ctx.inst
    X = _family_presheaf(ctx, lambda: inst.point_fields("form", p, ctx.max_enumeration),
                         lambda a, h: inst.act_point("form", p, a, h), f"Ω{p}({inst.name})")
    X.kind, X.degree = "form", p
    return X


def _pointwise_morphism(X, Y, fn, name) -> PresheafMorphism:
    """Morphism acting by ``fn`` on each component's point datum, identity on gauge."""
    def comp(U):
        return GroupoidFunctor(X.stage(U), Y.stage(U), lambda x: tuple(fn(a) for a in x),
                               lambda m: (tuple(fn(a) for a in m[0]), m[1]), name=name)

    return PresheafMorphism(X, Y, comp, name=name)


def curvature(ctx: GaugeContext, GCon=None, Omega2=None) -> PresheafMorphism:
    """(𝐀, 𝐏) ↦ ({F(A_V)}, 𝐏), 𝐡 ↦ 𝐡."""
    GCon = GCon or gcon_vertical(ctx)
    Omega2 = Omega2 or omega_stack(ctx, 2) if ctx.inst.m >= 2 else Omega2
    if Omega2 is None:
        raise ContractViolation("curvature needs a lattice of dimension ≥ 2")
    return _pointwise_morphism(GCon, Omega2, ctx.inst.curvature_point, "F")


def zero_section(ctx: GaugeContext, p: int, GBun=None, Omega=None) -> PresheafMorphism:
    """𝐏 ↦ ({0}, 𝐏), 𝐡 ↦ 𝐡."""
    GBun = GBun or gbun(ctx)
    Omega = Omega or omega_stack(ctx, p)
    return _pointwise_morphism(GBun, Omega, lambda g: ctx.inst.zero_point_field(p, g), "0")


def forget_to_bundle(ctx: GaugeContext, X, GBun=None) -> PresheafMorphism:
    """(vals, 𝐏) ↦ 𝐏 on vertical models."""
    GBun = GBun or gbun(ctx)
    return _pointwise_morphism(X, GBun, lambda a: a[1], "forget")


# -- full (non-vertical) connections: the explicit mapping stack -------------------------

def mapping_cocycle_groupoid_presheaf(ctx: GaugeContext) -> PresheafOfGroupoids:
    """BG_con^M̌: vertical part as in GCon plus arbitrary link variables along U-edges.

    Object (vert, hor): vert = per-component point fields; hor[i][v][l] = link variable
    on (chart i vertex v, U-edge l), with hor_j = g_ij⁻¹ hor_i g_ij on overlaps. A smooth
    gauge transformation conjugates hor by its value on (v, component of l).
    """
    inst, G = ctx.inst, ctx.inst.group
    pts = {}

    def vert_pts():
        if "v" not in pts:
            pts["v"] = inst.point_fields("connection", 1, ctx.max_enumeration)
        return pts["v"]

    def edge_comps(U):
        reg = ctx.site.region(U)
        return [reg.component_of(s) for s, _ in reg.edges]

    first_chart = {}
    for i, c in enumerate(inst.charts):
        for v in c.vertices:
            first_chart.setdefault(v, i)

    def hor_from_free(vert, free, U):
        """free[(v, l)] in the frame of v's first chart."""
        ecomp = edge_comps(U)
        out = []
        for j, c in enumerate(inst.charts):
            row = []
            for v in c.vertices:
                i = first_chart[v]
                vals = []
                for l, comp in enumerate(ecomp):
                    a = free[(v, l)]
                    if i != j:
                        g = inst.transition(vert[comp][1], i, j)(v)
                        a = G.mul(G.mul(G.inv(g), a), g)
                    vals.append(a)
                row.append(tuple(vals))
            out.append(tuple(row))
        return tuple(out)

    def objects(U):
        k = ctx.nc(U)
        ne = len(ctx.site.region(U).edges)
        keys = [(v, l) for v in inst.vertices for l in range(ne)]
        total = len(vert_pts()) ** k * len(G) ** len(keys)
        if total > ctx.max_enumeration:
            raise EnumerationLimit(f"BG_con^M({U}): {total} objects")
        for vert in itertools.product(vert_pts(), repeat=k):
            for vals in itertools.product(G.elements, repeat=len(keys)):
                yield (vert, hor_from_free(vert, dict(zip(keys, vals)), U))

    def contains(x):
        vert, hor = x
        return all(inst.compatibility_failure("connection", 1, a) is None and
                   inst.cocycle_failure(a[1]) is None for a in vert)

    def stage(U):
        ecomp = edge_comps(U)

        def act(x, h):
            vert, hor = x
            new_vert = tuple(inst.act_point("connection", 1, a, b) for a, b in zip(vert, h))
            new_hor = tuple(
                tuple(tuple(inst.group.mul(inst.group.mul(inst.group.inv(inst.h_at(h[ecomp[l]], i, v)), a),
                                           inst.h_at(h[ecomp[l]], i, v))
                            for l, a in enumerate(row_v))
                      for v, row_v in zip(inst.charts[i].vertices, hor[i]))
                for i in range(len(inst.charts)))
            return (new_vert, new_hor)

        return ActionGroupoid(lambda: objects(U), ctx.group_at(U), act, name=f"BG_con^M({U})",
                              contains=contains)

    def restrict_hor(f, hor):
        reg_t = ctx.site.region(f.tgt)
        eidx = {e: k for k, e in enumerate(reg_t.edges)}
        images = [ctx.site.edge_image(f, e) for e in ctx.site.region(f.src).edges]
        out = []
        for rows in hor:
            new_rows = []
            for row_v in rows:
                vals = []
                for im in images:
                    if im is None:
                        vals.append(G.e)
                    else:
                        e, sign = im
                        a = row_v[eidx[e]]
                        vals.append(a if sign == 1 else G.inv(a))
                new_rows.append(tuple(vals))
            out.append(tuple(new_rows))
        return tuple(out)

    def restrict(f):
        def on_obj(x):
            return (ctx.reindex(f, x[0]), restrict_hor(f, x[1]))

        return GroupoidFunctor(stage(f.tgt), stage(f.src), on_obj,
                               lambda m: (on_obj(m[0]), ctx.reindex(f, m[1])))

    X = PresheafOfGroupoids(ctx.site, stage, restrict, name=f"BG_con^M({inst.name})")
    X.vertical_part = vert_pts
    X.trivial_horizontal = lambda vert, U: hor_from_free(
        vert, {(v, l): G.e for v in inst.vertices for l in range(len(ctx.site.region(U).edges))}, U)
    return X


def mapping_cocycle_groupoid(ctx: GaugeContext, U: str):
    """BG_con^M̌(U) as a groupoid."""
    return mapping_cocycle_groupoid_presheaf(ctx).stage(U)


def forget_full(ctx: GaugeContext, X, GBun) -> PresheafMorphism:
    """BG_con^M̌ → BG^M̌ (keep the transitions); every morphism lifts uniquely."""
    def comp(U):
        F = GroupoidFunctor(X.stage(U), GBun.stage(U), lambda x: tuple(a[1] for a in x[0]),
                            lambda m: (tuple(a[1] for a in m[0][0]), m[1]), name="forget")
        F.lift = lambda x, m: (x, m[1])
        return F

    return PresheafMorphism(X, GBun, comp, name="forget")


def sol_stack(ctx: GaugeContext, GCon=None) -> PresheafOfGroupoids:
    """GSol(M): the full sub-presheaf of GCon where the Yang-Mills residual vanishes."""
    GCon = GCon or gcon_vertical(ctx)
    inst = ctx.inst

    def solves(a):
        return all(all(x == 0 for x in r) for r in inst.ym_residual_point(a))

    X = full_subpresheaf(GCon, lambda U, x: all(solves(a) for a in x), name=f"GSol({inst.name})")
    X.solves = solves
    return X


def ym_map(ctx: GaugeContext, GCon=None, Omega1=None) -> PresheafMorphism:
    """(𝐀, 𝐏) ↦ (δ_A F(A), 𝐏) into 𝛀¹ (abelian)."""
    GCon = GCon or gcon_vertical(ctx)
    Omega1 = Omega1 or omega_stack(ctx, 1)
    inst = ctx.inst
    return _pointwise_morphism(GCon, Omega1, lambda a: (inst.ym_residual_point(a), a[1]), "YM")


def sol_triple_form(ctx: GaugeContext, GCon=None) -> tuple[PresheafOfGroupoids, PresheafMorphism]:
    """GSol as the homotopy fiber product of YM and the zero section, with the comparison
    GSol → YM ×ʰ 0 sending (𝐀, 𝐏) to ((𝐀, 𝐏), 𝐏, id)."""
    GCon = GCon or gcon_vertical(ctx)
    Sol = sol_stack(ctx, GCon)
    Om1 = omega_stack(ctx, 1)
    B = gbun(ctx)
    ym = ym_map(ctx, GCon, Om1)
    z = zero_section(ctx, 1, B, Om1)
    T = hofib_presheaf(ym, z, ctx.max_enumeration)
    T.name = f"YM×ʰ0({ctx.inst.name})"

    def comp(U):
        OmU = Om1.stage(U)
        yc = ym.component(U)

        def on_obj(x):
            return (x, tuple(a[1] for a in x), OmU.identity(yc.obj(x)))

        def on_mor(m):
            x, h = m
            return (OmU.identity(yc.obj(x)), m, (tuple(a[1] for a in x), h))

        return GroupoidFunctor(Sol.stage(U), T.stage(U), on_obj, on_mor, name="GSol→YM×ʰ0")

    return T, PresheafMorphism(Sol, T, comp, name="GSol→YM×ʰ0")


def lorenz_sol_stack(ctx: GaugeContext, Sol=None) -> PresheafOfGroupoids:
    """GSol_{g.f.}: the full sub-presheaf of GSol in Lorenz gauge."""
    Sol = Sol or sol_stack(ctx)
    inst = ctx.inst

    def fixed(a):
        return all(all(x == 0 for x in r) for r in inst.lorenz_residual_point(a))

    X = full_subpresheaf(Sol, lambda U, x: all(fixed(a) for a in x), name=f"GSol_gf({inst.name})")
    X.fixed = fixed
    return X


def j_map(Fixed: PresheafOfGroupoids, Sol: PresheafOfGroupoids) -> PresheafMorphism:
    """j_M : GSol_{g.f.} ↪ GSol."""
    return PresheafMorphism(Fixed, Sol, lambda U: GroupoidFunctor(
        Fixed.stage(U), Sol.stage(U), lambda x: x, lambda m: m, name="j"), name="j")


def essentially_surjective_report(f: PresheafMorphism) -> list:
    """Per stage: (U, ok, witness) with witness an object of the target outside the essential image."""
    out = []
    for U in f.site.objects:
        F = f.component(U)
        T = F.target
        hit = {T.component_key(F.obj(x)) for x in F.source.objects}
        miss = next((y for y in T.objects if T.component_key(y) not in hit), None)
        out.append((U, miss is None, miss))
    return out


# -- initial data on the Cauchy slice ------------------------------------------------------

def slice_instance(inst: LatticeInstance) -> LatticeInstance:
    """Σ = {t = t₀} as a 1D Euclidean lattice; charts are the chart ∩ Σ."""
    if inst.m != 2:
        raise ContractViolation("initial data are defined for 2D lattices")
    t0 = inst.slice_index
    if t0 + 1 >= inst.shape[0]:
        raise ContractViolation(f"Cauchy slice {t0} has no time step above it")
    vs = [(v[1],) for v in inst.vertices if v[0] == t0]
    charts = []
    for c in inst.charts:
        cv = tuple((v[1],) for v in c.vertices if v[0] == t0)
        if cv:
            charts.append(Chart(c.name, cv))
    return LatticeInstance(f"{inst.name}|Σ", (inst.shape[1],), vs, charts, inst.group, lorentzian=False)


def _slice_constraint(S: LatticeInstance, E) -> tuple:
    """δ^vert E (abelian, mod n) on interior slice vertices, per slice chart."""
    import numpy as np
    from ..ym.dec import codifferential_mod
    glob = S._glue(1, E)
    cx = S.cx
    if not cx.cells[1]:
        return S._per_chart(0, {c: 0 for c in cx.cells[0]})
    r = codifferential_mod(cx, np.array([glob[c] for c in cx.cells[1]], dtype=np.int64), 1, S.modulus)
    r = np.where(cx.interior(0), r, 0)
    return S._per_chart(0, {c: int(x) for c, x in zip(cx.cells[0], r)})


def data_stack(ctx: GaugeContext) -> PresheafOfGroupoids:
    """GData(Σ): (𝐀^Σ, 𝐄, 𝐏^Σ) with δ^vert E = 0; gauge acts on A by ◁ and on E by ad.

    Point datum: ((A vals, g), E vals) on the slice instance.
    """
    S = slice_instance(ctx.inst)
    sctx = GaugeContext(S, ctx.site, ctx.max_enumeration)

    def points():
        conns = S.point_fields("connection", 1, ctx.max_enumeration)
        forms: dict = {}
        for vals, g in S.point_fields("form", 1, ctx.max_enumeration):
            forms.setdefault(g, []).append(vals)
        out = []
        for a in conns:
            for E in forms.get(a[1], []):
                if all(all(x == 0 for x in r) for r in _slice_constraint(S, E)):
                    out.append((a, E))
        return out

    def act(d, h):
        a, E = d
        a2 = S.act_point("connection", 1, a, h)
        E2 = S.act_point("form", 1, (E, a[1]), h)[0]
        return (a2, E2)

    X = _family_presheaf(sctx, points, act, f"GData({S.name})")
    X.slice = S
    X.slice_ctx = sctx
    X.constraint = lambda E: _slice_constraint(S, E)
    return X


def data_point(inst: LatticeInstance, S: LatticeInstance, a):
    """(A, 𝐏) on M ↦ (ι*A, ι*(n ⌟ F), ι*𝐏): E on the slice edge at x is F on the plaquette above it."""
    vals, g = a
    t0 = inst.slice_index
    F = inst.curvature_point(a)[0]
    names = inst.chart_names
    A_s, E_s = [], []
    for j, c in enumerate(S.charts):
        i = names.index(c.name)
        eidx = inst.chart_cx[i].index[1]
        pidx = inst.chart_cx[i].index[2]
        ra, re = [], []
        for (I, n) in S.cells(j, 1):
            x = n[0]
            ra.append(vals[i][eidx[((1,), (t0, x))]])
            key = ((0, 1), (t0, x))
            if key not in pidx:
                raise ContractViolation(f"chart {c.name} lacks the plaquette above slice edge {x}")
            re.append(F[i][pidx[key]])
        A_s.append(tuple(ra))
        E_s.append(tuple(re))
    g_s = []
    for (a_, b_) in S.pair_keys:
        i, j = names.index(S.charts[a_].name), names.index(S.charts[b_].name)
        gij = inst.transition(g, i, j)
        g_s.append(tuple(gij((t0, v[0])) for v in S.pairs[(a_, b_)]))
    return ((tuple(A_s), tuple(g_s)), tuple(E_s))


def data_map(ctx: GaugeContext, Sol=None, Data=None) -> PresheafMorphism:
    """data_Σ : GSol(M) → GData(Σ)."""
    Sol = Sol or sol_stack(ctx)
    Data = Data or data_stack(ctx)
    inst, S = ctx.inst, Data.slice
    names = inst.chart_names
    t0 = inst.slice_index

    def gauge(h):
        out = []
        for c in S.charts:
            i = names.index(c.name)
            out.extend(inst.h_at(h, i, (t0, v[0])) for v in c.vertices)
        return tuple(out)

    def comp(U):
        def on_obj(x):
            return tuple(data_point(inst, S, a) for a in x)

        return GroupoidFunctor(Sol.stage(U), Data.stage(U), on_obj,
                               lambda m: (on_obj(m[0]), tuple(gauge(h) for h in m[1])), name="data")

    return PresheafMorphism(Sol, Data, comp, name="data_Σ")


def points_of(site: FiniteSite, U: str):
    return site.points(U)


__all__ = ["GaugeContext", "gcon_vertical", "gbun", "omega_stack", "curvature", "zero_section",
           "forget_to_bundle", "mapping_cocycle_groupoid_presheaf", "mapping_cocycle_groupoid",
           "forget_full", "sol_stack", "ym_map", "sol_triple_form", "lorenz_sol_stack", "j_map",
           "essentially_surjective_report", "slice_instance", "data_stack", "data_point", "data_map",
           "PT"]
