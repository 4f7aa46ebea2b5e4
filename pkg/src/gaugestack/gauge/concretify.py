"""Differential concretification of the mapping stack, and the naive ♯-only variant.

Pipeline: P = ♯(BG_con^M̌) ×_{♯BG^M̌} BG^M̌ (strict fiber product), the canonical
c : BG_con^M̌ → P, and its full image. The result is compared with the vertical
model GCon by an explicit functor that must be an isomorphism at every stage.
"""
from __future__ import annotations

from dataclasses import dataclass

from ..errors import ContractViolation
from ..groupoid.core import GroupoidFunctor
from ..groupoid.homotopy import FiberProduct
from ..groupoid.model import is_isomorphism, is_weak_equivalence, weak_equivalence_report
from ..presheaf.presheaf import (PresheafMorphism, PresheafOfGroupoids, hofib_presheaf, sharp,
                                 sharp_map, zeta)
from ..presheaf.site import PT
from ..truncation import OverObject, full_image
from .stacks import (GaugeContext, forget_full, gbun, gcon_vertical,
                     mapping_cocycle_groupoid_presheaf)


@dataclass
class Concretification:
    ctx: GaugeContext
    full: PresheafOfGroupoids        # BG_con^M̌
    bundle: PresheafOfGroupoids      # BG^M̌ = GBun
    sharp_full: PresheafOfGroupoids
    sharp_bundle: PresheafOfGroupoids
    pullback: PresheafOfGroupoids    # P
    canonical: PresheafMorphism      # c : BG_con^M̌ → P
    image: OverObject                # Im(c) → P
    gcon: PresheafOfGroupoids        # vertical model
    comparison: PresheafMorphism     # Im(c) → GCon

    @property
    def result(self) -> PresheafOfGroupoids:
        return self.image.total


def _point_vertical(x_pt):
    """The single vertical point field inside a BG_con^M̌(pt) object."""
    vert, _ = x_pt
    return vert[0]


def concretify(ctx: GaugeContext) -> Concretification:
    site = ctx.site
    X = mapping_cocycle_groupoid_presheaf(ctx)
    B = gbun(ctx)
    SX, SB = sharp(X), sharp(B)
    forget = forget_full(ctx, X, B)
    sforget = sharp_map(forget, SX, SB)
    zB = zeta(B, SB)
    zX = zeta(X, SX)

    def P_stage(U):
        return FiberProduct(sforget.component(U), zB.component(U), name=f"P({U})")

    def P_restrict(l):
        a, b = SX.restrict(l), B.restrict(l)
        return GroupoidFunctor(P_stage(l.tgt), P_stage(l.src), lambda o: (a.obj(o[0]), b.obj(o[1])),
                               lambda m: (a.mor(m[0]), b.mor(m[1])))

    P = PresheafOfGroupoids(site, P_stage, P_restrict, name="P")

    def c_comp(U):
        zx, fg = zX.component(U), forget.component(U)
        return GroupoidFunctor(X.stage(U), P.stage(U), lambda x: (zx.obj(x), fg.obj(x)),
                               lambda m: (zx.mor(m), fg.mor(m)), name="c")

    c = PresheafMorphism(X, P, c_comp, name="c")

    def image_objects(U):
        # c forgets the components along U, so one representative per vertical part suffices
        import itertools
        k = ctx.nc(U)
        C = c.component(U)
        out: dict = {}
        for vert in itertools.product(X.vertical_part(), repeat=k):
            out.setdefault(C.obj((vert, X.trivial_horizontal(vert, U))), None)
        return list(out)

    image, _ = full_image(OverObject(c), image_objects=image_objects)
    GCon = gcon_vertical(ctx)
    Im = image.total

    def comparison_comp(U):
        reg = site.region(U)
        pts = site.points(U)
        comp_of_point = [reg.component_of(site.apply(p, "*")) for p in pts]
        k = ctx.nc(U)

        def on_obj(o):
            sx, gb = o
            vals = [None] * k
            for c_idx, x_pt in zip(comp_of_point, sx):
                v = _point_vertical(x_pt)[0]
                if vals[c_idx] is None:
                    vals[c_idx] = v
                elif vals[c_idx] != v:
                    raise ContractViolation(f"object at {U} is not smooth along U")
            return tuple((vals[i], gb[i]) for i in range(k))

        def on_mor(m):
            src = Im.stage(U).source(m)
            return (on_obj(src), m[1][1])

        return GroupoidFunctor(Im.stage(U), GCon.stage(U), on_obj, on_mor, name="Im(c)→GCon")

    comparison = PresheafMorphism(Im, GCon, comparison_comp, name="Im(c)→GCon")
    return Concretification(ctx, X, B, SX, SB, P, c, image, GCon, comparison)


@dataclass
class StageComparison:
    ok: bool
    rows: list  # (U, image objects, GCon objects, iso?, natural?)

    def __bool__(self):
        return self.ok


def compare_with_vertical(conc: Concretification) -> StageComparison:
    """Stage-wise isomorphism Im(c)(U) ≅ GCon(U), natural in U."""
    site = conc.ctx.site
    rows = []
    ok = True
    for U in site.objects:
        F = conc.comparison.component(U)
        iso = is_isomorphism(F)
        natural = True
        for f in site.morphisms():
            if f.tgt != U:
                continue
            A = conc.result.restrict(f)
            Bf = conc.gcon.restrict(f)
            G = conc.comparison.component(f.src)
            for x in F.source.objects:
                if G.obj(A.obj(x)) != Bf.obj(F.obj(x)):
                    natural = False
                    break
            if not natural:
                break
        rows.append((U, F.source.n_objects(), F.target.n_objects(), iso, natural))
        ok = ok and iso and natural
    return StageComparison(ok, rows)


# -- naive concretification (♯ only) ------------------------------------------------------

@dataclass
class NaiveConcretification:
    ctx: GaugeContext
    gtilde: PresheafOfGroupoids
    gcon: PresheafOfGroupoids
    canonical: PresheafMorphism      # GCon → G̃Con
    sharp1_full: OverObject
    sharp1_bundle: OverObject


def naive_concretify_FS(ctx: GaugeContext) -> NaiveConcretification:
    """G̃Con(M) = ♯₁(BG_con^M) ×ʰ_{♯₁(BG^M)} BG^M for a single-chart M.

    Objects (A, *, {h_p}); morphisms ({g_p}, g̃) with A′|p = A|p ◁ g_p and the square
    on {h_p} commuting.
    """
    if len(ctx.inst.charts) != 1:
        raise ContractViolation("naive concretification is defined for single-chart instances")
    site = ctx.site
    X = mapping_cocycle_groupoid_presheaf(ctx)
    B = gbun(ctx)
    SX, SB = sharp(X), sharp(B)
    zX, zB = zeta(X, SX), zeta(B, SB)

    def zx_images(U):
        import itertools
        Z = zX.component(U)
        out: dict = {}
        for vert in itertools.product(X.vertical_part(), repeat=ctx.nc(U)):
            out.setdefault(Z.obj((vert, X.trivial_horizontal(vert, U))), None)
        return list(out)

    S1X, _ = full_image(OverObject(zX), image_objects=zx_images)
    S1B, zB1 = full_image(OverObject(zB))
    forget = forget_full(ctx, X, B)
    sforget = sharp_map(forget, SX, SB)

    def f1_comp(U):
        F = sforget.component(U)
        return GroupoidFunctor(S1X.total.stage(U), S1B.total.stage(U), F.obj, F.mor, name="♯₁forget")

    f1 = PresheafMorphism(S1X.total, S1B.total, f1_comp, name="♯₁forget")
    GT = hofib_presheaf(f1, zB1)
    GT.name = f"G̃Con({ctx.inst.name})"
    GCon = gcon_vertical(ctx)

    def can_comp(U):
        zx, zb = zX.component(U), zB.component(U)
        S1B_U = S1B.total.stage(U)

        def embed(a):
            return (a, X.trivial_horizontal(a, U))

        def on_obj(a):
            y = tuple(p[1] for p in a)
            return (zx.obj(embed(a)), y, S1B_U.identity(zb.obj(y)))

        def on_mor(m):
            a, h = m
            y = tuple(p[1] for p in a)
            xm = (embed(a), h)
            return (S1B_U.identity(zb.obj(y)), zx.mor(xm), (y, h))

        return GroupoidFunctor(GCon.stage(U), GT.stage(U), on_obj, on_mor, name="GCon→G̃Con")

    can = PresheafMorphism(GCon, GT, can_comp, name="GCon→G̃Con")
    return NaiveConcretification(ctx, GT, GCon, can, S1X, S1B)


def too_many_objects_witness(nc: NaiveConcretification, U: str):
    """An object (A, *, {h_p}) of G̃Con(U) with no morphism to any object with {h_p} = {e}.

    Returns (object, number of identity-family objects checked) or None.
    """
    GT = nc.gtilde.stage(U)
    Z = GT.Z
    ident = [b for b in GT.objects if b[2] == Z.identity(Z.source(b[2]))]
    for a in GT.objects:
        if a[2] == Z.identity(Z.source(a[2])):
            continue
        if all(GT.first_hom(a, b) is None for b in ident):
            return a, len(ident)
    return None


def recovers_gcon(nc: NaiveConcretification) -> list:
    """Per stage: is GCon → Im(GCon → G̃Con) a weak equivalence? (U, ok, reason)."""
    img, factor = full_image(OverObject(nc.canonical))
    out = []
    for U in nc.ctx.site.objects:
        ok, why = weak_equivalence_report(factor.component(U))
        out.append((U, ok, why))
    return out
