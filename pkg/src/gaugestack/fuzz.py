"""Seeded random over-objects f_X : X → K on the sample sites, and the (−1)-truncation suite."""
from __future__ import annotations

import random
from dataclasses import dataclass, field

from .gauge.classifying import SiteCalculus, classifying_presheaf
from .groupoid.core import GroupoidFunctor
from .groupoid.family import small_groupoids
from .groupoid.groups import cyclic, homomorphisms, symmetric, trivial
from .groupoid.model import functors
from .presheaf.presheaf import (PresheafMorphism, PresheafOfGroupoids, constant_presheaf,
                                identity_morphism, product_presheaf, representable, sharp, zeta)
from .presheaf.site import SAMPLE_SITES
from .truncation import (CERTIFIED, OverObject, contractible_or_empty, full_image, im_vs_im1_weq,
                         is_S_minus1_local, one_image, pi0_epi, slice_mapping_groupoid)

KINDS = ("group_hom", "constant", "representable", "zeta", "projection", "image_inclusion")


@dataclass
class FuzzCase:
    site: str
    kind: str
    label: str
    over: OverObject


def _groups():
    return {"1": trivial(), "Z2": cyclic(2), "Z3": cyclic(3), "S3": symmetric(3)}


def _hom_map(site, H, G, phi, flavor):
    """B(φ) : B_flavor H → B_flavor G for a group homomorphism φ."""
    X = classifying_presheaf(SiteCalculus(site, H), flavor)
    K = classifying_presheaf(SiteCalculus(site, G), flavor)

    def tup(t):
        return tuple(phi[a] for a in t)

    def comp(U):
        if flavor == "bundle":
            return GroupoidFunctor(X.stage(U), K.stage(U), lambda x: x, tup)
        return GroupoidFunctor(X.stage(U), K.stage(U), tup, lambda m: (tup(m[0]), tup(m[1])))

    return PresheafMorphism(X, K, comp, name=f"B({H.name}→{G.name})")


def _yoneda_map(K: PresheafOfGroupoids, U: str, x) -> PresheafMorphism:
    """y(U) → K classifying x ∈ K(U)."""
    Y = representable(K.site, U)

    def comp(V):
        KV = K.stage(V)
        return GroupoidFunctor(Y.stage(V), KV, lambda f: K.restrict(f).obj(x),
                               lambda m: KV.identity(K.restrict(m[1]).obj(x)))

    return PresheafMorphism(Y, K, comp, name=f"y({U})→K")


def _projection(X: PresheafOfGroupoids, Y: PresheafOfGroupoids) -> PresheafMorphism:
    P = product_presheaf(X, Y)
    return PresheafMorphism(P, X, lambda U: GroupoidFunctor(P.stage(U), X.stage(U), lambda o: o[0],
                                                            lambda m: m[0]), name="pr₁")


def _random_base(rng: random.Random, site, small: bool = False):
    groups = _groups()
    names = ["Z2", "Z3"] if small else ["Z2", "Z3", "S3"]
    gname = rng.choice(names)
    flavor = "bundle" if gname == "S3" else rng.choice(["bundle", "local_system"])
    return gname, flavor, classifying_presheaf(SiteCalculus(site, groups[gname]), flavor)


def random_over_object(rng: random.Random, site_name: str, kind: str | None = None) -> FuzzCase:
    site = SAMPLE_SITES[site_name]()
    kind = kind or rng.choice(KINDS)
    groups = _groups()
    if kind == "group_hom":
        hname, gname = rng.choice([("1", "Z2"), ("Z2", "Z2"), ("Z3", "Z3"), ("Z2", "S3"),
                                   ("Z3", "S3"), ("S3", "Z2"), ("Z2", "1")])
        H, G = groups[hname], groups[gname]
        phis = homomorphisms(H, G.elements, G.mul, G.e)
        phi = phis[rng.randrange(len(phis))]
        flavor = "bundle" if "S3" in (hname, gname) else rng.choice(["bundle", "local_system"])
        f = _hom_map(site, H, G, phi, flavor)
        label = f"B_{flavor}({hname}→{gname}) #{sorted(map(str, phi.items()))}"
    elif kind == "constant":
        gs = [g for g in small_groupoids(3, 3) if g.n_objects() > 0]
        A, B = rng.choice(gs), rng.choice(gs)
        Fs = functors(A, B)
        F = Fs[rng.randrange(len(Fs))]
        X, K = constant_presheaf(site, A, name=A.name), constant_presheaf(site, B, name=B.name)
        f = PresheafMorphism(X, K, lambda U: F, name="const(F)")
        label = f"const {A.name}→{B.name}"
    elif kind == "representable":
        gname, flavor, K = _random_base(rng, site)
        U = rng.choice(sorted(site.objects))
        objs = list(K.stage(U).objects)
        x = objs[rng.randrange(len(objs))]
        f = _yoneda_map(K, U, x)
        label = f"y({U})→B_{flavor}{gname} at {x!r}"
    elif kind == "zeta":
        gname, flavor, K = _random_base(rng, site, small=True)
        f = zeta(K, sharp(K))
        label = f"ζ on B_{flavor}{gname}"
    elif kind == "projection":
        gname, flavor, K = _random_base(rng, site, small=True)
        hname, hflavor, L = _random_base(rng, site, small=True)
        f = _projection(K, L)
        label = f"B_{flavor}{gname}×B_{hflavor}{hname}→B_{flavor}{gname}"
    else:
        inner = random_over_object(rng, site_name, rng.choice(["group_hom", "representable"]))
        im, _ = full_image(inner.over)
        f = im.map
        label = f"Im({inner.label}) ⊂ K"
    return FuzzCase(site_name, kind, label, OverObject(f))


def random_over_objects(seed: int, n: int, sites=("interval", "circle3", "twopoint")) -> list:
    """n seeded cases, cycling through sites and kinds so every pairing appears."""
    rng = random.Random(seed)
    out = []
    for k in range(n):
        out.append(random_over_object(rng, sites[k % len(sites)], KINDS[(k // len(sites)) % len(KINDS)]))
    return out


@dataclass
class TruncationResult:
    case: FuzzCase
    s_minus1_local: bool
    pi0_epi: str
    im_im1_weq: bool
    empty_or_point: bool
    detail: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return self.s_minus1_local and self.pi0_epi == CERTIFIED and self.im_im1_weq and self.empty_or_point


def check_truncation_case(case: FuzzCase) -> TruncationResult:
    o = case.over
    im1, factor = one_image(o)
    loc = is_S_minus1_local(im1)
    epi = pi0_epi(factor)
    weq = im_vs_im1_weq(o)
    detail = []
    if not loc:
        detail.append(f"Im₁ not S₋₁-local: {loc.reason}")
    if not weq:
        detail.append(f"Im → Im₁ not a local weq: {weq.reason}")
    c4 = True
    for name, target in (("Im(Im₁)", full_image(im1)[0]), ("Im(id)", full_image(OverObject(identity_morphism(o.base)))[0])):
        M = slice_mapping_groupoid(o, target)
        if not contractible_or_empty(M):
            c4 = False
            detail.append(f"Grpd(f_X, {name}) has {M.n_objects()} objects")
    return TruncationResult(case, bool(loc), epi, bool(weq), c4, detail)
