"""(−1)-truncation over a base presheaf: full image, 1-image, S₋₁-locality and π₀-epis."""
from __future__ import annotations

from dataclasses import dataclass

from .errors import ContractViolation
from .groupoid.core import DEFAULT_MAX_ENUMERATION, FullSubgroupoid, GroupoidFunctor
from .groupoid.model import is_fully_faithful
from .presheaf.presheaf import (PresheafMorphism, PresheafOfGroupoids, StageReport,
                                is_local_fibration, is_local_weq, mapping_groupoid, pi0,
                                sheafified_map, sheafify)

CERTIFIED = "certified"
UNDETERMINED = "undetermined"


@dataclass
class OverObject:
    """f_X : X → K, an object of the slice over K."""

    map: PresheafMorphism

    @property
    def total(self) -> PresheafOfGroupoids:
        return self.map.source

    @property
    def base(self) -> PresheafOfGroupoids:
        return self.map.target

    def __repr__(self):
        return f"OverObject({self.total.name} → {self.base.name})"


def identity_over(X: PresheafOfGroupoids) -> OverObject:
    from .presheaf.presheaf import identity_morphism
    return OverObject(identity_morphism(X))


def _sub_presheaf_of(K: PresheafOfGroupoids, objects_at, name: str) -> PresheafOfGroupoids:
    """Full sub-presheaf of K on the given objects (assumed closed under restriction)."""
    def stage(U):
        return FullSubgroupoid(K.stage(U), objects_at(U), name=f"{name}({U})")

    def restrict(f):
        R = K.restrict(f)
        return GroupoidFunctor(stage(f.tgt), stage(f.src), R.obj, R.mor)

    return PresheafOfGroupoids(K.site, stage, restrict, name=name)


def _inclusion(S: PresheafOfGroupoids, K: PresheafOfGroupoids, name="incl") -> PresheafMorphism:
    return PresheafMorphism(S, K, lambda U: GroupoidFunctor(S.stage(U), K.stage(U), lambda x: x,
                                                            lambda m: m, name=name), name=name)


def _corestrict(f: PresheafMorphism, S: PresheafOfGroupoids, name: str) -> PresheafMorphism:
    return PresheafMorphism(f.source, S, lambda U: GroupoidFunctor(
        f.source.stage(U), S.stage(U), f.component(U).obj, f.component(U).mor, name=name), name=name)


def _images(f: PresheafMorphism, U: str) -> list:
    F = f.component(U)
    seen: dict = {}
    for x in f.source.stage(U).objects:
        seen.setdefault(F.obj(x), None)
    return list(seen)


def full_image(o: OverObject, image_objects=None) -> tuple[OverObject, PresheafMorphism]:
    """Im(f_X) ⊂ K: images of objects, all K-morphisms between them; returns (Im → K, X → Im).

    ``image_objects(U)`` may supply the image object list when f_X is known to factor
    through a projection whose fibres need not be enumerated.
    """
    f, K = o.map, o.base
    cache: dict = {}

    def objects_at(U):
        if U not in cache:
            cache[U] = list(image_objects(U)) if image_objects is not None else _images(f, U)
        return cache[U]

    Im = _sub_presheaf_of(K, objects_at, name=f"Im({f.name})")
    return OverObject(_inclusion(Im, K)), _corestrict(f, Im, name="X→Im")


def one_image(o: OverObject) -> tuple[OverObject, PresheafMorphism]:
    """Im₁(f_X) ⊂ K: objects z whose restrictions to the members of some declared cover
    are each isomorphic to an image object; all K-morphisms between them."""
    f, K = o.map, o.base
    site = K.site
    ess: dict = {}

    def ess_image(V):
        if V not in ess:
            KV = K.stage(V)
            ess[V] = {KV.component_key(y) for y in _images(f, V)}
        return ess[V]

    def locally_liftable(U, z):
        for cover in site.covers[U]:
            ok = True
            for Ui in cover.members:
                R = K.restrict(site.inclusion(Ui, U)) if Ui != U else None
                zi = R.obj(z) if R is not None else z
                if K.stage(Ui).component_key(zi) not in ess_image(Ui):
                    ok = False
                    break
            if ok:
                return True
        return False

    cache: dict = {}

    def objects_at(U):
        if U not in cache:
            cache[U] = [z for z in K.stage(U).objects if locally_liftable(U, z)]
        return cache[U]

    Im1 = _sub_presheaf_of(K, objects_at, name=f"Im₁({f.name})")
    return OverObject(_inclusion(Im1, K)), _corestrict(f, Im1, name="X→Im₁")


def is_S_minus1_local(o: OverObject, max_enumeration: int = DEFAULT_MAX_ENUMERATION) -> StageReport:
    """Local fibration with every stage fully faithful."""
    f = o.map
    for U in f.site.objects:
        if not is_fully_faithful(f.component(U)):
            return StageReport(False, U, f"{f.name} is not fully faithful at {U}")
    return is_local_fibration(f, max_enumeration)


def pi0_epi(f: PresheafMorphism) -> str:
    """``certified`` when sheafified π₀ of f is surjective at every object, else ``undetermined``."""
    P0X, P0Y = pi0(f.source), pi0(f.target)

    def phi(U, x):
        return f.target.stage(U).component_rep(f.component(U).obj(x))

    SX, SY = sheafify(P0X), sheafify(P0Y)
    psi = sheafified_map(P0X, P0Y, phi)
    for U in f.site.objects:
        if {psi(U, s) for s in SX.stage(U)} != set(SY.stage(U)):
            return UNDETERMINED
    return CERTIFIED


def im_to_im1(o: OverObject) -> PresheafMorphism:
    Im, _ = full_image(o)
    Im1, _ = one_image(o)
    S, T = Im.total, Im1.total
    for U in o.base.site.objects:
        missing = [x for x in S.stage(U).objects if not T.stage(U).has_object(x)]
        if missing:
            raise ContractViolation(f"image object {missing[0]!r} at {U} is not in the 1-image")
    return PresheafMorphism(S, T, lambda U: GroupoidFunctor(S.stage(U), T.stage(U), lambda x: x,
                                                            lambda m: m, name="Im→Im₁"), name="Im→Im₁")


def im_vs_im1_weq(o: OverObject, max_enumeration: int = DEFAULT_MAX_ENUMERATION) -> StageReport:
    return is_local_weq(im_to_im1(o), max_enumeration)


def _pushforward(o_src: OverObject, o_tgt: OverObject, g: PresheafMorphism, name: str) -> PresheafMorphism:
    S, T = o_src.total, o_tgt.total

    def comp(U):
        G = g.component(U)
        F = GroupoidFunctor(S.stage(U), T.stage(U), G.obj, G.mor, name=name)
        for x in S.stage(U).objects:
            if not T.stage(U).has_object(G.obj(x)):
                raise ContractViolation(f"{name}: {G.obj(x)!r} at {U} is not in the target image")
        return F

    return PresheafMorphism(S, T, comp, name=name)


@dataclass
class BaseChangeReport:
    ok: bool
    im1: StageReport
    im: StageReport
    squares_commute: bool

    def __bool__(self):
        return self.ok


def base_change_weq(o: OverObject, g: PresheafMorphism,
                    max_enumeration: int = DEFAULT_MAX_ENUMERATION) -> BaseChangeReport:
    """Im₁(f) → Im₁(g∘f) and Im(f) → Im(g∘f) induced by a local weak equivalence g : K → K̃."""
    if g.source is not o.base:
        raise ContractViolation("g must start at the base of the over-object")
    rep = is_local_weq(g, max_enumeration)
    if not rep:
        raise ContractViolation(f"g is not a weak equivalence: {rep.reason}")
    gf = OverObject(o.map.then(g))
    im_f, _ = full_image(o)
    im_gf, _ = full_image(gf)
    im1_f, _ = one_image(o)
    im1_gf, _ = one_image(gf)
    a = _pushforward(im1_f, im1_gf, g, "Im₁(f)→Im₁(gf)")
    b = _pushforward(im_f, im_gf, g, "Im(f)→Im(gf)")
    squares = True
    for U in o.base.site.objects:
        G = g.component(U)
        for x in im1_f.total.stage(U).objects:
            if im1_gf.map.component(U).obj(a.component(U).obj(x)) != G.obj(im1_f.map.component(U).obj(x)):
                squares = False
        for x in im_f.total.stage(U).objects:
            if im_gf.map.component(U).obj(b.component(U).obj(x)) != G.obj(im_f.map.component(U).obj(x)):
                squares = False
    r1, r2 = is_local_weq(a, max_enumeration), is_local_weq(b, max_enumeration)
    return BaseChangeReport(bool(r1) and bool(r2) and squares, r1, r2, squares)


def slice_mapping_groupoid(fX: OverObject, fY: OverObject,
                           max_enumeration: int = DEFAULT_MAX_ENUMERATION):
    """Grpd_{H/K}(f_X, f_Y) by enumeration."""
    if fX.base is not fY.base:
        raise ContractViolation("over-objects must share the base")
    return mapping_groupoid(fX.total, fY.total, max_enumeration, over=(fX.map, fY.map))


def contractible_or_empty(M) -> bool:
    """0 or 1 objects and no non-identity automorphisms."""
    objs = list(M.objects)
    if len(objs) > 1:
        return False
    return all(M.aut_order(x) == 1 for x in objs)
