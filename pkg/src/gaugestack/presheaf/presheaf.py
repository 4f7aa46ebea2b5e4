"""Presheaves of groupoids on finite sites, their morphisms and model-structure predicates."""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Callable

from ..errors import ContractViolation, EnumerationLimit, StructuralError
from ..groupoid.core import (DEFAULT_MAX_ENUMERATION, FiniteGroupoid, Groupoid, GroupoidFunctor,
                             ProductGroupoid, discrete, identity_functor, point)
from ..groupoid.homotopy import (CosimplicialGroupoid2, DescentGroupoid, HomotopyFiberProduct,
                                 descent_comparison)
from ..groupoid.model import (fibration_report, is_fully_faithful, is_weak_equivalence,
                              weak_equivalence_report)
from .site import PT, FiniteSite, Morphism


class PresheafOfGroupoids:
    """X : C^op → Grpd given by a stage recipe and a restriction recipe.

    ``restrict_fn(f)`` for f : V → U returns the functor X(U) → X(V).
    Stages and restriction functors are cached.
    """

    def __init__(self, site: FiniteSite, stage_fn: Callable, restrict_fn: Callable,
                 name: str = "X"):
        self.site = site
        self.name = name
        self._stage_fn = stage_fn
        self._restrict_fn = restrict_fn
        self._stages: dict = {}
        self._restr: dict = {}

    def __repr__(self):
        return f"PresheafOfGroupoids({self.name} on {self.site.name})"

    def stage(self, U: str) -> Groupoid:
        if U not in self._stages:
            G = self._stage_fn(U)
            G.name = f"{self.name}({U})"
            self._stages[U] = G
        return self._stages[U]

    def restrict(self, f: Morphism) -> GroupoidFunctor:
        if f not in self._restr:
            if f.vmap == self.site.region(f.src).vertices and f.src == f.tgt:
                self._restr[f] = identity_functor(self.stage(f.src))
            else:
                self._restr[f] = self._restrict_fn(f)
        return self._restr[f]

    def restrict_obj(self, f: Morphism, x):
        return self.restrict(f).obj(x)

    def check(self, max_checks: int = DEFAULT_MAX_ENUMERATION):
        """Exhaustive functoriality: X(id) = id and X(g∘f) = X(f)∘X(g)."""
        site = self.site
        budget = [max_checks]

        def spend(n=1):
            budget[0] -= n
            if budget[0] < 0:
                raise EnumerationLimit(f"{self.name}: functoriality check exceeds {max_checks} steps")

        for U in site.objects:
            XU = self.stage(U)
            for f in site.morphisms():
                if f.tgt != U:
                    continue
                F = self.restrict(f)
                for x in XU.objects:
                    spend()
                    if not F.target.has_object(F.obj(x)):
                        raise StructuralError(f"{self.name}: restriction along {f} leaves the stage")
                for g in site.morphisms():
                    if g.tgt != f.src:
                        continue
                    fg = site.compose(f, g)
                    H, G = self.restrict(fg), self.restrict(g)
                    for x in XU.objects:
                        spend()
                        if H.obj(x) != G.obj(F.obj(x)):
                            raise StructuralError(f"{self.name}: X({fg}) ≠ X({g})∘X({f}) on {x!r}")
                    for m in XU.morphisms():
                        spend()
                        if H.mor(m) != G.mor(F.mor(m)):
                            raise StructuralError(f"{self.name}: X({fg}) ≠ X({g})∘X({f}) on {m!r}")


class PresheafMorphism:
    """Stage-wise functors φ_U : X(U) → Y(U), natural in U."""

    def __init__(self, source: PresheafOfGroupoids, target: PresheafOfGroupoids,
                 component_fn: Callable, name: str = "f"):
        if source.site is not target.site:
            raise ContractViolation("presheaf morphism between different sites")
        self.source = source
        self.target = target
        self.site = source.site
        self.name = name
        self._fn = component_fn
        self._comp: dict = {}

    def __repr__(self):
        return f"PresheafMorphism({self.name}: {self.source.name} → {self.target.name})"

    def component(self, U: str) -> GroupoidFunctor:
        if U not in self._comp:
            self._comp[U] = self._fn(U)
        return self._comp[U]

    def then(self, other: "PresheafMorphism") -> "PresheafMorphism":
        """other∘self."""
        return PresheafMorphism(self.source, other.target,
                                lambda U: self.component(U).then(other.component(U)),
                                name=f"{other.name}∘{self.name}")

    def check(self, max_checks: int = DEFAULT_MAX_ENUMERATION):
        """Naturality squares for every site morphism, on all objects and morphisms."""
        n = 0
        for f in self.site.morphisms():
            X_f, Y_f = self.source.restrict(f), self.target.restrict(f)
            phi_U, phi_V = self.component(f.tgt), self.component(f.src)
            XU = self.source.stage(f.tgt)
            for x in XU.objects:
                n += 1
                if Y_f.obj(phi_U.obj(x)) != phi_V.obj(X_f.obj(x)):
                    raise StructuralError(f"{self.name}: naturality fails along {f} at {x!r}")
            for m in XU.morphisms():
                n += 1
                if Y_f.mor(phi_U.mor(m)) != phi_V.mor(X_f.mor(m)):
                    raise StructuralError(f"{self.name}: naturality fails along {f} at {m!r}")
            if n > max_checks:
                raise EnumerationLimit(f"{self.name}: naturality check exceeds {max_checks} steps")


def identity_morphism(X: PresheafOfGroupoids) -> PresheafMorphism:
    return PresheafMorphism(X, X, lambda U: identity_functor(X.stage(U)), name=f"id_{X.name}")


# -- basic presheaves ------------------------------------------------------------

def terminal_presheaf(site: FiniteSite) -> PresheafOfGroupoids:
    return PresheafOfGroupoids(site, lambda U: point(),
                               lambda f: GroupoidFunctor(point(), point(), lambda x: x, lambda m: m),
                               name="{*}")


def to_terminal(X: PresheafOfGroupoids) -> PresheafMorphism:
    T = terminal_presheaf(X.site)
    return PresheafMorphism(X, T, lambda U: GroupoidFunctor(X.stage(U), T.stage(U),
                                                            lambda x: "*", lambda m: "id*"),
                            name="!")


def representable(site: FiniteSite, U: str) -> PresheafOfGroupoids:
    """Yoneda: V ↦ the discrete groupoid Hom(V, U); restriction is precomposition."""

    def stage(V):
        return discrete(site.hom(V, U), name=f"Hom(-,{U})")

    def restrict(g):
        src, tgt = stage(g.tgt), stage(g.src)
        return GroupoidFunctor(src, tgt, lambda f: site.compose(f, g),
                               lambda m: ("id", site.compose(m[1], g)))

    X = PresheafOfGroupoids(site, stage, restrict, name=f"y({U})")
    X.represented = U
    return X


def constant_presheaf(site: FiniteSite, G: Groupoid, name: str = "const") -> PresheafOfGroupoids:
    return PresheafOfGroupoids(site, lambda U: G, lambda f: identity_functor(G), name=name)


def product_presheaf(X: PresheafOfGroupoids, Y: PresheafOfGroupoids, name: str | None = None
                     ) -> PresheafOfGroupoids:
    def stage(U):
        return ProductGroupoid([X.stage(U), Y.stage(U)])

    def restrict(f):
        a, b = X.restrict(f), Y.restrict(f)
        return GroupoidFunctor(stage(f.tgt), stage(f.src), lambda o: (a.obj(o[0]), b.obj(o[1])),
                               lambda m: (a.mor(m[0]), b.mor(m[1])))

    return PresheafOfGroupoids(X.site, stage, restrict, name=name or f"{X.name}×{Y.name}")


def full_subpresheaf(X: PresheafOfGroupoids, keep: Callable, name: str) -> PresheafOfGroupoids:
    """Full sub-presheaf on the objects x of X(U) with keep(U, x); must be restriction-closed."""
    from ..groupoid.core import FullSubgroupoid

    def stage(U):
        XU = X.stage(U)
        return FullSubgroupoid(XU, [x for x in XU.objects if keep(U, x)])

    def restrict(f):
        R = X.restrict(f)
        return GroupoidFunctor(stage(f.tgt), stage(f.src), R.obj, R.mor)

    return PresheafOfGroupoids(X.site, stage, restrict, name=name)


# -- Čech descent ------------------------------------------------------------------

def _indices(cover, level: int) -> list[tuple]:
    n = len(cover.members)
    out = []
    for idx in itertools.combinations_with_replacement(range(n), level + 1):
        if cover.intersection(idx) is not None:
            out.append(idx)
    return out


def cech_cosimplicial(X: PresheafOfGroupoids, U: str, cover) -> tuple[CosimplicialGroupoid2, GroupoidFunctor]:
    """Levels ∏ X(U_{i₀…iₙ}) over nondecreasing index tuples with nonempty intersection."""
    site = X.site
    idx = [_indices(cover, n) for n in range(3)]
    regions = [[cover.intersection(t) for t in lvl] for lvl in idx]
    levels = [ProductGroupoid([X.stage(r) for r in regs], name=f"{X.name}(U_•{n})")
              for n, regs in enumerate(regions)]
    pos = [{t: k for k, t in enumerate(lvl)} for lvl in idx]

    def incl(small, big):
        return site.inclusion(small, big) if small != big else site.identity(small)

    def coface(n, k):
        """d^k : level n-1 → level n (delete the k-th index)."""
        parts = []
        for t in idx[n]:
            s = t[:k] + t[k + 1:]
            parts.append((pos[n - 1][s], X.restrict(incl(cover.intersection(t), cover.intersection(s)))))

        def on_obj(x):
            return tuple(R.obj(x[p]) for p, R in parts)

        def on_mor(m):
            return tuple(R.mor(m[p]) for p, R in parts)

        return GroupoidFunctor(levels[n - 1], levels[n], on_obj, on_mor, name=f"d{k}")

    diag = [pos[1][(i, i)] for i in range(len(cover.members))]
    s0 = GroupoidFunctor(levels[1], levels[0], lambda y: tuple(y[p] for p in diag),
                         lambda m: tuple(m[p] for p in diag), name="s0")
    D = CosimplicialGroupoid2(levels[0], levels[1], levels[2], coface(1, 0), coface(1, 1),
                              coface(2, 0), coface(2, 1), coface(2, 2), s0)
    D.index_tuples = idx
    G1 = levels[1]
    off = [k for k, t in enumerate(idx[1]) if t[0] != t[1]]

    def candidates(x0):
        src, tgt = D.d1.obj(x0), D.d0.obj(x0)
        parts = []
        for k, F in enumerate(G1.factors):
            if k in off:
                parts.append(list(F.hom(src[k], tgt[k])))
            else:
                parts.append([F.identity(src[k])])
        return itertools.product(*parts)

    def count_candidates(x0):
        src, tgt = D.d1.obj(x0), D.d0.obj(x0)
        n = 1
        for k in off:
            F = G1.factors[k]
            if F.component_key(src[k]) != F.component_key(tgt[k]):
                return 0
            n *= F.aut_order(src[k])
        return n

    D.candidates = candidates
    # with normalized diagonals, the cocycle law only constrains triples of distinct indices
    if not any(len(set(t)) == 3 for t in idx[2]):
        D.count_valid = count_candidates
    restr = [X.restrict(incl(m, U)) for m in cover.members]
    aug = GroupoidFunctor(X.stage(U), levels[0], lambda x: tuple(R.obj(x) for R in restr),
                          lambda m: tuple(R.mor(m) for R in restr), name="aug")
    return D, aug


@dataclass
class StackReport:
    ok: bool
    witness: tuple | None = None  # (object, cover name, reason)

    def __bool__(self):
        return self.ok


def descent_comparison_for(X: PresheafOfGroupoids, U: str, cover,
                           max_enumeration: int = DEFAULT_MAX_ENUMERATION):
    D, aug = cech_cosimplicial(X, U, cover)
    H = DescentGroupoid(D, name=f"holim {X.name}({cover.name})", max_enumeration=max_enumeration)
    return H, descent_comparison(H, aug)


def is_stack(X: PresheafOfGroupoids, max_enumeration: int = DEFAULT_MAX_ENUMERATION) -> StackReport:
    """X(U) → holim X(U_•) must be a weak equivalence for every declared cover."""
    for U in X.site.objects:
        for cover in X.site.covers[U]:
            if cover.is_trivial():
                continue
            H, c = descent_comparison_for(X, U, cover, max_enumeration)
            ok, why = weak_equivalence_report(c)
            if not ok:
                return StackReport(False, (U, cover.name, why))
    return StackReport(True)


# -- global / local predicates ---------------------------------------------------------

@dataclass
class StageReport:
    ok: bool
    failing: str | None = None
    reason: str = ""

    def __bool__(self):
        return self.ok


def is_global_fibration(f: PresheafMorphism) -> StageReport:
    for U in f.site.objects:
        ok, why = fibration_report(f.component(U))
        if not ok:
            return StageReport(False, U, why)
    return StageReport(True)


def is_global_weq(f: PresheafMorphism) -> StageReport:
    for U in f.site.objects:
        ok, why = weak_equivalence_report(f.component(U))
        if not ok:
            return StageReport(False, U, why)
    return StageReport(True)


def holim_map(f: PresheafMorphism, DX: CosimplicialGroupoid2, DY: CosimplicialGroupoid2,
              HX: DescentGroupoid, HY: DescentGroupoid, cover) -> GroupoidFunctor:
    """holim f : (x, h) ↦ (f⁰x, f¹h) on descent groupoids of the same cover."""
    idx = DX.index_tuples
    c0 = [f.component(cover.intersection(t)) for t in idx[0]]
    c1 = [f.component(cover.intersection(t)) for t in idx[1]]

    def on_obj(o):
        x, h = o
        return (tuple(F.obj(a) for F, a in zip(c0, x)), tuple(F.mor(a) for F, a in zip(c1, h)))

    def on_mor(m):
        h, g = m
        return (tuple(F.mor(a) for F, a in zip(c1, h)), tuple(F.mor(a) for F, a in zip(c0, g)))

    return GroupoidFunctor(HX, HY, on_obj, on_mor, name=f"holim {f.name}")


def is_local_fibration(f: PresheafMorphism, max_enumeration: int = DEFAULT_MAX_ENUMERATION
                       ) -> StageReport:
    """Stage-wise fibration whose Čech squares are homotopy pullbacks."""
    rep = is_global_fibration(f)
    if not rep:
        return rep
    X, Y = f.source, f.target
    for U in f.site.objects:
        for cover in f.site.covers[U]:
            if cover.is_trivial():
                continue
            DX, augX = cech_cosimplicial(X, U, cover)
            DY, augY = cech_cosimplicial(Y, U, cover)
            HX = DescentGroupoid(DX, max_enumeration=max_enumeration)
            HY = DescentGroupoid(DY, max_enumeration=max_enumeration)
            cX, cY = descent_comparison(HX, augX), descent_comparison(HY, augY)
            if is_weak_equivalence(cX) and is_weak_equivalence(cY):
                continue  # both horizontal maps are weak equivalences
            hf = holim_map(f, DX, DY, HX, HY, cover)
            P = HomotopyFiberProduct(cY, hf, max_enumeration=max_enumeration)
            fU = f.component(U)
            XU = X.stage(U)

            def on_obj(x, fU=fU, cX=cX, HY=HY, cY=cY):
                return (fU.obj(x), cX.obj(x), HY.identity(cY.obj(fU.obj(x))))

            def on_mor(m, fU=fU, cX=cX, HY=HY, cY=cY, XU=XU):
                y = fU.obj(XU.source(m))
                return (HY.identity(cY.obj(y)), fU.mor(m), cX.mor(m))

            canon = GroupoidFunctor(XU, P, on_obj, on_mor, name="canonical")
            ok, why = weak_equivalence_report(canon)
            if not ok:
                return StageReport(False, U, f"cover {cover.name}: square is not a homotopy pullback ({why})")
    return StageReport(True)


# -- homotopy sheaves -----------------------------------------------------------------

class SetPresheaf:
    """F : C^op → Set on a site-like object; ``restrict(m, s)`` for m : a → b maps F(b) → F(a)."""

    def __init__(self, site, stage_fn: Callable, restrict_fn: Callable, name: str = "F"):
        self.site = site
        self.name = name
        self._stage_fn = stage_fn
        self._restrict_fn = restrict_fn
        self._stages: dict = {}

    def stage(self, a) -> tuple:
        if a not in self._stages:
            self._stages[a] = tuple(self._stage_fn(a))
        return self._stages[a]

    def restrict(self, m, s):
        return self._restrict_fn(m, s)


def pi0(X: PresheafOfGroupoids) -> SetPresheaf:
    def stage(U):
        return X.stage(U).component_reps()

    def restrict(f, x):
        return X.stage(f.src).component_rep(X.restrict(f).obj(x))

    return SetPresheaf(X.site, stage, restrict, name=f"π₀{X.name}")


def pi1(X: PresheafOfGroupoids, U: str, x) -> SetPresheaf:
    """V ↦ Aut(f*x) on the over-site C/U; restriction acts on morphisms."""
    from .site import OverSite
    if not X.stage(U).has_object(x):
        raise ContractViolation(f"{x!r} is not an object of {X.name}({U})")
    over = OverSite(X.site, U)

    def stage(a):
        V, f = a
        y = X.restrict(f).obj(x)
        return list(X.stage(V).aut(y))

    def restrict(m, g):
        return X.restrict(m.map).mor(g)

    return SetPresheaf(over, stage, restrict, name=f"π₁({X.name},{U})")


def _top_members(site, a):
    if hasattr(site, "top_members"):
        return site.top_members(a)
    c = site.top_cover(a)
    return [(m, site.inclusion(m, a) if m != a else site.identity(a)) for m in c.members]


def _top_pairs(site, a):
    if hasattr(site, "top_pairs"):
        return site.top_pairs(a)
    c = site.top_cover(a)
    out = {}
    for (i, j), name in c.pairs.items():
        out[i, j] = None if name is None else (name, site.inclusion(name, c.members[i]),
                                               site.inclusion(name, c.members[j]))
    return out


def plus(F: SetPresheaf) -> SetPresheaf:
    """Matching families on the finest cover of each object."""
    site = F.site

    def stage(a):
        members = _top_members(site, a)
        if len(members) == 1 and members[0][0] == a:
            return [(s,) for s in F.stage(a)]
        pairs = _top_pairs(site, a)
        out = []
        for fam in itertools.product(*[F.stage(m) for m, _ in members]):
            ok = True
            for (i, j), data in pairs.items():
                if data is None:
                    continue
                _, li, lj = data
                if F.restrict(li, fam[i]) != F.restrict(lj, fam[j]):
                    ok = False
                    break
            if ok:
                out.append(tuple(fam))
        return out

    def restrict(m, fam):
        src_members = _top_members(site, site.source_of(m))
        out = []
        for j in range(len(src_members)):
            i, mm = site.factor_through_top(m, j)
            out.append(F.restrict(mm, fam[i]))
        return tuple(out)

    return SetPresheaf(site, stage, restrict, name=f"{F.name}⁺")


def sheafify(F: SetPresheaf) -> SetPresheaf:
    """Plus construction applied twice."""
    return plus(plus(F))


def sheafified_map(F: SetPresheaf, G: SetPresheaf, phi: Callable):
    """The map F⁺⁺ → G⁺⁺ induced by a = phi(obj, s): F(obj) → G(obj)."""
    site = F.site

    def plus_map(psi):
        def inner(a, fam):
            members = _top_members(site, a)
            return tuple(psi(m, s) for (m, _), s in zip(members, fam))
        return inner

    return plus_map(plus_map(phi))


def _is_iso_of_sheaves(F: SetPresheaf, G: SetPresheaf, phi: Callable, objects) -> tuple[bool, str]:
    FF, GG = sheafify(F), sheafify(G)
    psi = sheafified_map(F, G, phi)
    for a in objects:
        img = [psi(a, s) for s in FF.stage(a)]
        if len(set(img)) != len(img) or set(img) != set(GG.stage(a)):
            return False, f"{F.name} → {G.name} is not bijective at {a!r}"
    return True, ""


def is_local_weq(f: PresheafMorphism, max_enumeration: int = DEFAULT_MAX_ENUMERATION) -> StageReport:
    """Stage-wise between stacks; otherwise via sheafified π₀ and π₁."""
    X, Y = f.source, f.target
    if is_stack(X, max_enumeration) and is_stack(Y, max_enumeration):
        return is_global_weq(f)
    site = f.site
    P0X, P0Y = pi0(X), pi0(Y)

    def phi0(U, x):
        return Y.stage(U).component_rep(f.component(U).obj(x))

    ok, why = _is_iso_of_sheaves(P0X, P0Y, phi0, site.objects)
    if not ok:
        return StageReport(False, None, why)
    for U in site.objects:
        for x in X.stage(U).component_reps():
            F1, G1 = pi1(X, U, x), pi1(Y, U, f.component(U).obj(x))

            def phi1(a, g):
                return f.component(a[0]).mor(g)

            ok, why = _is_iso_of_sheaves(F1, G1, phi1, F1.site.objects)
            if not ok:
                return StageReport(False, U, why)
    return StageReport(True)


# -- ♭, ♯, ζ -------------------------------------------------------------------------

def flat(X: PresheafOfGroupoids) -> PresheafOfGroupoids:
    G = X.stage(PT)
    return PresheafOfGroupoids(X.site, lambda U: G, lambda f: identity_functor(G), name=f"♭{X.name}")


def sharp(X: PresheafOfGroupoids) -> PresheafOfGroupoids:
    """♯X(U) = ∏_{p ∈ Hom(pt, U)} X(pt), restriction by reindexing points."""
    site = X.site
    base = X.stage(PT)

    def stage(U):
        return ProductGroupoid([base] * len(site.points(U)), name=f"♯{X.name}({U})")

    def restrict(f):
        pts_U = {p: k for k, p in enumerate(site.points(f.tgt))}
        sel = [pts_U[site.compose(f, q)] for q in site.points(f.src)]
        return GroupoidFunctor(stage(f.tgt), stage(f.src), lambda x: tuple(x[k] for k in sel),
                               lambda m: tuple(m[k] for k in sel))

    S = PresheafOfGroupoids(site, stage, restrict, name=f"♯{X.name}")
    S.base = X
    return S


def zeta(X: PresheafOfGroupoids, SX: PresheafOfGroupoids | None = None) -> PresheafMorphism:
    """ζ : X → ♯X, evaluation at points."""
    SX = SX or sharp(X)
    site = X.site

    def comp(U):
        rs = [X.restrict(p) for p in site.points(U)]
        return GroupoidFunctor(X.stage(U), SX.stage(U), lambda x: tuple(R.obj(x) for R in rs),
                               lambda m: tuple(R.mor(m) for R in rs), name="ζ")

    return PresheafMorphism(X, SX, comp, name="ζ")


def sharp_map(f: PresheafMorphism, SX: PresheafOfGroupoids | None = None,
              SY: PresheafOfGroupoids | None = None) -> PresheafMorphism:
    """♯f : ♯X → ♯Y, f at the point stage applied to each point.

    When f's point component has ``lift`` (unique lifting of every morphism), so does ♯f.
    """
    SX = SX or sharp(f.source)
    SY = SY or sharp(f.target)
    fpt = f.component(PT)
    base_lift = getattr(fpt, "lift", None)

    def comp(U):
        F = GroupoidFunctor(SX.stage(U), SY.stage(U), lambda x: tuple(fpt.obj(a) for a in x),
                            lambda m: tuple(fpt.mor(a) for a in m), name=f"♯{f.name}")
        if base_lift is not None:
            F.lift = lambda x, m: tuple(base_lift(a, b) for a, b in zip(x, m))
        return F

    return PresheafMorphism(SX, SY, comp, name=f"♯{f.name}")


def flat_counit(X: PresheafOfGroupoids) -> PresheafMorphism:
    """ε : ♭X → X, restriction along the unique map U → pt."""
    FX = flat(X)
    site = X.site

    def comp(U):
        bang = site.hom(U, PT)[0]
        R = X.restrict(bang)
        return GroupoidFunctor(FX.stage(U), X.stage(U), R.obj, R.mor, name="ε")

    return PresheafMorphism(FX, X, comp, name="ε")


def sharp_unit_flat(X: PresheafOfGroupoids) -> PresheafMorphism:
    """η : ♭X → ♯♭X; with ζ on ♭X this is the unit of the adjunction at ♭X."""
    return zeta(flat(X))


# -- homotopy fiber products and internal homs -------------------------------------------

def hofib_presheaf(f1: PresheafMorphism, f2: PresheafMorphism,
                   max_enumeration: int = DEFAULT_MAX_ENUMERATION) -> PresheafOfGroupoids:
    X, Y, Z = f1.source, f2.source, f1.target

    def stage(U):
        return HomotopyFiberProduct(f1.component(U), f2.component(U), max_enumeration=max_enumeration)

    def restrict(l):
        a, b, c = X.restrict(l), Y.restrict(l), Z.restrict(l)
        return GroupoidFunctor(stage(l.tgt), stage(l.src),
                               lambda o: (a.obj(o[0]), b.obj(o[1]), c.mor(o[2])),
                               lambda m: (c.mor(m[0]), a.mor(m[1]), b.mor(m[2])))

    return PresheafOfGroupoids(X.site, stage, restrict, name=f"{X.name}×ʰ{Y.name}")


def fiber_product_presheaf(f1: PresheafMorphism, f2: PresheafMorphism) -> PresheafOfGroupoids:
    from ..groupoid.homotopy import FiberProduct
    X, Y = f1.source, f2.source

    def stage(U):
        return FiberProduct(f1.component(U), f2.component(U))

    def restrict(l):
        a, b = X.restrict(l), Y.restrict(l)
        return GroupoidFunctor(stage(l.tgt), stage(l.src), lambda o: (a.obj(o[0]), b.obj(o[1])),
                               lambda m: (a.mor(m[0]), b.mor(m[1])))

    return PresheafOfGroupoids(X.site, stage, restrict, name=f"{X.name}×{Y.name}")


def fiber_to_hofib(f1: PresheafMorphism, f2: PresheafMorphism, P: PresheafOfGroupoids,
                   H: PresheafOfGroupoids) -> PresheafMorphism:
    Z = f1.target

    def comp(U):
        PU = P.stage(U)
        return GroupoidFunctor(PU, H.stage(U),
                               lambda o: (o[0], o[1], Z.stage(U).identity(f1.component(U).obj(o[0]))),
                               lambda m: (Z.stage(U).identity(f1.component(U).obj(PU.source(m)[0])),
                                          m[0], m[1]))

    return PresheafMorphism(P, H, comp, name="strict→homotopy")


def _backtrack(variables: list, domains: dict, constraints: dict, limit: int, what: str) -> list:
    """All assignments var ↦ domain value satisfying every binary constraint.

    ``constraints[v]`` lists (w, test) with test(value_v, value_w) for each w ordered
    before v; checks run as soon as both ends are assigned.
    """
    out = []
    chosen: dict = {}

    def rec(k):
        if k == len(variables):
            out.append(dict(chosen))
            if len(out) > limit:
                raise EnumerationLimit(f"more than {limit} {what}")
            return
        v = variables[k]
        for val in domains[v]:
            if all(test(val, val if w == v else chosen[w]) for w, test in constraints.get(v, ())):
                chosen[v] = val
                rec(k + 1)
                del chosen[v]

    rec(0)
    return out


class _LazyTable:
    """Memoized integer table computed on first access."""

    def __init__(self, fn):
        self._fn = fn
        self._memo: dict = {}

    def __getitem__(self, j):
        r = self._memo.get(j)
        if r is None:
            r = self._fn(j)
            self._memo[j] = r
        return r


class _StageData:
    """Skeleta of A and B and the index form of their restriction functors."""

    def __init__(self, A, B, max_enumeration):
        from ..groupoid.model import Skeleton
        site = A.site
        # larger regions first so restrictions propagate downward
        self.objs = sorted(site.objects, key=lambda U: -len(site.region(U).vertices))
        self.SA = {U: Skeleton(A.stage(U).materialize(max_enumeration)) for U in self.objs}
        self.SB = {U: Skeleton(B.stage(U).materialize(max_enumeration)) for U in self.objs}
        self.rA, self.rB = {}, {}
        self.morphisms = [f for f in site.morphisms()]
        for f in self.morphisms:
            self.rA[f] = self._table(A, self.SA, f)
            self.rB[f] = self._table(B, self.SB, f)
        self.comp_of = {}
        for U in self.objs:
            tab = {}
            for c, comp in enumerate(self.SA[U].components):
                for b in comp[1]:
                    tab[b] = c
            self.comp_of[U] = tab
        pos = {U: k for k, U in enumerate(self.objs)}
        self.links = []  # (f, c in A(f.tgt), c′ in A(f.src))
        for f in self.morphisms:
            U, V = f.tgt, f.src
            for c, comp in enumerate(self.SA[U].components):
                cp = self.comp_of[V][self.rA[f][0][comp[0]]]
                self.links.append((f, (U, c), (V, cp)))
        self.variables = [(U, c) for U in self.objs for c in range(len(self.SA[U].components))]
        order = {v: k for k, v in enumerate(self.variables)}
        self.order = order
        self.pos = pos

    @staticmethod
    def _table(P, S, f):
        R = P.restrict(f)
        src, tgt = S[f.tgt], S[f.src]
        oi = {x: k for k, x in enumerate(tgt.objs)}
        return (tuple(oi[R.obj(x)] for x in src.objs),
                _LazyTable(lambda j: tgt._mi[R.mor(src.mors[j])]))

    def generating(self, U, c) -> tuple:
        """Tree edges and vertex-group generators of a component of A(U); a functor on the
        component is determined by their images."""
        b0, order, tree, K, gens, mors, kf = self.SA[U].components[c]
        return tuple(tree[x] for x in order[1:]) + tuple(gens)

    def constraints(self, make_test):
        cons: dict = {}
        for f, vu, vv in self.links:
            if vu == vv:
                t = make_test(f, vu, vv)
                cons.setdefault(vu, []).append((vu, lambda a, b, t=t: t(a, a)))
                continue
            t = make_test(f, vu, vv)
            if self.order[vu] > self.order[vv]:
                cons.setdefault(vu, []).append((vv, t))
            else:
                cons.setdefault(vv, []).append((vu, lambda a, b, t=t: t(b, a)))
        return cons


def mapping_groupoid(A: PresheafOfGroupoids, B: PresheafOfGroupoids,
                     max_enumeration: int = DEFAULT_MAX_ENUMERATION,
                     over: tuple | None = None) -> FiniteGroupoid:
    """Grpd_H(A, B): presheaf morphisms A → B and their stage-wise natural transformations.

    A morphism is assembled from functors on each connected component of each
    stage; naturality links components across stages and is solved by
    backtracking. With ``over = (fA, fB)`` only morphisms φ with fB∘φ = fA and
    homotopies η with fB(η) = identity are kept (the mapping groupoid in H/K).
    """
    from ..groupoid.model import Skeleton, component_functor_choices, table_functor
    sd = _StageData(A, B, max_enumeration)
    SA, SB, rA, rB = sd.SA, sd.SB, sd.rA, sd.rB
    site = A.site
    objs = list(site.objects)
    domains = {}
    for U in sd.objs:
        if over is None:
            per = component_functor_choices(SA[U], SB[U])
        else:
            fA, fB = over
            SK = Skeleton(fA.target.stage(U).materialize(max_enumeration))
            oi = {x: k for k, x in enumerate(SK.objs)}
            FA, FB = fA.component(U), fB.component(U)
            fa_o = [oi[FA.obj(x)] for x in SA[U].objs]
            fa_m = [SK._mi[FA.mor(m)] for m in SA[U].mors]
            fb_o = [oi[FB.obj(x)] for x in SB[U].objs]
            fb_m = [SK._mi[FB.mor(m)] for m in SB[U].mors]
            per = component_functor_choices(SA[U], SB[U], lambda x, y: fb_o[y] == fa_o[x],
                                            lambda j, m: fb_m[m] == fa_m[j])
        for c, opts in enumerate(per):
            domains[(U, c)] = opts

    def obj_test(f, vu, vv):
        ao, am = rA[f]
        bo, bm = rB[f]

        gen = sd.generating(*vu)

        def test(val_u, val_v):
            fo_u, fm_u = val_u
            fo_v, fm_v = val_v
            for x, y in fo_u.items():
                if bo[y] != fo_v[ao[x]]:
                    return False
            for j in gen:
                if bm[fm_u[j]] != fm_v[am[j]]:
                    return False
            return True

        return test

    sols = _backtrack(sd.variables, domains, sd.constraints(obj_test), max_enumeration,
                      f"presheaf morphisms {A.name} → {B.name}")

    def assemble(sol):
        tabs = []
        for U in objs:
            fo = [0] * SA[U].n
            fm = [0] * len(SA[U].mors)
            for c in range(len(SA[U].components)):
                o, m = sol[(U, c)]
                for k, v in o.items():
                    fo[k] = v
                for k, v in m.items():
                    fm[k] = v
            tabs.append((tuple(fo), tuple(fm)))
        return tuple(tabs)

    results = [assemble(s) for s in sols]
    k_of = {U: k for k, U in enumerate(objs)}

    def eta_domains(a, b):
        dom = {}
        for U in sd.objs:
            S, T = SA[U], SB[U]
            (fo, fm), (go, gm) = a[k_of[U]], b[k_of[U]]
            for c, (b0, order, tree, K, gens, mors, kf) in enumerate(S.components):
                opts = []
                for e in T.hom.get((fo[b0], go[b0]), []):
                    if any(T.comp(gm[k], e) != T.comp(e, fm[k]) for k in gens):
                        continue
                    comp = {}
                    for x in order:
                        t = tree[x]
                        comp[x] = T.comp(gm[t], T.comp(e, T.inv[fm[t]]))
                    if over is not None:
                        FB = over[1].component(U)
                        KU = over[1].target.stage(U)
                        if any(FB.mor(T.mors[v]) != KU.identity(FB.obj(T.G.source(T.mors[v])))
                               for v in comp.values()):
                            continue
                    opts.append(comp)
                dom[(U, c)] = opts
        return dom

    def eta_test(f, vu, vv):
        ao = rA[f][0]
        bm = rB[f][1]

        def test(eu, ev):
            return all(bm[y] == ev[ao[x]] for x, y in eu.items())

        return test

    eta_cons = sd.constraints(eta_test)
    mors = []
    for a in results:
        for b in results:
            for sol in _backtrack(sd.variables, eta_domains(a, b), eta_cons, max_enumeration,
                                  "homotopies"):
                comps = []
                for U in objs:
                    row = [None] * SA[U].n
                    for c in range(len(SA[U].components)):
                        for x, v in sol[(U, c)].items():
                            row[x] = SB[U].mors[v]
                    comps.append(tuple(row))
                mors.append(((a, b, tuple(comps)), a, b))
                if len(mors) > max_enumeration:
                    raise EnumerationLimit("mapping groupoid: too many homotopies")

    def compose(g, f):
        comps = tuple(tuple(B.stage(U).compose(gc, fc) for gc, fc in zip(g[2][k], f[2][k]))
                      for k, U in enumerate(objs))
        return (f[0], g[1], comps)

    def identity(a):
        comps = tuple(tuple(B.stage(U).identity(SB[U].objs[o]) for o in a[k][0])
                      for k, U in enumerate(objs))
        return (a, a, comps)

    def inverse(f):
        comps = tuple(tuple(B.stage(U).inverse(c) for c in f[2][k]) for k, U in enumerate(objs))
        return (f[1], f[0], comps)

    G = FiniteGroupoid(results, mors, compose, identity, inverse, name=f"[{A.name},{B.name}]",
                       validate=False)
    fun = {r: {U: table_functor(SA[U], SB[U], r[k]) for k, U in enumerate(objs)} for r in results}
    G.morphism_of = {r: PresheafMorphism(A, B, (lambda U, r=r: fun[r][U]), name="φ") for r in results}
    return G


def internal_hom(X: PresheafOfGroupoids, Y: PresheafOfGroupoids,
                 max_enumeration: int = DEFAULT_MAX_ENUMERATION) -> PresheafOfGroupoids:
    """Y^X(U) = Grpd_H(y(U) × X, Y); restriction by precomposition with y(ℓ) × id."""
    site = X.site
    objs = list(site.objects)
    cache: dict = {}

    def source(U):
        return product_presheaf(representable(site, U), X)

    def stage(U):
        if U not in cache:
            cache[U] = mapping_groupoid(source(U), Y, max_enumeration)
        return cache[U]

    def restrict(l):
        V, U = l.src, l.tgt
        GU, GV = stage(U), stage(V)
        SV = source(V)
        from ..groupoid.model import Skeleton
        # φ ↦ φ∘(ℓ∘- × id): stage W of the new morphism at (h : W → V, x) is φ_W(ℓ∘h, x)
        skA_U = {W: Skeleton(source(U).stage(W).materialize(max_enumeration)) for W in objs}
        skA_V = {W: Skeleton(SV.stage(W).materialize(max_enumeration)) for W in objs}
        skB = {W: Skeleton(Y.stage(W).materialize(max_enumeration)) for W in objs}

        def pull_table(k, W, tab):
            # tab: functor table source(U)(W) → Y(W); returns table for source(V)(W)
            A_U, A_V = skA_U[W], skA_V[W]
            oi = {x: j for j, x in enumerate(A_U.objs)}
            fo = tuple(tab[0][oi[(site.compose(l, h), x)]] for (h, x) in A_V.objs)
            fm = tuple(tab[1][A_U._mi[(("id", site.compose(l, m[0][1])), m[1])]] for m in A_V.mors)
            return fo, fm

        def on_obj(phi):
            return tuple(pull_table(k, W, phi[k]) for k, W in enumerate(objs))

        def on_mor(m):
            a, b, comps = m
            new = []
            for k, W in enumerate(objs):
                A_U, A_V = skA_U[W], skA_V[W]
                oi = {x: j for j, x in enumerate(A_U.objs)}
                new.append(tuple(comps[k][oi[(site.compose(l, h), x)]] for (h, x) in A_V.objs))
            return (on_obj(a), on_obj(b), tuple(new))

        return GroupoidFunctor(GU, GV, on_obj, on_mor)

    return PresheafOfGroupoids(site, stage, restrict, name=f"{Y.name}^{X.name}")


# -- Čech replacement ----------------------------------------------------------------------

def cech_replacement(X: PresheafOfGroupoids, charts: list[tuple[str, object]]):
    """V̌ for charts ρ_α ∈ X(V_α) (Yoneda), with q : V̌ → X.

    Stage U has objects (α, ν : U → V_α) and a unique morphism (α, ν) → (β, ν′)
    exactly when X(ν)(ρ_α) = X(ν′)(ρ_β).
    """
    site = X.site

    def image(U, o):
        a, nu = o
        V, rho = charts[a]
        return X.restrict(nu).obj(rho)

    def stage(U):
        objs = [(a, nu) for a, (V, _) in enumerate(charts) for nu in site.hom(U, V)]
        imgs = {o: image(U, o) for o in objs}
        mors = [((o, p), o, p) for o in objs for p in objs if imgs[o] == imgs[p]]
        return FiniteGroupoid(objs, mors, lambda g, f: (f[0], g[1]), lambda o: (o, o),
                              lambda f: (f[1], f[0]), name="V̌", validate=False)

    def restrict(l):
        def ro(o):
            return (o[0], site.compose(o[1], l))
        return GroupoidFunctor(stage(l.tgt), stage(l.src), ro, lambda m: (ro(m[0]), ro(m[1])))

    Vc = PresheafOfGroupoids(site, stage, restrict, name="V̌")

    def qcomp(U):
        XU = X.stage(U)
        return GroupoidFunctor(Vc.stage(U), XU, lambda o: image(U, o),
                               lambda m: XU.identity(image(U, m[0])), name="q")

    q = PresheafMorphism(Vc, X, qcomp, name="q")
    Vc.charts = charts
    return Vc, q


def cech_lift(Vc: PresheafOfGroupoids, p: PresheafMorphism, v: PresheafMorphism,
              choices: list) -> PresheafMorphism:
    """Lift w : V̌ → Y of v : V̌ → Z through a stage-wise acyclic fibration p : Y → Z.

    ``choices[α]`` is an object of Y(V_α) over v(α, id); the rest is forced:
    w(α, ν) = Y(ν)(y_α) and w on the unique morphism is the unique preimage under p.
    """
    Y = p.source
    site = Vc.site
    charts = Vc.charts
    for a, (V, _) in enumerate(charts):
        if p.component(V).obj(choices[a]) != v.component(V).obj((a, site.identity(V))):
            raise ContractViolation(f"choice for chart {a} does not lie over v(α, id)")

    def comp(U):
        YU = Y.stage(U)
        pU, vU = p.component(U), v.component(U)

        def on_obj(o):
            a, nu = o
            return Y.restrict(nu).obj(choices[a])

        def on_mor(m):
            s, t = on_obj(m[0]), on_obj(m[1])
            target = vU.mor(m)
            for g in YU.hom(s, t):
                if pU.mor(g) == target:
                    return g
            raise ContractViolation("p is not fully faithful: no preimage for the lift")

        return GroupoidFunctor(Vc.stage(U), YU, on_obj, on_mor, name="w")

    return PresheafMorphism(Vc, Y, comp, name="w")
