"""Descent homotopy limits, homotopy fiber products, pushouts and pushout products."""
from __future__ import annotations

import itertools
from collections import deque
from dataclasses import dataclass
from fractions import Fraction

from ..errors import ContractViolation, EnumerationLimit, StructuralError
from .core import (DEFAULT_MAX_ENUMERATION, FiniteGroupoid, Groupoid, GroupoidFunctor,
                   ProductGroupoid, functors_equal, identity_functor)
from .model import is_cofibration, is_fully_faithful


@dataclass
class CosimplicialGroupoid2:
    """Levels G⁰, G¹, G² with cofaces d⁰, d¹ : G⁰ → G¹, d⁰, d¹, d² : G¹ → G² and s⁰ : G¹ → G⁰."""

    G0: Groupoid
    G1: Groupoid
    G2: Groupoid
    d0: GroupoidFunctor
    d1: GroupoidFunctor
    e0: GroupoidFunctor
    e1: GroupoidFunctor
    e2: GroupoidFunctor
    s0: GroupoidFunctor

    def check(self):
        ident = identity_functor(self.G0)
        if not functors_equal(self.d0.then(self.s0), ident):
            raise StructuralError("s⁰∘d⁰ is not the identity on G⁰")
        if not functors_equal(self.d1.then(self.s0), ident):
            raise StructuralError("s⁰∘d¹ is not the identity on G⁰")
        # d^j d^i = d^i d^{j-1} for i < j
        pairs = [("d¹d⁰ = d⁰d⁰", self.d0.then(self.e1), self.d0.then(self.e0)),
                 ("d²d⁰ = d⁰d¹", self.d0.then(self.e2), self.d1.then(self.e0)),
                 ("d²d¹ = d¹d¹", self.d1.then(self.e2), self.d1.then(self.e1))]
        for label, a, b in pairs:
            if not functors_equal(a, b):
                raise StructuralError(f"cosimplicial identity {label} fails")

    @staticmethod
    def constant(G: Groupoid) -> "CosimplicialGroupoid2":
        i = identity_functor(G)
        return CosimplicialGroupoid2(G, G, G, i, i, i, i, i, i)


class DescentGroupoid(Groupoid):
    """holim of a level-2 truncated cosimplicial groupoid.

    Objects are pairs (x, h) with h : d¹x → d⁰x in G¹, s⁰(h) = id_x and
    d⁰(h)∘d²(h) = d¹(h) in G². A morphism (x, h) → (x′, h′) is g : x → x′ with
    h′∘d¹(g) = d⁰(g)∘h; its label is (h, g). Valid h are enumerated only at one
    object per component of G⁰ and transported elsewhere along chosen morphisms.
    """

    def __init__(self, D: CosimplicialGroupoid2, name: str = "holim",
                 max_enumeration: int = DEFAULT_MAX_ENUMERATION):
        self.D = D
        self.name = name
        self.max_enumeration = max_enumeration
        self._valid: dict = {}
        self._orbits: dict = {}

    # descent data

    def transport(self, g, h):
        """The unique h′ making g : (x, h) → (x′, h′) a morphism."""
        D = self.D
        G1 = D.G1
        return G1.compose(D.d0.mor(g), G1.compose(h, G1.inverse(D.d1.mor(g))))

    def is_descent_datum(self, x, h) -> bool:
        D = self.D
        if D.s0.mor(h) != D.G0.identity(x):
            return False
        return D.G2.compose(D.e0.mor(h), D.e2.mor(h)) == D.e1.mor(h)

    def valid_at_rep(self, x0) -> list:
        if x0 in self._valid:
            return self._valid[x0]
        D = self.D
        out = []
        n = 0
        cands = getattr(D, "candidates", None)
        pool = cands(x0) if cands else D.G1.hom(D.d1.obj(x0), D.d0.obj(x0))
        for h in pool:
            n += 1
            if n > self.max_enumeration:
                raise EnumerationLimit(f"{self.name}: more than {self.max_enumeration} candidate cocycles")
            if self.is_descent_datum(x0, h):
                out.append(h)
        self._valid[x0] = out
        return out

    def valid_at(self, x) -> list:
        G0 = self.D.G0
        x0 = G0.component_rep(x)
        hs = self.valid_at_rep(x0)
        if x == x0:
            return hs
        g = G0.first_hom(x0, x)
        return [self.transport(g, h) for h in hs]

    def _orbit_table(self, x0):
        if x0 in self._orbits:
            return self._orbits[x0]
        hs = self.valid_at_rep(x0)
        gens = self.D.G0.aut_generators(x0)
        key: dict = {}
        reps, sizes = [], []
        for h in hs:
            if h in key:
                continue
            cid = len(reps)
            reps.append(h)
            key[h] = cid
            queue = deque([h])
            size = 1
            while queue:
                a = queue.popleft()
                for g in gens:
                    b = self.transport(g, a)
                    if b not in key:
                        key[b] = cid
                        queue.append(b)
                        size += 1
            sizes.append(size)
        self._orbits[x0] = (key, reps, sizes)
        return self._orbits[x0]

    def _to_rep(self, obj):
        x, h = obj
        G0 = self.D.G0
        x0 = G0.component_rep(x)
        if x == x0:
            return x0, h
        g = G0.first_hom(x, x0)
        return x0, self.transport(g, h)

    def n_valid_at_rep(self, x0) -> int:
        count = getattr(self.D, "count_valid", None)
        if count is not None and x0 not in self._valid:
            return count(x0)
        return len(self.valid_at_rep(x0))

    def mass(self) -> Fraction:
        """Groupoid cardinality Σ 1/|Aut| over components, without enumerating orbits."""
        G0 = self.D.G0
        return sum((Fraction(self.n_valid_at_rep(x0), G0.aut_order(x0)) for x0 in G0.component_reps()),
                   Fraction(0))

    # groupoid interface

    @property
    def objects(self):
        for x in self.D.G0.objects:
            for h in self.valid_at(x):
                yield (x, h)

    def n_objects(self) -> int:
        G0 = self.D.G0
        counts: dict = {}
        total = 0
        for x in G0.objects:
            x0 = G0.component_rep(x)
            if x0 not in counts:
                counts[x0] = len(self.valid_at_rep(x0))
            total += counts[x0]
        return total

    def has_object(self, obj) -> bool:
        x, h = obj
        D = self.D
        if not D.G0.has_object(x):
            return False
        return D.G1.source(h) == D.d1.obj(x) and D.G1.target(h) == D.d0.obj(x) \
            and self.is_descent_datum(x, h)

    def hom(self, a, b):
        x, h = a
        xp, hp = b
        D = self.D
        G1 = D.G1
        for g in D.G0.hom(x, xp):
            if G1.compose(hp, D.d1.mor(g)) == G1.compose(D.d0.mor(g), h):
                yield (h, g)

    def out(self, a):
        x, h = a
        for g in self.D.G0.out(x):
            yield (h, g)

    def first_hom(self, a, b):
        x0, h0 = self._to_rep(a)
        y0, k0 = self._to_rep(b)
        if x0 != y0:
            return None
        return next(iter(self.hom(a, b)), None)

    def source(self, f):
        h, g = f
        return (self.D.G0.source(g), h)

    def target(self, f):
        h, g = f
        return (self.D.G0.target(g), self.transport(g, h))

    def compose(self, g2, g1):
        return (g1[0], self.D.G0.compose(g2[1], g1[1]))

    def identity(self, obj):
        x, h = obj
        return (h, self.D.G0.identity(x))

    def inverse(self, f):
        h, g = f
        return (self.transport(g, h), self.D.G0.inverse(g))

    def component_key(self, obj):
        x0, h0 = self._to_rep(obj)
        key, _, _ = self._orbit_table(x0)
        return (self.D.G0.component_key(x0), key[h0])

    def component_rep(self, obj):
        x0, h0 = self._to_rep(obj)
        key, reps, _ = self._orbit_table(x0)
        return (x0, reps[key[h0]])

    def component_reps(self) -> list:
        out = []
        for x0 in self.D.G0.component_reps():
            _, reps, _ = self._orbit_table(x0)
            out.extend((x0, h) for h in reps)
        return out

    def aut_order(self, obj) -> int:
        x0, h0 = self._to_rep(obj)
        key, _, sizes = self._orbit_table(x0)
        return self.D.G0.aut_order(x0) // sizes[key[h0]]

    def aut_generators(self, obj):
        return [f for f in self.hom(obj, obj)]


def holim_descent(D: CosimplicialGroupoid2, check: bool = True,
                  max_enumeration: int = DEFAULT_MAX_ENUMERATION) -> DescentGroupoid:
    if check:
        D.check()
    return DescentGroupoid(D, max_enumeration=max_enumeration)


def descent_comparison(holim: DescentGroupoid, aug: GroupoidFunctor) -> GroupoidFunctor:
    """y ↦ (aug(y), identity cocycle); requires d⁰∘aug = d¹∘aug."""
    D = holim.D
    for y in aug.source.objects:
        if D.d0.obj(aug.obj(y)) != D.d1.obj(aug.obj(y)):
            raise ContractViolation("augmentation does not equalize d⁰ and d¹")

    def on_obj(y):
        x = aug.obj(y)
        return (x, D.G1.identity(D.d0.obj(x)))

    def on_mor(f):
        x = aug.obj(aug.source.source(f))
        return (D.G1.identity(D.d0.obj(x)), aug.mor(f))

    return GroupoidFunctor(aug.source, holim, on_obj, on_mor, name="comparison")


def _same_groupoid(A: Groupoid, B: Groupoid) -> bool:
    if A is B:
        return True
    if tuple(A.objects) != tuple(B.objects):
        return False
    if isinstance(A, FiniteGroupoid) and isinstance(B, FiniteGroupoid):
        return A.morphisms() == B.morphisms()
    return True


class HomotopyFiberProduct(Groupoid):
    """Objects (x, y, k : f₁x → f₂y); morphisms (g, h) with k′∘f₁(g) = f₂(h)∘k, labelled (k, g, h)."""

    def __init__(self, f1: GroupoidFunctor, f2: GroupoidFunctor, name: str = "hofib",
                 max_enumeration: int = DEFAULT_MAX_ENUMERATION):
        if not _same_groupoid(f1.target, f2.target):
            raise ContractViolation("homotopy fiber product needs a shared target")
        self.f1, self.f2 = f1, f2
        self.X, self.Y, self.Z = f1.source, f2.source, f1.target
        self.name = name
        self.max_enumeration = max_enumeration
        self._objs = None

    @property
    def objects(self) -> tuple:
        if self._objs is None:
            out = []
            f1, f2, Z = self.f1, self.f2, self.Z
            for x in self.X.objects:
                fx = f1.obj(x)
                for y in self.Y.objects:
                    for k in Z.hom(fx, f2.obj(y)):
                        out.append((x, y, k))
                        if len(out) > self.max_enumeration:
                            raise EnumerationLimit(f"{self.name}: too many objects")
            self._objs = tuple(out)
        return self._objs

    def has_object(self, o) -> bool:
        x, y, k = o
        Z = self.Z
        return self.X.has_object(x) and self.Y.has_object(y) and \
            Z.source(k) == self.f1.obj(x) and Z.target(k) == self.f2.obj(y)

    def _target_k(self, k, g, h):
        Z = self.Z
        return Z.compose(self.f2.mor(h), Z.compose(k, Z.inverse(self.f1.mor(g))))

    def hom(self, a, b):
        x, y, k = a
        xp, yp, kp = b
        for g in self.X.hom(x, xp):
            for h in self.Y.hom(y, yp):
                if self._target_k(k, g, h) == kp:
                    yield (k, g, h)

    def out(self, a):
        x, y, k = a
        for g in self.X.out(x):
            for h in self.Y.out(y):
                yield (k, g, h)

    def generating_out(self, a):
        x, y, k = a
        ix, iy = self.X.identity(x), self.Y.identity(y)
        return [(k, g, iy) for g in self.X.generating_out(x)] + \
            [(k, ix, h) for h in self.Y.generating_out(y)]

    def source(self, m):
        k, g, h = m
        return (self.X.source(g), self.Y.source(h), k)

    def target(self, m):
        k, g, h = m
        return (self.X.target(g), self.Y.target(h), self._target_k(k, g, h))

    def compose(self, m2, m1):
        return (m1[0], self.X.compose(m2[1], m1[1]), self.Y.compose(m2[2], m1[2]))

    def identity(self, o):
        x, y, k = o
        return (k, self.X.identity(x), self.Y.identity(y))

    def inverse(self, m):
        k, g, h = m
        return (self._target_k(k, g, h), self.X.inverse(g), self.Y.inverse(h))


def homotopy_fiber_product_grpd(f1: GroupoidFunctor, f2: GroupoidFunctor,
                                max_enumeration: int = DEFAULT_MAX_ENUMERATION) -> HomotopyFiberProduct:
    return HomotopyFiberProduct(f1, f2, max_enumeration=max_enumeration)


class FiberProduct(Groupoid):
    """Strict fiber product: objects (x, y) with f₁x = f₂y, morphisms (g, h) with f₁g = f₂h."""

    def __init__(self, f1: GroupoidFunctor, f2: GroupoidFunctor, name: str = "pullback"):
        self.f1, self.f2 = f1, f2
        self.X, self.Y = f1.source, f2.source
        self.name = name
        self._objs = None

    @property
    def objects(self) -> tuple:
        if self._objs is None:
            by_image: dict = {}
            for y in self.Y.objects:
                by_image.setdefault(self.f2.obj(y), []).append(y)
            self._objs = tuple((x, y) for x in self.X.objects for y in by_image.get(self.f1.obj(x), ()))
        return self._objs

    def has_object(self, o) -> bool:
        x, y = o
        return self.X.has_object(x) and self.Y.has_object(y) and self.f1.obj(x) == self.f2.obj(y)

    @property
    def _lift(self):
        return getattr(self.f1, "lift", None)

    def hom(self, a, b):
        lift = self._lift
        if lift is not None:
            for h in self.Y.hom(a[1], b[1]):
                g = lift(a[0], self.f2.mor(h))
                if self.X.target(g) == b[0]:
                    yield (g, h)
            return
        hs = list(self.Y.hom(a[1], b[1]))
        by_image: dict = {}
        for h in hs:
            by_image.setdefault(self.f2.mor(h), []).append(h)
        for g in self.X.hom(a[0], b[0]):
            for h in by_image.get(self.f1.mor(g), ()):
                yield (g, h)

    def out(self, a):
        lift = self._lift
        if lift is not None:
            for h in self.Y.out(a[1]):
                yield (lift(a[0], self.f2.mor(h)), h)
            return
        hs = list(self.Y.out(a[1]))
        by_image: dict = {}
        for h in hs:
            by_image.setdefault(self.f2.mor(h), []).append(h)
        for g in self.X.out(a[0]):
            for h in by_image.get(self.f1.mor(g), ()):
                yield (g, h)

    def generating_out(self, a):
        lift = self._lift
        if lift is None:
            return self.out(a)
        return [(lift(a[0], self.f2.mor(h)), h) for h in self.Y.generating_out(a[1])]

    def _lazy_component(self, a):
        table = self.__dict__.setdefault("_lazy_key", {})
        reps = self.__dict__.setdefault("_lazy_reps", [])
        if a not in table:
            cid = len(reps)
            reps.append(a)
            table[a] = cid
            queue = deque([a])
            while queue:
                u = queue.popleft()
                for m in self.generating_out(u):
                    v = self.target(m)
                    if v not in table:
                        table[v] = cid
                        queue.append(v)
        return table[a]

    def component_key(self, a):
        if self._lift is None:
            return super().component_key(a)
        return self._lazy_component(a)

    def component_rep(self, a):
        if self._lift is None:
            return super().component_rep(a)
        return self._lazy_reps[self._lazy_component(a)]

    def source(self, m):
        return (self.X.source(m[0]), self.Y.source(m[1]))

    def target(self, m):
        return (self.X.target(m[0]), self.Y.target(m[1]))

    def compose(self, m2, m1):
        return (self.X.compose(m2[0], m1[0]), self.Y.compose(m2[1], m1[1]))

    def identity(self, o):
        return (self.X.identity(o[0]), self.Y.identity(o[1]))

    def inverse(self, m):
        return (self.X.inverse(m[0]), self.Y.inverse(m[1]))


def fiber_product_comparison(P: FiberProduct, H: HomotopyFiberProduct) -> GroupoidFunctor:
    """Canonical functor from the strict to the homotopy fiber product."""
    Z = H.Z
    return GroupoidFunctor(P, H,
                           lambda o: (o[0], o[1], Z.identity(P.f1.obj(o[0]))),
                           lambda m: (Z.identity(P.f1.obj(P.X.source(m[0]))), m[0], m[1]),
                           name="strict→homotopy")


# -- pushouts ------------------------------------------------------------------

class Pushout:
    """Pushout of H <-A- G -B-> G′ where A is injective on objects and fully faithful.

    Objects of the result are the objects of G′ (tagged "b") and the objects of H
    outside A(G) (tagged "n"). A new object y in a component of H that meets A(G)
    is an isomorphic copy of B(x_y) for a chosen x_y with A(x_y) ≅ y; its morphisms
    are computed in G′. New objects in components missing A(G) keep their H-morphisms.
    """

    def __init__(self, A: GroupoidFunctor, B: GroupoidFunctor, name: str = "pushout"):
        if A.source is not B.source and tuple(A.source.objects) != tuple(B.source.objects):
            raise ContractViolation("pushout legs must share a source")
        if not is_cofibration(A):
            raise ContractViolation("pushout leg A is not a cofibration (not injective on objects)")
        if not is_fully_faithful(A):
            raise ContractViolation("explicit pushouts need the cofibration leg to be fully faithful")
        self.A, self.B = A, B
        G, H, Gp = A.source, A.target, B.target
        self.G, self.H, self.Gp = G, H, Gp
        self.name = name
        image = {A.obj(x): x for x in G.objects}
        comp_anchor: dict = {}
        for y, x in image.items():
            comp_anchor.setdefault(H.component_key(y), y)
        self._image = image
        self._anchor = {}
        for y in H.objects:
            if y in image:
                continue
            k = H.component_key(y)
            if k in comp_anchor:
                a = comp_anchor[k]
                self._anchor[y] = (image[a], H.first_hom(a, y))
        objs = [("b", x) for x in Gp.objects] + [("n", y) for y in H.objects if y not in image]
        self._objs = objs

        def rho(o):
            tag, v = o
            if tag == "b":
                return ("b", v)
            if v in self._anchor:
                return ("b", B.obj(self._anchor[v][0]))
            return ("n", v)

        self._rho = rho
        mors = []
        for a in objs:
            ra = rho(a)
            for b in objs:
                rb = rho(b)
                if ra[0] != rb[0]:
                    continue
                amb = Gp if ra[0] == "b" else H
                for m in amb.hom(ra[1], rb[1]):
                    mors.append(((a, b, m), a, b))

        def compose(g, f):
            amb = Gp if rho(f[0])[0] == "b" else H
            return (f[0], g[1], amb.compose(g[2], f[2]))

        def identity(o):
            r = rho(o)
            amb = Gp if r[0] == "b" else H
            return (o, o, amb.identity(r[1]))

        def inverse(f):
            amb = Gp if rho(f[0])[0] == "b" else H
            return (f[1], f[0], amb.inverse(f[2]))

        self.groupoid = FiniteGroupoid(objs, mors, compose, identity, inverse, name=name,
                                       validate=False)
        self._A_inv = {}
        for x in G.objects:
            for xp in G.objects:
                for g in G.hom(x, xp):
                    self._A_inv[A.mor(g)] = g

    def _h_obj(self, y):
        return ("b", self.B.obj(self._image[y])) if y in self._image else ("n", y)

    def _h_mor(self, h):
        H, Gp, B = self.H, self.Gp, self.B
        s, t = H.source(h), H.target(h)

        def corr(y):
            # morphism A(x_y) → y in H, with x_y
            if y in self._image:
                return self._image[y], H.identity(y)
            if y in self._anchor:
                return self._anchor[y]
            return None

        cs, ct = corr(s), corr(t)
        a, b = self._h_obj(s), self._h_obj(t)
        if cs is None:
            return (a, b, h)
        xs, c_s = cs
        xt, c_t = ct
        core = H.compose(H.inverse(c_t), H.compose(h, c_s))
        return (a, b, B.mor(self._A_inv[core]))

    def leg_H(self) -> GroupoidFunctor:
        return GroupoidFunctor(self.H, self.groupoid, self._h_obj, self._h_mor, name="ι_H")

    def leg_Gp(self) -> GroupoidFunctor:
        Gp = self.Gp
        return GroupoidFunctor(Gp, self.groupoid, lambda x: ("b", x),
                               lambda m: (("b", Gp.source(m)), ("b", Gp.target(m)), m),
                               name="ι_G′")

    def induced(self, alpha: GroupoidFunctor, beta: GroupoidFunctor, name: str = "u") -> GroupoidFunctor:
        """The unique u : P → T with u∘ι_H = α and u∘ι_G′ = β."""
        T = alpha.target
        H = self.H

        def kappa(o):
            tag, v = o
            if tag == "b":
                return T.identity(beta.obj(v))
            if v in self._anchor:
                return alpha.mor(self._anchor[v][1])
            return None

        def on_obj(o):
            tag, v = o
            return beta.obj(v) if tag == "b" else alpha.obj(v)

        def on_mor(m):
            a, b, core = m
            if self._rho(a)[0] == "n":
                return alpha.mor(core)
            ka, kb = kappa(a), kappa(b)
            return T.compose(kb, T.compose(beta.mor(core), T.inverse(ka)))

        return GroupoidFunctor(self.groupoid, T, on_obj, on_mor, name=name)


def pushout_along_cofibration(F: GroupoidFunctor, Fp: GroupoidFunctor) -> Pushout:
    return Pushout(F, Fp)


@dataclass
class PushoutProduct:
    """F □ F′ : P(F, F′) → H × H′.

    ``objects``/``on_objects`` describe the object level, which is always finite.
    ``functor`` is present when one leg is fully faithful, so that the pushout
    can be materialized; otherwise the pushout groupoid may be infinite.
    """

    objects: tuple
    on_objects: dict
    functor: GroupoidFunctor | None
    pushout: Pushout | None

    def is_cofibration(self) -> bool:
        return len(set(self.on_objects.values())) == len(self.objects)


def pushout_product(F: GroupoidFunctor, Fp: GroupoidFunctor) -> PushoutProduct:
    if not is_cofibration(F) or not is_cofibration(Fp):
        raise ContractViolation("pushout product needs two cofibrations")
    G, H = F.source, F.target
    Gp, Hp = Fp.source, Fp.target
    # object level: (y, x′) ∈ H₀ × G′₀ and (x, y′) ∈ G₀ × H′₀ modulo (F x, x′) ~ (x, F′ x′)
    objs, omap = [], {}
    for y in H.objects:
        for xp in Gp.objects:
            o = ("H×G′", y, xp)
            objs.append(o)
            omap[o] = (y, Fp.obj(xp))
    fimg = {F.obj(x) for x in G.objects}
    fpimg = {Fp.obj(xp) for xp in Gp.objects}
    for x in G.objects:
        for yp in Hp.objects:
            if yp in fpimg:
                continue  # identified with (F x, x′)
            o = ("G×H′", x, yp)
            objs.append(o)
            omap[o] = (F.obj(x), yp)
    del fimg
    HxHp = ProductGroupoid([H, Hp], name=f"{H.name}×{Hp.name}")
    GxGp = ProductGroupoid([G, Gp])
    prod_functor = lambda P, Q, on_o, on_m: GroupoidFunctor(P, Q, on_o, on_m)
    left = prod_functor(GxGp, ProductGroupoid([H, Gp]), lambda o: (F.obj(o[0]), o[1]),
                        lambda m: (F.mor(m[0]), m[1]))
    right = prod_functor(GxGp, ProductGroupoid([G, Hp]), lambda o: (o[0], Fp.obj(o[1])),
                         lambda m: (m[0], Fp.mor(m[1])))
    to_HH_from_HGp = prod_functor(left.target, HxHp, lambda o: (o[0], Fp.obj(o[1])),
                                  lambda m: (m[0], Fp.mor(m[1])))
    to_HH_from_GHp = prod_functor(right.target, HxHp, lambda o: (F.obj(o[0]), o[1]),
                                  lambda m: (F.mor(m[0]), m[1]))
    po = None
    functor = None
    if is_fully_faithful(Fp):
        po = Pushout(_materialized(right), _materialized(left))
        functor = po.induced(_retarget(to_HH_from_GHp, po.H), _retarget(to_HH_from_HGp, po.Gp),
                             name="F□F′")
    elif is_fully_faithful(F):
        po = Pushout(_materialized(left), _materialized(right))
        functor = po.induced(_retarget(to_HH_from_HGp, po.H), _retarget(to_HH_from_GHp, po.Gp),
                             name="F□F′")
    return PushoutProduct(tuple(objs), omap, functor, po)


def _materialized(f: GroupoidFunctor) -> GroupoidFunctor:
    S = f.source.materialize()
    T = f.target.materialize()
    return GroupoidFunctor(S, T, f.obj, f.mor, name=f.name)


def _retarget(f: GroupoidFunctor, source: Groupoid) -> GroupoidFunctor:
    return GroupoidFunctor(source, f.target, f.obj, f.mor, name=f.name)


def J() -> GroupoidFunctor:
    """The generating acyclic cofibration {∗} → Δ¹, ∗ ↦ 0."""
    from .core import delta1, point
    P, D = point(), delta1()
    return GroupoidFunctor(P, D, {"*": 0}, {"id*": (0, 0)}, name="J")
