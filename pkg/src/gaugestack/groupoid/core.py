"""Finite groupoids, functors and natural transformations.

A groupoid is accessed through a small interface (objects, hom-sets, composition,
identities, inverses). ``FiniteGroupoid`` stores explicit tables; the lazy classes
(products, action groupoids, descent groupoids) answer the same queries without
materializing every morphism, which keeps Čech levels and gauge stages tractable.
"""
from __future__ import annotations

import itertools
from collections import deque
from typing import Callable, Hashable, Iterable, Iterator, Mapping, Sequence

from ..errors import EnumerationLimit, StructuralError
from .groups import FiniteGroup, closure, greedy_generators

Obj = Hashable
Mor = Hashable

DEFAULT_MAX_ENUMERATION = 500_000


class Groupoid:
    """Interface shared by all groupoid representations.

    Subclasses must provide ``objects``, ``n_objects``, ``has_object``, ``hom``,
    ``source``, ``target``, ``compose`` (``compose(g, f)`` is g∘f), ``identity``
    and ``inverse``. Everything else has a generic (possibly slow) default.
    """

    name = "G"

    @property
    def objects(self) -> Sequence:
        raise NotImplementedError

    def n_objects(self) -> int:
        return len(self.objects)

    def has_object(self, x) -> bool:
        raise NotImplementedError

    def hom(self, x, y) -> Iterable:
        raise NotImplementedError

    def source(self, f):
        raise NotImplementedError

    def target(self, f):
        raise NotImplementedError

    def compose(self, g, f):
        raise NotImplementedError

    def identity(self, x):
        raise NotImplementedError

    def inverse(self, f):
        raise NotImplementedError

    # derived queries

    def out(self, x) -> Iterator:
        for y in self.objects:
            yield from self.hom(x, y)

    def generating_out(self, x) -> Iterable:
        """Morphisms out of x whose targets already reach x's whole component by BFS."""
        return self.out(x)

    def morphisms(self) -> Iterator:
        for x in self.objects:
            yield from self.out(x)

    def first_hom(self, x, y):
        return next(iter(self.hom(x, y)), None)

    def aut(self, x) -> Iterable:
        return self.hom(x, x)

    def aut_order(self, x) -> int:
        return sum(1 for _ in self.aut(x))

    def aut_generators(self, x) -> list:
        return greedy_generators(list(self.aut(x)), self.compose, self.identity(x))

    def _component_table(self):
        cache = getattr(self, "_components_cache", None)
        if cache is not None:
            return cache
        key: dict = {}
        reps: list = []
        for x in self.objects:
            if x in key:
                continue
            cid = len(reps)
            reps.append(x)
            key[x] = cid
            queue = deque([x])
            while queue:
                a = queue.popleft()
                for b in self._neighbours(a):
                    if b not in key:
                        key[b] = cid
                        queue.append(b)
        self._components_cache = (key, reps)
        return self._components_cache

    def _neighbours(self, x) -> Iterable:
        seen = set()
        for f in self.generating_out(x):
            y = self.target(f)
            if y not in seen:
                seen.add(y)
                yield y

    def component_key(self, x) -> Hashable:
        return self._component_table()[0][x]

    def component_rep(self, x):
        key, reps = self._component_table()
        return reps[key[x]]

    def component_reps(self) -> list:
        return list(self._component_table()[1])

    def n_components(self) -> int:
        return len(self.component_reps())

    def isomorphic(self, x, y) -> bool:
        return self.component_key(x) == self.component_key(y)

    def materialize(self, max_enumeration: int = DEFAULT_MAX_ENUMERATION) -> "FiniteGroupoid":
        objs = list(self.objects)
        mors = []
        for f in self.morphisms():
            mors.append((f, self.source(f), self.target(f)))
            if len(mors) > max_enumeration:
                raise EnumerationLimit(f"{self.name}: more than {max_enumeration} morphisms")
        return FiniteGroupoid(objs, mors, self.compose, self.identity, self.inverse,
                              name=self.name, validate=False)


class FiniteGroupoid(Groupoid):
    """Groupoid with explicit object and morphism tables.

    ``morphisms`` is a sequence of ``(label, source, target)``; ``compose``,
    ``identity`` and ``inverse`` may be mappings or callables on labels.
    Composition results are looked up lazily and cached, so large groupoids
    never pay for a full composition table.
    """

    def __init__(self, objects: Iterable, morphisms: Iterable, compose, identity,
                 inverse=None, name: str = "G", validate: bool = True):
        self.name = name
        self._objects = tuple(objects)
        self._oi = {x: i for i, x in enumerate(self._objects)}
        if len(self._oi) != len(self._objects):
            raise StructuralError(f"{name}: duplicate object labels")
        labels, src, tgt = [], [], []
        for m, s, t in morphisms:
            labels.append(m)
            src.append(s)
            tgt.append(t)
        self._morphisms = tuple(labels)
        self._mi = {m: i for i, m in enumerate(self._morphisms)}
        if len(self._mi) != len(self._morphisms):
            raise StructuralError(f"{name}: duplicate morphism labels")
        self._src = dict(zip(labels, src))
        self._tgt = dict(zip(labels, tgt))
        hom: dict = {}
        out: dict = {x: [] for x in self._objects}
        for m, s, t in zip(labels, src, tgt):
            if s not in self._oi or t not in self._oi:
                raise StructuralError(f"{name}: morphism {m!r} has an endpoint outside the objects")
            hom.setdefault((s, t), []).append(m)
            out[s].append(m)
        self._hom = {k: tuple(v) for k, v in hom.items()}
        self._out = {k: tuple(v) for k, v in out.items()}
        self._compose_rule = compose
        self._comp_cache: dict = {}
        self._ident = {x: (identity[x] if isinstance(identity, Mapping) else identity(x))
                       for x in self._objects}
        if inverse is None:
            self._inv = {}
            for m in self._morphisms:
                s, t = self._src[m], self._tgt[m]
                for n in self._hom.get((t, s), ()):
                    if self.compose(n, m) == self._ident[s]:
                        self._inv[m] = n
                        break
                else:
                    raise StructuralError(f"{name}: morphism {m!r} has no inverse")
        elif isinstance(inverse, Mapping):
            self._inv = dict(inverse)
        else:
            self._inv = {m: inverse(m) for m in self._morphisms}
        if validate:
            self.check()

    def __repr__(self):
        return f"FiniteGroupoid({self.name}, {len(self._objects)} objects, {len(self._morphisms)} morphisms)"

    @property
    def objects(self) -> tuple:
        return self._objects

    @property
    def morphism_labels(self) -> tuple:
        return self._morphisms

    def n_objects(self) -> int:
        return len(self._objects)

    def n_morphisms(self) -> int:
        return len(self._morphisms)

    def has_object(self, x) -> bool:
        return x in self._oi

    def has_morphism(self, f) -> bool:
        return f in self._mi

    def object_index(self, x) -> int:
        return self._oi[x]

    def morphism_index(self, f) -> int:
        return self._mi[f]

    def hom(self, x, y) -> tuple:
        return self._hom.get((x, y), ())

    def out(self, x) -> tuple:
        return self._out[x]

    def morphisms(self) -> tuple:
        return self._morphisms

    def source(self, f):
        return self._src[f]

    def target(self, f):
        return self._tgt[f]

    def identity(self, x):
        return self._ident[x]

    def inverse(self, f):
        return self._inv[f]

    def compose(self, g, f):
        key = (g, f)
        try:
            return self._comp_cache[key]
        except KeyError:
            pass
        if self._tgt[f] != self._src[g]:
            raise StructuralError(f"{self.name}: {g!r} and {f!r} are not composable")
        rule = self._compose_rule
        h = rule[key] if isinstance(rule, Mapping) else rule(g, f)
        self._comp_cache[key] = h
        return h

    def _neighbours(self, x):
        return {self._tgt[m] for m in self._out[x]}

    def aut_order(self, x) -> int:
        return len(self._hom.get((x, x), ()))

    def compose_table(self) -> dict:
        return {(g, f): self.compose(g, f)
                for f in self._morphisms for g in self._out[self._tgt[f]]}

    def check(self):
        """Exhaustive check of every groupoid invariant."""
        n = self.name
        for x in self._objects:
            i = self._ident[x]
            if i not in self._mi or self._src[i] != x or self._tgt[i] != x:
                raise StructuralError(f"{n}: identity of {x!r} is not an endomorphism of {x!r}")
        for f in self._morphisms:
            s, t = self._src[f], self._tgt[f]
            for g in self._out[t]:
                h = self.compose(g, f)
                if h not in self._mi:
                    raise StructuralError(f"{n}: composite {g!r}∘{f!r} is not a morphism")
                if self._src[h] != s or self._tgt[h] != self._tgt[g]:
                    raise StructuralError(f"{n}: composite {g!r}∘{f!r} has wrong endpoints")
            if self.compose(f, self._ident[s]) != f or self.compose(self._ident[t], f) != f:
                raise StructuralError(f"{n}: unit law fails at {f!r}")
            fi = self._inv.get(f)
            if fi not in self._mi or self._src[fi] != t or self._tgt[fi] != s:
                raise StructuralError(f"{n}: inverse of {f!r} has wrong endpoints")
            if self.compose(fi, f) != self._ident[s] or self.compose(f, fi) != self._ident[t]:
                raise StructuralError(f"{n}: inverse law fails at {f!r}")
        for f in self._morphisms:
            for g in self._out[self._tgt[f]]:
                gf = self.compose(g, f)
                for h in self._out[self._tgt[g]]:
                    if self.compose(h, gf) != self.compose(self.compose(h, g), f):
                        raise StructuralError(f"{n}: associativity fails at {(h, g, f)!r}")


class ProductGroupoid(Groupoid):
    """Lazy finite product; objects and morphisms are tuples of factor labels."""

    def __init__(self, factors: Sequence[Groupoid], name: str = "product"):
        self.factors = tuple(factors)
        self.name = name

    @property
    def objects(self):
        return _LazyProduct([f.objects for f in self.factors],
                            [f.n_objects() for f in self.factors])

    def n_objects(self) -> int:
        n = 1
        for f in self.factors:
            n *= f.n_objects()
        return n

    def has_object(self, x) -> bool:
        return (isinstance(x, tuple) and len(x) == len(self.factors)
                and all(f.has_object(xi) for f, xi in zip(self.factors, x)))

    def hom(self, x, y):
        return itertools.product(*[f.hom(a, b) for f, a, b in zip(self.factors, x, y)])

    def out(self, x):
        return itertools.product(*[list(f.out(a)) for f, a in zip(self.factors, x)])

    def first_hom(self, x, y):
        parts = []
        for f, a, b in zip(self.factors, x, y):
            m = f.first_hom(a, b)
            if m is None:
                return None
            parts.append(m)
        return tuple(parts)

    def generating_out(self, x):
        out = []
        ids = [F.identity(a) for F, a in zip(self.factors, x)]
        for k, F in enumerate(self.factors):
            for g in F.generating_out(x[k]):
                m = list(ids)
                m[k] = g
                out.append(tuple(m))
        return out

    def source(self, m):
        return tuple(f.source(mi) for f, mi in zip(self.factors, m))

    def target(self, m):
        return tuple(f.target(mi) for f, mi in zip(self.factors, m))

    def compose(self, g, m):
        return tuple(f.compose(gi, mi) for f, gi, mi in zip(self.factors, g, m))

    def identity(self, x):
        return tuple(f.identity(xi) for f, xi in zip(self.factors, x))

    def inverse(self, m):
        return tuple(f.inverse(mi) for f, mi in zip(self.factors, m))

    def aut_order(self, x) -> int:
        n = 1
        for f, xi in zip(self.factors, x):
            n *= f.aut_order(xi)
        return n

    def aut_generators(self, x) -> list:
        ident = [f.identity(xi) for f, xi in zip(self.factors, x)]
        gens = []
        for i, (f, xi) in enumerate(zip(self.factors, x)):
            for s in f.aut_generators(xi):
                v = list(ident)
                v[i] = s
                gens.append(tuple(v))
        return gens

    def component_key(self, x):
        return tuple(f.component_key(xi) for f, xi in zip(self.factors, x))

    def component_rep(self, x):
        return tuple(f.component_rep(xi) for f, xi in zip(self.factors, x))

    def component_reps(self) -> list:
        return [tuple(r) for r in itertools.product(*[f.component_reps() for f in self.factors])]


class _LazyProduct(Sequence):
    def __init__(self, seqs, lens):
        self._seqs = seqs
        self._len = 1
        for n in lens:
            self._len *= n

    def __len__(self):
        return self._len

    def __iter__(self):
        return itertools.product(*self._seqs)

    def __getitem__(self, i):
        if isinstance(i, slice):
            return list(itertools.islice(iter(self), i.start, i.stop, i.step))
        if i < 0:
            i += self._len
        parts = []
        for s in reversed(self._seqs):
            i, r = divmod(i, len(s))
            parts.append(s[r])
        return tuple(reversed(parts))


class ActionGroupoid(Groupoid):
    """Action groupoid X//Γ of a right action ``act(x, g)`` of a finite group on a set.

    Morphisms are pairs ``(x, g) : x → act(x, g)``; composition
    ``(y, g′)∘(x, g) = (x, g·g′)`` matches a right action. ``points`` may be a
    zero-argument callable, evaluated on first use.
    """

    def __init__(self, points: Iterable, group: FiniteGroup, act: Callable, name: str = "X//G",
                 contains: Callable | None = None):
        self._points_src = points
        self._points = None if callable(points) else tuple(points)
        self._pi = None
        self.group = group
        self.act = act
        self.name = name
        self._contains = contains
        self._orbit_data = None
        self._stabs: dict = {}

    @property
    def objects(self) -> tuple:
        if self._points is None:
            self._points = tuple(self._points_src())
        return self._points

    def n_objects(self) -> int:
        return len(self.objects)

    def has_object(self, x) -> bool:
        if self._contains is not None:
            return self._contains(x)
        if self._pi is None:
            self._pi = set(self.objects)
        return x in self._pi

    def hom(self, x, y):
        key, tr, reps, _ = self._orbits()
        if key[x] != key[y]:
            return []
        mul, tx = self.group.mul, self.group.inv(tr[x])
        ty = tr[y]
        return [(x, mul(tx, mul(s, ty))) for s in self._rep_stabilizer(key[x])]

    def _rep_stabilizer(self, cid) -> list:
        """Stab(rep) for the orbit ``cid``; Stab(x) is its conjugate by the transversal."""
        if cid not in self._stabs:
            key, tr, _, _ = self._orbits()
            G = self.group
            schreier = set()
            for a in self._members[cid]:
                for s in G.generators:
                    schreier.add(G.mul(G.mul(tr[a], s), G.inv(tr[self.act(a, s)])))
            stab = closure(list(schreier), G.mul, G.e)
            self._stabs[cid] = [g for g in G.elements if g in stab]
        return self._stabs[cid]

    def out(self, x):
        return [(x, g) for g in self.group.elements]

    def generating_out(self, x):
        return [(x, g) for g in self.group.generators]

    def source(self, m):
        return m[0]

    def target(self, m):
        return self.act(m[0], m[1])

    def compose(self, g, f):
        return (f[0], self.group.mul(f[1], g[1]))

    def identity(self, x):
        return (x, self.group.e)

    def inverse(self, f):
        return (self.act(f[0], f[1]), self.group.inv(f[1]))

    def _orbits(self):
        if self._orbit_data is not None:
            return self._orbit_data
        key: dict = {}
        transversal: dict = {}
        reps: list = []
        sizes: list = []
        gens = self.group.generators
        mul = self.group.mul
        self._members = []
        for x in self.objects:
            if x in key:
                continue
            cid = len(reps)
            reps.append(x)
            key[x] = cid
            transversal[x] = self.group.e
            queue = deque([x])
            members = [x]
            while queue:
                a = queue.popleft()
                ta = transversal[a]
                for s in gens:
                    b = self.act(a, s)
                    if b not in key:
                        key[b] = cid
                        transversal[b] = mul(ta, s)
                        queue.append(b)
                        members.append(b)
            sizes.append(len(members))
            self._members.append(members)
        self._orbit_data = (key, transversal, reps, sizes)
        return self._orbit_data

    def component_key(self, x):
        return self._orbits()[0][x]

    def component_rep(self, x):
        key, _, reps, _ = self._orbits()
        return reps[key[x]]

    def component_reps(self) -> list:
        return list(self._orbits()[2])

    def first_hom(self, x, y):
        key, tr, _, _ = self._orbits()
        if key[x] != key[y]:
            return None
        return (x, self.group.mul(self.group.inv(tr[x]), tr[y]))

    def aut_order(self, x) -> int:
        key, _, _, sizes = self._orbits()
        return len(self.group) // sizes[key[x]]

    def aut_generators(self, x) -> list:
        stab = [m[1] for m in self.hom(x, x)]
        return [(x, g) for g in greedy_generators(stab, self.group.mul, self.group.e)]


class FullSubgroupoid(Groupoid):
    """Full subgroupoid of ``ambient`` on the objects satisfying ``predicate``."""

    def __init__(self, ambient: Groupoid, objects: Iterable, name: str = "full"):
        self.ambient = ambient
        self._objects = tuple(objects)
        self._set = set(self._objects)
        self.name = name

    @property
    def objects(self) -> tuple:
        return self._objects

    def n_objects(self) -> int:
        return len(self._objects)

    def has_object(self, x) -> bool:
        return x in self._set

    def hom(self, x, y):
        return self.ambient.hom(x, y)

    def out(self, x):
        for f in self.ambient.out(x):
            if self.ambient.target(f) in self._set:
                yield f

    def first_hom(self, x, y):
        return self.ambient.first_hom(x, y)

    def source(self, f):
        return self.ambient.source(f)

    def target(self, f):
        return self.ambient.target(f)

    def compose(self, g, f):
        return self.ambient.compose(g, f)

    def identity(self, x):
        return self.ambient.identity(x)

    def inverse(self, f):
        return self.ambient.inverse(f)

    def aut_order(self, x) -> int:
        return self.ambient.aut_order(x)

    def aut_generators(self, x) -> list:
        return self.ambient.aut_generators(x)

    def _component_table(self):
        cache = getattr(self, "_components_cache", None)
        if cache is not None:
            return cache
        key: dict = {}
        reps: list = []
        seen_amb: dict = {}
        for x in self._objects:
            k = self.ambient.component_key(x)
            if k not in seen_amb:
                seen_amb[k] = len(reps)
                reps.append(x)
            key[x] = seen_amb[k]
        self._components_cache = (key, reps)
        return self._components_cache


class GroupoidFunctor:
    """Functor given by object and morphism maps (mappings or callables)."""

    def __init__(self, source: Groupoid, target: Groupoid, on_objects, on_morphisms,
                 name: str = "F"):
        self.source = source
        self.target = target
        self.name = name
        self._fo = on_objects
        self._fm = on_morphisms

    def __repr__(self):
        return f"GroupoidFunctor({self.name}: {self.source.name} -> {self.target.name})"

    def obj(self, x):
        fo = self._fo
        return fo[x] if isinstance(fo, Mapping) else fo(x)

    def mor(self, f):
        fm = self._fm
        return fm[f] if isinstance(fm, Mapping) else fm(f)

    def then(self, other: "GroupoidFunctor") -> "GroupoidFunctor":
        """The composite other∘self."""
        return GroupoidFunctor(self.source, other.target,
                               lambda x: other.obj(self.obj(x)),
                               lambda f: other.mor(self.mor(f)),
                               name=f"{other.name}∘{self.name}")

    def object_table(self) -> tuple:
        return tuple(self.obj(x) for x in self.source.objects)

    def morphism_table(self) -> tuple:
        return tuple(self.mor(f) for f in self.source.morphisms())

    def check(self):
        """Exhaustive functor-law check over the source."""
        S, T = self.source, self.target
        for x in S.objects:
            if not T.has_object(self.obj(x)):
                raise StructuralError(f"{self.name}: object {x!r} maps outside the target")
            if self.mor(S.identity(x)) != T.identity(self.obj(x)):
                raise StructuralError(f"{self.name}: identity of {x!r} is not preserved")
        for f in S.morphisms():
            Ff = self.mor(f)
            if T.source(Ff) != self.obj(S.source(f)) or T.target(Ff) != self.obj(S.target(f)):
                raise StructuralError(f"{self.name}: morphism {f!r} maps to wrong endpoints")
            for g in S.out(S.target(f)):
                if self.mor(S.compose(g, f)) != T.compose(self.mor(g), Ff):
                    raise StructuralError(f"{self.name}: composition not preserved at {(g, f)!r}")


def identity_functor(G: Groupoid) -> GroupoidFunctor:
    return GroupoidFunctor(G, G, lambda x: x, lambda f: f, name=f"id_{G.name}")


def functors_equal(F: GroupoidFunctor, G: GroupoidFunctor) -> bool:
    if F.source is not G.source and F.source.n_objects() != G.source.n_objects():
        return False
    for x in F.source.objects:
        if F.obj(x) != G.obj(x):
            return False
    for f in F.source.morphisms():
        if F.mor(f) != G.mor(f):
            return False
    return True


class GroupoidNatTrans:
    """Natural transformation with components indexed by source objects."""

    def __init__(self, source: GroupoidFunctor, target: GroupoidFunctor, components,
                 name: str = "η"):
        self.source = source
        self.target = target
        self.name = name
        self._c = components

    def at(self, x):
        c = self._c
        return c[x] if isinstance(c, Mapping) else c(x)

    def check(self):
        F, Fp = self.source, self.target
        G, H = F.source, F.target
        for x in G.objects:
            c = self.at(x)
            if H.source(c) != F.obj(x) or H.target(c) != Fp.obj(x):
                raise StructuralError(f"{self.name}: component at {x!r} has wrong endpoints")
        for f in G.morphisms():
            x, y = G.source(f), G.target(f)
            if H.compose(Fp.mor(f), self.at(x)) != H.compose(self.at(y), F.mor(f)):
                raise StructuralError(f"{self.name}: naturality fails at {f!r}")


# -- standard groupoids --------------------------------------------------------

def empty() -> FiniteGroupoid:
    return FiniteGroupoid((), (), {}, {}, {}, name="∅")


def point() -> FiniteGroupoid:
    return FiniteGroupoid(("*",), (("id*", "*", "*"),), {("id*", "id*"): "id*"},
                          {"*": "id*"}, {"id*": "id*"}, name="{*}")


def discrete(objects: Iterable, name: str = "discrete") -> FiniteGroupoid:
    objs = tuple(objects)
    return FiniteGroupoid(objs, [(("id", x), x, x) for x in objs],
                          lambda g, f: f, lambda x: ("id", x), lambda f: f, name=name)


def indiscrete(objects: Iterable, name: str = "indiscrete") -> FiniteGroupoid:
    objs = tuple(objects)
    mors = [((x, y), x, y) for x in objs for y in objs]
    return FiniteGroupoid(objs, mors, lambda g, f: (f[0], g[1]), lambda x: (x, x),
                          lambda f: (f[1], f[0]), name=name)


def delta1() -> FiniteGroupoid:
    """Δ¹: objects 0, 1 and a single isomorphism 0 → 1."""
    return indiscrete((0, 1), name="Δ¹")


def two_points() -> FiniteGroupoid:
    return discrete((0, 1), name="{0,1}")


def group_groupoid(group: FiniteGroup, opposite: bool = False, obj="*",
                   name: str | None = None) -> FiniteGroupoid:
    """One-object groupoid BG. With ``opposite`` the composite g′∘g is the product g·g′."""
    mul = group.mul
    if opposite:
        comp = lambda g, f: mul(f, g)
    else:
        comp = lambda g, f: mul(g, f)
    return FiniteGroupoid((obj,), [(g, obj, obj) for g in group.elements], comp,
                          {obj: group.e}, group.inv, name=name or f"B{group.name}",
                          validate=False)


def connected_groupoid(n_objects: int, group: FiniteGroup, name: str | None = None) -> FiniteGroupoid:
    """indiscrete(n) × BK, the standard connected groupoid with vertex group K."""
    objs = tuple(range(n_objects))
    mors = [((x, y, g), x, y) for x in objs for y in objs for g in group.elements]
    return FiniteGroupoid(objs, mors, lambda g, f: (f[0], g[1], group.mul(g[2], f[2])),
                          lambda x: (x, x, group.e), lambda f: (f[1], f[0], group.inv(f[2])),
                          name=name or f"I{n_objects}×B{group.name}", validate=False)


def product(factors: Sequence[Groupoid], name: str = "product") -> FiniteGroupoid:
    """Eagerly materialized product of finite groupoids."""
    P = ProductGroupoid(factors, name=name)
    return P.materialize()


def coproduct(parts: Sequence[Groupoid], name: str = "coproduct") -> FiniteGroupoid:
    objs, mors = [], []
    for i, G in enumerate(parts):
        objs.extend((i, x) for x in G.objects)
        mors.extend(((i, f), (i, G.source(f)), (i, G.target(f))) for f in G.morphisms())
    return FiniteGroupoid(objs, mors,
                          lambda g, f: (f[0], parts[f[0]].compose(g[1], f[1])),
                          lambda x: (x[0], parts[x[0]].identity(x[1])),
                          lambda f: (f[0], parts[f[0]].inverse(f[1])), name=name, validate=False)
