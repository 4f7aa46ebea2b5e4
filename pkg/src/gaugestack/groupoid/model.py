"""Model-structure predicates, functor enumeration and lifting problems."""
from __future__ import annotations

import itertools
from fractions import Fraction
from typing import Iterator

import numpy as np

from ..errors import EnumerationLimit
from .core import (DEFAULT_MAX_ENUMERATION, FiniteGroupoid, Groupoid, GroupoidFunctor,
                   GroupoidNatTrans)
from .groups import greedy_generators


# -- predicates ----------------------------------------------------------------

def weak_equivalence_report(F: GroupoidFunctor) -> tuple[bool, str]:
    """Decide full faithfulness and essential surjectivity, with a reason on failure.

    For groupoids it suffices to compare automorphism groups at one object per
    component and the induced map on components.
    """
    S, T = F.source, F.target
    hit: dict = {}
    for r in S.component_reps():
        k = T.component_key(F.obj(r))
        if k in hit:
            return False, f"objects {hit[k]!r} and {r!r} are not isomorphic but their images are"
        hit[k] = r
    mass = getattr(T, "mass", None)
    if mass is None:
        missing = _first_missed(T, hit)
        if missing is not None:
            return False, missing
    for r in S.component_reps():
        fr = F.obj(r)
        n = S.aut_order(r)
        if n != T.aut_order(fr):
            return False, f"Aut({r!r}) has order {n} but Aut of its image has order {T.aut_order(fr)}"
        images = {F.mor(a) for a in S.aut(r)}
        if len(images) != n:
            return False, f"Aut({r!r}) does not map injectively"
    if mass is not None:
        # F is fully faithful here, so it is essentially surjective iff the cardinalities agree
        src = sum((Fraction(1, S.aut_order(r)) for r in S.component_reps()), Fraction(0))
        if src != mass():
            return False, _first_missed(T, hit) or "groupoid cardinalities differ"
    return True, ""


def _first_missed(T, hit: dict):
    for r in T.component_reps():
        if T.component_key(r) not in hit:
            return f"target object {r!r} is not in the essential image"
    return None


def is_weak_equivalence(F: GroupoidFunctor) -> bool:
    return weak_equivalence_report(F)[0]


def is_fully_faithful(F: GroupoidFunctor) -> bool:
    S, T = F.source, F.target
    hit: dict = {}
    for r in S.component_reps():
        k = T.component_key(F.obj(r))
        if k in hit:
            return False
        hit[k] = r
        n = S.aut_order(r)
        if n != T.aut_order(F.obj(r)) or len({F.mor(a) for a in S.aut(r)}) != n:
            return False
    return True


def fibration_report(F: GroupoidFunctor) -> tuple[bool, str]:
    """Every h : F(x) → y lifts to some m : x → x′. Checking one object per source
    component suffices: lifts at r transport along r → x."""
    S, T = F.source, F.target
    t_size: dict = {}
    for y in T.objects:
        k = T.component_key(y)
        t_size[k] = t_size.get(k, 0) + 1
    for r in S.component_reps():
        fr = F.obj(r)
        images = {F.mor(m) for m in S.out(r)}
        if len(images) != T.aut_order(fr) * t_size[T.component_key(fr)]:
            missing = next(h for h in T.out(fr) if h not in images)
            return False, f"morphism {missing!r} out of {fr!r} has no lift at {r!r}"
    return True, ""


def is_fibration(F: GroupoidFunctor) -> bool:
    return fibration_report(F)[0]


def is_cofibration(F: GroupoidFunctor) -> bool:
    seen = set()
    for x in F.source.objects:
        y = F.obj(x)
        if y in seen:
            return False
        seen.add(y)
    return True


def is_isomorphism(F: GroupoidFunctor) -> bool:
    """Bijective on objects and morphisms."""
    S, T = F.source, F.target
    if S.n_objects() != T.n_objects():
        return False
    if not is_cofibration(F):
        return False
    return is_weak_equivalence(F)


# -- enumeration ---------------------------------------------------------------

class Skeleton:
    """Integer-indexed view of a FiniteGroupoid used by the enumerators."""

    def __init__(self, G: FiniteGroupoid):
        self.G = G
        self.objs = G.objects
        self.mors = G.morphisms()
        oi = {x: i for i, x in enumerate(self.objs)}
        mi = {m: i for i, m in enumerate(self.mors)}
        self.n = len(self.objs)
        self.src = tuple(oi[G.source(m)] for m in self.mors)
        self.tgt = tuple(oi[G.target(m)] for m in self.mors)
        self.ident = tuple(mi[G.identity(x)] for x in self.objs)
        self.inv = tuple(mi[G.inverse(m)] for m in self.mors)
        self.out = tuple(tuple(mi[m] for m in G.out(x)) for x in self.objs)
        self.hom = {}
        for j, m in enumerate(self.mors):
            self.hom.setdefault((self.src[j], self.tgt[j]), []).append(j)
        self._comp: dict = {}
        self._mi = mi
        self.components = self._components()

    def comp(self, g: int, f: int) -> int:
        key = (g, f)
        r = self._comp.get(key)
        if r is None:
            r = self._mi[self.G.compose(self.mors[g], self.mors[f])]
            self._comp[key] = r
        return r

    def _components(self):
        seen = [False] * self.n
        comps = []
        for b0 in range(self.n):
            if seen[b0]:
                continue
            tree = {b0: self.ident[b0]}
            order = [b0]
            seen[b0] = True
            for j in self.out[b0]:
                t = self.tgt[j]
                if t not in tree:
                    tree[t] = j
                    order.append(t)
                    seen[t] = True
            K = list(self.hom.get((b0, b0), []))
            gens = greedy_generators(K, self.comp, self.ident[b0])
            members = set(order)
            mors = [j for j in range(len(self.mors)) if self.src[j] in members]
            # f : b → b′ factors as t_{b′} ∘ k ∘ t_b⁻¹ with k in the vertex group
            kf = {j: self.comp(self.inv[tree[self.tgt[j]]], self.comp(j, tree[self.src[j]]))
                  for j in mors}
            comps.append((b0, order, tree, K, gens, mors, kf))
        return comps


def _group_homs(gens, K_comp, e_src, tgt_elems, tgt_comp, e_tgt, allowed=None):
    out = []
    cands = [[t for t in tgt_elems if allowed is None or allowed(s, t)] for s in gens]
    for images in itertools.product(*cands):
        phi = {e_src: e_tgt}
        frontier = [e_src]
        ok = True
        while frontier and ok:
            nxt = []
            for a in frontier:
                pa = phi[a]
                for s, t in zip(gens, images):
                    b = K_comp(a, s)
                    img = tgt_comp(pa, t)
                    old = phi.get(b)
                    if old is None:
                        phi[b] = img
                        nxt.append(b)
                    elif old != img:
                        ok = False
                        break
                if not ok:
                    break
            frontier = nxt
        if ok:
            out.append(phi)
    return out


def component_functor_choices(GS: Skeleton, HS: Skeleton, obj_ok=None, mor_ok=None
                              ) -> list[list[tuple[dict, dict]]]:
    """Per connected component of GS, every functor on it as (object map, morphism map) on indices.

    Optional predicates ``obj_ok(x, y)`` and ``mor_ok(j, m)`` restrict the allowed images
    and prune the search (used for mapping groupoids over a base).
    """
    obj_ok = obj_ok or (lambda x, y: True)
    mor_ok = mor_ok or (lambda j, m: True)
    per_comp = []
    for (b0, order, tree, K, gens, mors, kf) in GS.components:
        choices = []
        for y0 in range(HS.n):
            if not obj_ok(b0, y0):
                continue
            aut_y0 = HS.hom.get((y0, y0), [])
            homs = _group_homs(gens, GS.comp, GS.ident[b0], aut_y0, HS.comp, HS.ident[y0], mor_ok)
            homs = [phi for phi in homs if all(mor_ok(k, phi[k]) for k in K)]
            if not homs:
                continue
            others = order[1:]
            opts = [[m for m in HS.out[y0] if obj_ok(b, HS.tgt[m]) and mor_ok(tree[b], m)]
                    for b in others]
            for tree_imgs in itertools.product(*opts):
                ft = {b0: HS.ident[y0]}
                ft.update(zip(others, tree_imgs))
                fo = {b: HS.tgt[ft[b]] for b in order}
                ft_inv = {b: HS.inv[m] for b, m in ft.items()}
                for phi in homs:
                    fm = {}
                    for j in mors:
                        s, t = GS.src[j], GS.tgt[j]
                        fm[j] = HS.comp(ft[t], HS.comp(phi[kf[j]], ft_inv[s]))
                    if all(mor_ok(j, m) for j, m in fm.items()):
                        choices.append((fo, fm))
        per_comp.append(choices)
    return per_comp


def functor_tables(GS: Skeleton, HS: Skeleton, max_enumeration: int = DEFAULT_MAX_ENUMERATION
                   ) -> list[tuple[tuple, tuple]]:
    """All functors as (object table, morphism table) of target indices."""
    per_comp = component_functor_choices(GS, HS)
    total = 1
    for c in per_comp:
        total *= len(c)
    if total > max_enumeration:
        raise EnumerationLimit(f"{total} functors {GS.G.name} → {HS.G.name} exceed cap {max_enumeration}")
    result = []
    nobj, nmor = GS.n, len(GS.mors)
    for combo in itertools.product(*per_comp):
        fo = [0] * nobj
        fm = [0] * nmor
        for o, m in combo:
            for k, v in o.items():
                fo[k] = v
            for k, v in m.items():
                fm[k] = v
        result.append((tuple(fo), tuple(fm)))
    return result


def table_functor(GS: Skeleton, HS: Skeleton, table, name: str = "F") -> GroupoidFunctor:
    fo, fm = table
    return GroupoidFunctor(GS.G, HS.G,
                           {GS.objs[i]: HS.objs[fo[i]] for i in range(GS.n)},
                           {GS.mors[j]: HS.mors[fm[j]] for j in range(len(GS.mors))}, name=name)


def functor_table(F: GroupoidFunctor, GS: Skeleton, HS: Skeleton) -> tuple[tuple, tuple]:
    oi = {x: i for i, x in enumerate(HS.objs)}
    return (tuple(oi[F.obj(x)] for x in GS.objs),
            tuple(HS._mi[F.mor(m)] for m in GS.mors))


def functors(G: FiniteGroupoid, H: FiniteGroupoid,
             max_enumeration: int = DEFAULT_MAX_ENUMERATION) -> list[GroupoidFunctor]:
    GS, HS = Skeleton(G), Skeleton(H)
    return [table_functor(GS, HS, t) for t in functor_tables(GS, HS, max_enumeration)]


def natural_transformations(F: GroupoidFunctor, Fp: GroupoidFunctor) -> list[GroupoidNatTrans]:
    """All η : F ⇒ F′, determined per component by the component at a base object."""
    G, H = F.source, F.target
    GS = Skeleton(G)
    result_parts = []
    for (b0, order, tree, K, gens, mors, kf) in GS.components:
        x0 = GS.objs[b0]
        opts = []
        for c in H.hom(F.obj(x0), Fp.obj(x0)):
            ok = all(H.compose(Fp.mor(GS.mors[k]), c) == H.compose(c, F.mor(GS.mors[k]))
                     for k in gens)
            if not ok:
                continue
            comp = {}
            for b in order:
                t = GS.mors[tree[b]]
                comp[GS.objs[b]] = H.compose(Fp.mor(t), H.compose(c, H.inverse(F.mor(t))))
            opts.append(comp)
        result_parts.append(opts)
    out = []
    for combo in itertools.product(*result_parts):
        comps = {}
        for c in combo:
            comps.update(c)
        out.append(GroupoidNatTrans(F, Fp, comps))
    return out


def functor_groupoid(G: FiniteGroupoid, H: FiniteGroupoid,
                     max_enumeration: int = DEFAULT_MAX_ENUMERATION) -> FiniteGroupoid:
    """Internal hom: objects are functors G → H, morphisms natural transformations."""
    GS, HS = Skeleton(G), Skeleton(H)
    tables = functor_tables(GS, HS, max_enumeration)
    fun = {t: table_functor(GS, HS, t) for t in tables}
    mors = []
    for a in tables:
        for b in tables:
            for eta in natural_transformations(fun[a], fun[b]):
                label = (a, b, tuple(eta.at(x) for x in G.objects))
                mors.append((label, a, b))
                if len(mors) > max_enumeration:
                    raise EnumerationLimit("natural transformations exceed the cap")
    xs = G.objects

    def compose(g, f):
        return (f[0], g[1], tuple(H.compose(gc, fc) for gc, fc in zip(g[2], f[2])))

    def identity(a):
        F = fun[a]
        return (a, a, tuple(H.identity(F.obj(x)) for x in xs))

    def inverse(f):
        return (f[1], f[0], tuple(H.inverse(c) for c in f[2]))

    FG = FiniteGroupoid(tables, mors, compose, identity, inverse,
                        name=f"[{G.name},{H.name}]", validate=False)
    FG.functor_of = fun
    return FG


# -- lifting -------------------------------------------------------------------

def _compose_tables(a, b):
    """Table of b∘a."""
    return tuple(b[0][i] for i in a[0]), tuple(b[1][j] for j in a[1])


def lifting_counterexample(i_table, p_table, A: Skeleton, B: Skeleton, X: Skeleton, Y: Skeleton,
                           cache: dict | None = None):
    """Return a square (u, v) with p∘u = v∘i that has no diagonal filler, or None.

    Exhaustive: all squares and all candidate lifts are enumerated.
    """
    cache = {} if cache is None else cache

    def fun(S, T):
        key = (id(S), id(T))
        if key not in cache:
            cache[key] = functor_tables(S, T)
        return cache[key]

    squares_by_key: dict = {}
    for u in fun(A, X):
        squares_by_key.setdefault(_compose_tables(u, p_table), []).append(u)
    if not squares_by_key:
        return None
    lifted = set()
    for w in fun(B, X):
        lifted.add((_compose_tables(i_table, w), _compose_tables(w, p_table)))
    for v in fun(B, Y):
        us = squares_by_key.get(_compose_tables(i_table, v))
        if not us:
            continue
        for u in us:
            if (u, v) not in lifted:
                return u, v
    return None


def find_lift(i: GroupoidFunctor, p: GroupoidFunctor, u: GroupoidFunctor, v: GroupoidFunctor
              ) -> GroupoidFunctor | None:
    """Search for w : B → X with w∘i = u and p∘w = v."""
    A, B, X = i.source, i.target, p.source
    for w in functors(B, X):
        if all(w.obj(i.obj(a)) == u.obj(a) for a in A.objects) and \
           all(w.mor(i.mor(f)) == u.mor(f) for f in A.morphisms()) and \
           all(p.obj(w.obj(b)) == v.obj(b) for b in B.objects) and \
           all(p.mor(w.mor(f)) == v.mor(f) for f in B.morphisms()):
            return w
    return None


class FunctorIndex:
    """All functors between skeletons, numbered, with vectorized pre/post-composition.

    A functor is determined by its morphism table, so sets of functors are stored as
    integer arrays of morphism images and looked up by their row bytes.
    """

    def __init__(self, max_enumeration: int = DEFAULT_MAX_ENUMERATION):
        self.max_enumeration = max_enumeration
        self._tables: dict = {}
        self._arrays: dict = {}
        self._pre: dict = {}
        self._post: dict = {}

    def tables(self, S: Skeleton, T: Skeleton) -> list:
        key = (id(S), id(T))
        if key not in self._tables:
            self._tables[key] = functor_tables(S, T, self.max_enumeration)
        return self._tables[key]

    def _dtype(self, T: Skeleton):
        return np.uint8 if len(T.mors) < 256 else np.uint32

    def _rows(self, arr):
        arr = np.ascontiguousarray(arr)
        return arr.view(np.dtype((np.void, arr.dtype.itemsize * arr.shape[1]))).ravel()

    def array(self, S: Skeleton, T: Skeleton):
        """(morphism-table array, sorted row keys, sort order) for Fun(S, T)."""
        key = (id(S), id(T))
        if key not in self._arrays:
            ts = self.tables(S, T)
            arr = np.array([t[1] for t in ts], dtype=self._dtype(T)).reshape(len(ts), len(S.mors))
            if arr.shape[1] == 0:
                self._arrays[key] = (arr, None, None)
            else:
                rows = self._rows(arr)
                order = np.argsort(rows, kind="stable")
                self._arrays[key] = (arr, rows[order], order)
        return self._arrays[key]

    def _lookup(self, S: Skeleton, T: Skeleton, arr):
        _, keys, order = self.array(S, T)
        if keys is None:
            return np.zeros(arr.shape[0], dtype=np.int64)
        rows = self._rows(arr.astype(self._dtype(T)))
        pos = np.searchsorted(keys, rows)
        return order[pos].astype(np.int64)

    def index(self, S: Skeleton, T: Skeleton, table) -> int:
        arr = np.array([table[1]], dtype=self._dtype(T)).reshape(1, len(S.mors))
        return int(self._lookup(S, T, arr)[0])

    def precompose(self, f, S: Skeleton, T: Skeleton, Z: Skeleton):
        """Array sending (index of w : T → Z) to the index of w∘f, for f : S → T."""
        key = (f, id(S), id(T), id(Z))
        if key not in self._pre:
            W = self.array(T, Z)[0]
            fm = np.array(f[1], dtype=np.int64)
            self._pre[key] = self._lookup(S, Z, W[:, fm])
        return self._pre[key]

    def postcompose(self, p, X: Skeleton, Y: Skeleton, S: Skeleton):
        """Array sending (index of u : S → X) to the index of p∘u, for p : X → Y."""
        key = (p, id(X), id(Y), id(S))
        if key not in self._post:
            U = self.array(S, X)[0]
            pm = np.array(p[1], dtype=np.int64)
            self._post[key] = self._lookup(S, Y, pm[U.astype(np.int64)])
        return self._post[key]


def _batch_post(index: FunctorIndex, ps: list, X: Skeleton, Y: Skeleton, S: Skeleton):
    """Row b: indices of p_b∘u over all u : S → X."""
    U = index.array(S, X)[0].astype(np.int64)
    if len(S.mors) == 0:
        return np.zeros((len(ps), U.shape[0]), dtype=np.int64)
    P = np.array([p[1] for p in ps], dtype=np.int64).reshape(len(ps), len(X.mors))
    comp = P[:, U]  # (n_p, n_u, |S mors|)
    flat = comp.reshape(-1, len(S.mors))
    return index._lookup(S, Y, flat).reshape(len(ps), U.shape[0])


def _batch_pre(index: FunctorIndex, fs: list, S: Skeleton, T: Skeleton, Z: Skeleton):
    """Row a: indices of w∘f_a over all w : T → Z."""
    W = index.array(T, Z)[0].astype(np.int64)
    if len(S.mors) == 0:
        return np.zeros((len(fs), W.shape[0]), dtype=np.int64)
    Fm = np.array([f[1] for f in fs], dtype=np.int64).reshape(len(fs), len(S.mors))
    comp = W[:, Fm]  # (n_w, n_f, |S mors|)
    comp = np.transpose(comp, (1, 0, 2)).reshape(-1, len(S.mors))
    return index._lookup(S, Z, comp).reshape(len(fs), W.shape[0])


def lifting_matrix(i_tables: list, p_tables: list, A: Skeleton, B: Skeleton, X: Skeleton,
                   Y: Skeleton, index: FunctorIndex, cache: dict | None = None):
    """Boolean matrix L[a, b]: does i_a : A → B lift against p_b : X → Y in every square?

    Squares are pairs (u, v) with p∘u = v∘i; fillable squares are exactly the pairs
    (w∘i, p∘w). Since fillable ⊆ squares, the property holds iff both sets have the
    same size. Both counts are computed exhaustively over all functors.
    ``cache`` may be shared between calls that reuse the same lists of tables.
    """
    cache = {} if cache is None else cache
    nAY = len(index.tables(A, Y))
    nBX = len(index.tables(B, X))
    nBY = len(index.tables(B, Y))
    ni, np_ = len(i_tables), len(p_tables)
    if ni == 0 or np_ == 0:
        return np.ones((ni, np_), dtype=bool)
    ki, kp = id(i_tables), id(p_tables)

    def memo(key, fn):
        if key not in cache:
            cache[key] = fn()
        return cache[key]

    # square counts: Σ_t #{u : p∘u = t} · #{v : v∘i = t}
    def cu_fn():
        post = _batch_post(index, p_tables, X, Y, A)
        out = np.zeros((np_, nAY), dtype=np.int64)
        for b in range(np_):
            out[b] = np.bincount(post[b], minlength=nAY)
        return out

    def cv_fn():
        pre = _batch_pre(index, i_tables, A, B, Y)
        out = np.zeros((ni, nAY), dtype=np.int64)
        for a in range(ni):
            out[a] = np.bincount(pre[a], minlength=nAY)
        return out

    cu = memo(("cu", kp, id(A)), cu_fn) if nAY and len(index.tables(A, X)) else np.zeros((np_, nAY), np.int64)
    cv = memo(("cv", ki, id(Y)), cv_fn) if nAY and nBY else np.zeros((ni, nAY), np.int64)
    squares = cv @ cu.T
    if nBX == 0:
        return squares == 0
    pB = memo(("pB", kp, id(B)), lambda: _batch_post(index, p_tables, X, Y, B))
    rX = memo(("rX", ki, id(X)), lambda: _batch_pre(index, i_tables, A, B, X))
    keys = rX[:, None, :] * max(nBY, 1) + pB[None, :, :]
    keys.sort(axis=2)
    filled = 1 + np.count_nonzero(np.diff(keys, axis=2), axis=2)
    return squares == filled
