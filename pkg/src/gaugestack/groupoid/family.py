"""Exhaustive families of small groupoids and batch model-structure checks."""
from __future__ import annotations

from collections import defaultdict

import numpy as np

from .core import FiniteGroupoid, connected_groupoid, coproduct, empty
from .groups import cyclic, trivial
from .model import (FunctorIndex, Skeleton, _batch_pre, is_cofibration, is_fibration,
                    is_weak_equivalence, lifting_matrix, table_functor)


def _connected_types(max_objects: int, max_hom: int):
    groups = [trivial()] + [cyclic(n) for n in range(2, max_hom + 1)]
    return [(n, K) for n in range(1, max_objects + 1) for K in groups]


def small_groupoids(max_objects: int = 3, max_hom: int = 3) -> list[FiniteGroupoid]:
    """One groupoid per isomorphism class with ≤ max_objects objects and hom-sets ≤ max_hom.

    A connected groupoid is I_n × BK with every hom-set of size |K|; groups of order
    ≤ 3 are cyclic, so for max_hom ≤ 3 the list is complete. The empty groupoid is included.
    """
    if max_hom > 3:
        raise ValueError("groups of order > 3 are not all cyclic; extend the group list")
    types = _connected_types(max_objects, max_hom)
    out = [empty()]

    def parts(rem, start):
        if rem == 0:
            yield ()
            return
        for k in range(start, len(types)):
            if types[k][0] <= rem:
                for rest in parts(rem - types[k][0], k):
                    yield (types[k],) + rest

    for total in range(1, max_objects + 1):
        for spec in parts(total, 0):
            comps = [connected_groupoid(n, K) for n, K in spec]
            name = "+".join(c.name for c in comps)
            G = comps[0].materialize() if len(comps) == 1 else coproduct(comps, name=name)
            G.name = name
            out.append(G)
    return out


class FunctorCensus:
    """Every functor between members of a family, classified by the three predicates."""

    def __init__(self, groupoids: list[FiniteGroupoid]):
        self.groupoids = groupoids
        self.skeletons = [Skeleton(G) for G in groupoids]
        self.index = FunctorIndex()
        self.kinds: dict = {}
        self.flags: dict = {}
        n = len(groupoids)
        for a in range(n):
            for b in range(n):
                S, T = self.skeletons[a], self.skeletons[b]
                tabs = self.index.tables(S, T)
                fl = np.zeros((len(tabs), 3), dtype=bool)
                for k, t in enumerate(tabs):
                    F = table_functor(S, T, t)
                    fl[k] = (is_cofibration(F), is_fibration(F), is_weak_equivalence(F))
                self.flags[a, b] = fl
                for kind, mask in (("cof", fl[:, 0]), ("fib", fl[:, 1]),
                                   ("acof", fl[:, 0] & fl[:, 2]), ("afib", fl[:, 1] & fl[:, 2])):
                    sel = [tabs[k] for k in np.flatnonzero(mask)]
                    if sel:
                        self.kinds.setdefault(kind, {})[a, b] = sel

    def count(self, kind: str) -> int:
        return sum(len(v) for v in self.kinds.get(kind, {}).values())

    def lifting_failures(self, left: str, right: str, limit: int = 10):
        """All (i, p) with i of kind ``left`` and p of kind ``right``; returns (checked, failures)."""
        cache: dict = {}
        checked, failures = 0, []
        S = self.skeletons
        for (a, b), il in self.kinds.get(left, {}).items():
            for (x, y), pl in self.kinds.get(right, {}).items():
                M = lifting_matrix(il, pl, S[a], S[b], S[x], S[y], self.index, cache)
                checked += M.size
                if not M.all() and len(failures) < limit:
                    for r, c in zip(*np.nonzero(~M)):
                        failures.append(((a, b, il[r]), (x, y, pl[c])))
                        if len(failures) >= limit:
                            break
        return checked, failures

    def two_out_of_three_failures(self, limit: int = 10):
        """Composable pairs where exactly two of F, F′, F′∘F are weak equivalences."""
        n = len(self.groupoids)
        S = self.skeletons
        checked, failures = 0, []
        for g in range(n):
            for h in range(n):
                fs = self.index.tables(S[g], S[h])
                if not fs:
                    continue
                w1 = self.flags[g, h][:, 2]
                for k in range(n):
                    if not self.index.tables(S[h], S[k]):
                        continue
                    comp = _batch_pre(self.index, fs, S[g], S[h], S[k])  # [f, f′] → f′∘f
                    w2 = self.flags[h, k][:, 2]
                    w3 = self.flags[g, k][:, 2][comp]
                    total = w1[:, None].astype(int) + w2[None, :] + w3
                    checked += total.size
                    bad = np.argwhere(total == 2)
                    for f, fp in bad[: max(0, limit - len(failures))]:
                        failures.append((g, h, k, int(f), int(fp)))
        return checked, failures
