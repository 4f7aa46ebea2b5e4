"""Independent brute-force oracles.

Each oracle works from raw objects, morphisms and composition only, never from the
component tables, skeletons or descent machinery of the package.
"""
from __future__ import annotations

import itertools
from collections import deque

import numpy as np


def groupoid_data(G):
    objs = list(G.objects)
    mors = list(G.morphisms())
    return objs, mors


def brute_functors(G, H):
    """All functors G → H as (object dict, morphism dict), by backtracking over morphisms."""
    gobjs, gmors = groupoid_data(G)
    hobjs, hmors = groupoid_data(H)
    out = []
    for images in itertools.product(hobjs, repeat=len(gobjs)):
        fo = dict(zip(gobjs, images))
        choices = []
        for m in gmors:
            s, t = fo[G.source(m)], fo[G.target(m)]
            choices.append([n for n in hmors if H.source(n) == s and H.target(n) == t])
        fm: dict = {}

        def ok(k):
            m = gmors[k]
            if G.source(m) == G.target(m) and m == G.identity(G.source(m)) \
                    and fm[m] != H.identity(fo[G.source(m)]):
                return False
            for j in range(k + 1):
                a, b = gmors[j], m
                for g, f in ((a, b), (b, a)):
                    if G.target(f) == G.source(g):
                        c = G.compose(g, f)
                        if c in fm and fm[c] != H.compose(fm[g], fm[f]):
                            return False
            return True

        def rec(k):
            if k == len(gmors):
                # full composition check once every morphism is assigned
                for f in gmors:
                    for g in gmors:
                        if G.target(f) == G.source(g) and fm[G.compose(g, f)] != H.compose(fm[g], fm[f]):
                            return
                out.append((dict(fo), dict(fm)))
                return
            for n in choices[k]:
                fm[gmors[k]] = n
                if ok(k):
                    rec(k + 1)
                del fm[gmors[k]]

        rec(0)
    return out


def _homs(G, x, y):
    return [m for m in G.morphisms() if G.source(m) == x and G.target(m) == y]


def brute_is_weq(G, H, fo, fm) -> bool:
    for x in G.objects:
        for y in G.objects:
            imgs = [fm[m] for m in _homs(G, x, y)]
            if len(set(imgs)) != len(imgs) or set(imgs) != set(_homs(H, fo[x], fo[y])):
                return False
    for z in H.objects:
        if not any(_homs(H, fo[x], z) for x in G.objects):
            return False
    return True


def brute_is_fibration(G, H, fo, fm) -> bool:
    """Isofibration: every morphism out of an image object lifts."""
    for x in G.objects:
        for n in H.morphisms():
            if H.source(n) == fo[x] and not any(fm[m] == n for m in G.morphisms() if G.source(m) == x):
                return False
    return True


def brute_is_cofibration(G, H, fo, fm) -> bool:
    return len(set(fo.values())) == len(fo)


def brute_lift_exists(i, p, u, v, B, X) -> bool:
    """Is there w : B → X with w∘i = u and p∘w = v? i, p, u, v are (object dict, morphism dict)."""
    A_objs = list(i[0])
    A_mors = list(i[1])
    for wo, wm in brute_functors(B, X):
        if any(wo[i[0][a]] != u[0][a] for a in A_objs):
            continue
        if any(wm[i[1][m]] != u[1][m] for m in A_mors):
            continue
        if any(p[0][wo[b]] != v[0][b] for b in wo):
            continue
        if any(p[1][wm[m]] != v[1][m] for m in wm):
            continue
        return True
    return False


def triangle_cocycle_classes(G) -> int:
    """Orbits of G³ (arc gauges) on G³ (transitions at the three double overlaps).

    h_ij ↦ g_i⁻¹ h_ij g_j, with no triple condition since the three arcs have empty
    common intersection.
    """
    els = list(G.elements)
    seen = set()
    orbits = 0
    for h in itertools.product(els, repeat=3):
        if h in seen:
            continue
        orbits += 1
        queue = deque([h])
        seen.add(h)
        while queue:
            h01, h12, h02 = queue.popleft()
            for g0, g1, g2 in itertools.product(els, repeat=3):
                k = (G.mul(G.mul(G.inv(g0), h01), g1), G.mul(G.mul(G.inv(g1), h12), g2),
                     G.mul(G.mul(G.inv(g0), h02), g2))
                if k not in seen:
                    seen.add(k)
                    queue.append(k)
    return orbits


def conjugacy_class_count(G) -> int:
    els = list(G.elements)
    seen = set()
    n = 0
    for a in els:
        if a in seen:
            continue
        n += 1
        seen.update(G.mul(G.mul(G.inv(g), a), g) for g in els)
    return n


def is_contractible_or_empty(M) -> bool:
    """Every hom-set has exactly one element (or there are no objects)."""
    objs = list(M.objects)
    return all(len(list(M.hom(x, y))) == 1 for x in objs for y in objs)


# -- periodic 2D cochains, written out cell by cell --------------------------------------

def d0_dense(cx):
    """(d f)(edge along a at n) = f(n + e_a) − f(n)."""
    V = {c[1]: k for k, c in enumerate(cx.cells[0])}
    D = np.zeros((cx.n_cells(1), cx.n_cells(0)))
    for r, (I, n) in enumerate(cx.cells[1]):
        a = I[0]
        m = list(n)
        m[a] = (m[a] + 1) % cx.shape[a]
        D[r, V[tuple(m)]] += 1
        D[r, V[n]] -= 1
    return D


def d1_dense(cx):
    """(d A)(plaquette (a, b) at n) = A_a(n) + A_b(n + e_a) − A_a(n + e_b) − A_b(n)."""
    E = {c: k for k, c in enumerate(cx.cells[1])}
    D = np.zeros((cx.n_cells(2), cx.n_cells(1)))

    def sh(n, a):
        m = list(n)
        m[a] = (m[a] + 1) % cx.shape[a]
        return tuple(m)

    for r, ((a, b), n) in enumerate(cx.cells[2]):
        D[r, E[((a,), n)]] += 1
        D[r, E[((b,), sh(n, a))]] += 1
        D[r, E[((a,), sh(n, b))]] -= 1
        D[r, E[((b,), n)]] -= 1
    return D


def temporal_gauge_solution(nt, A0, E, dt):
    """1+1 abelian Yang-Mills with A_t = 0: the field strength is constant, so A_x grows linearly."""
    return np.array([A0 + k * dt * E for k in range(nt)])
