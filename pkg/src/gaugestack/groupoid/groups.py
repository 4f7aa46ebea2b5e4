"""Small finite groups given by element lists and a multiplication rule."""
from __future__ import annotations

import itertools
from typing import Callable, Hashable, Iterable, Sequence


class FiniteGroup:
    def __init__(self, elements: Iterable[Hashable], mul: Callable, identity: Hashable,
                 inverse: Callable | None = None, name: str = "G", generators=None):
        self.elements = tuple(elements)
        self._mul = mul
        self.e = identity
        self.name = name
        self._index = {g: i for i, g in enumerate(self.elements)}
        if self.e not in self._index:
            raise ValueError(f"identity {identity!r} is not an element of {name}")
        if inverse is None:
            inv = {}
            for g in self.elements:
                for h in self.elements:
                    if mul(g, h) == identity:
                        inv[g] = h
                        break
            inverse = inv.__getitem__
        self._inv = inverse
        self._gens = tuple(generators) if generators is not None else None

    def __repr__(self):
        return f"FiniteGroup({self.name}, order={len(self.elements)})"

    def __len__(self):
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)

    def __contains__(self, g):
        return g in self._index

    def mul(self, a, b):
        return self._mul(a, b)

    def inv(self, a):
        return self._inv(a)

    def index(self, g) -> int:
        return self._index[g]

    @property
    def generators(self) -> tuple:
        if self._gens is None:
            self._gens = tuple(greedy_generators(self.elements, self._mul, self.e))
        return self._gens

    def is_abelian(self) -> bool:
        gs = self.generators
        return all(self.mul(a, b) == self.mul(b, a) for a in gs for b in gs)

    def check(self):
        """Exhaustive group-axiom check; only meant for small groups."""
        els = self.elements
        for a in els:
            if self.mul(a, self.e) != a or self.mul(self.e, a) != a:
                raise ValueError(f"{self.name}: identity law fails at {a!r}")
            if self.mul(a, self.inv(a)) != self.e:
                raise ValueError(f"{self.name}: inverse law fails at {a!r}")
            for b in els:
                if self.mul(a, b) not in self._index:
                    raise ValueError(f"{self.name}: not closed at {a!r}*{b!r}")
        for a, b, c in itertools.product(els, repeat=3):
            if self.mul(self.mul(a, b), c) != self.mul(a, self.mul(b, c)):
                raise ValueError(f"{self.name}: associativity fails at {(a, b, c)!r}")


def closure(gens: Sequence, mul: Callable, e) -> set:
    seen = {e}
    frontier = [e]
    while frontier:
        nxt = []
        for a in frontier:
            for s in gens:
                b = mul(a, s)
                if b not in seen:
                    seen.add(b)
                    nxt.append(b)
        frontier = nxt
    return seen


def greedy_generators(elements: Sequence, mul: Callable, e) -> list:
    gens: list = []
    span = {e}
    for g in elements:
        if g not in span:
            gens.append(g)
            span = closure(gens, mul, e)
    return gens


def cyclic(n: int) -> FiniteGroup:
    return FiniteGroup(range(n), lambda a, b: (a + b) % n, 0, lambda a: (-a) % n,
                       name=f"Z{n}", generators=(1,) if n > 1 else ())


def trivial() -> FiniteGroup:
    return cyclic(1)


def symmetric(n: int) -> FiniteGroup:
    perms = tuple(itertools.permutations(range(n)))
    ident = tuple(range(n))

    def mul(a, b):
        # (a*b)(i) = a(b(i))
        return tuple(a[b[i]] for i in range(n))

    def inv(a):
        out = [0] * n
        for i, ai in enumerate(a):
            out[ai] = i
        return tuple(out)

    return FiniteGroup(perms, mul, ident, inv, name=f"S{n}")


def power(group: FiniteGroup, k: int) -> FiniteGroup:
    """Direct power G^k with elements as k-tuples."""
    els = tuple(itertools.product(group.elements, repeat=k))
    gm, gi = group.mul, group.inv

    def mul(a, b):
        return tuple(gm(x, y) for x, y in zip(a, b))

    def inv(a):
        return tuple(gi(x) for x in a)

    e = (group.e,) * k
    gens = []
    for i in range(k):
        for s in group.generators:
            v = list(e)
            v[i] = s
            gens.append(tuple(v))
    return FiniteGroup(els, mul, e, inv, name=f"{group.name}^{k}", generators=gens)


def by_name(name: str) -> FiniteGroup:
    name = name.strip()
    if name in ("1", "trivial"):
        return trivial()
    if name.startswith("Z") and name[1:].isdigit():
        return cyclic(int(name[1:]))
    if name.startswith("S") and name[1:].isdigit():
        return symmetric(int(name[1:]))
    raise ValueError(f"unknown group {name!r}")


def conjugacy_classes(group: FiniteGroup) -> list[frozenset]:
    seen: set = set()
    classes = []
    for g in group.elements:
        if g in seen:
            continue
        cls = frozenset(group.mul(group.mul(group.inv(a), g), a) for a in group.elements)
        seen |= cls
        classes.append(cls)
    return classes


def homomorphisms(source: FiniteGroup, target_elements: Sequence, target_mul: Callable,
                  target_e) -> list[dict]:
    """All homomorphisms, as dicts, by assigning generator images and closing up."""
    gens = source.generators
    result = []
    for images in itertools.product(target_elements, repeat=len(gens)):
        phi = {source.e: target_e}
        frontier = [source.e]
        ok = True
        while frontier and ok:
            nxt = []
            for a in frontier:
                for s, t in zip(gens, images):
                    b = source.mul(a, s)
                    img = target_mul(phi[a], t)
                    if b in phi:
                        if phi[b] != img:
                            ok = False
                            break
                    else:
                        phi[b] = img
                        nxt.append(b)
                if not ok:
                    break
            frontier = nxt
        if ok:
            result.append(phi)
    return result
