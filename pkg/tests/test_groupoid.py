import itertools

import numpy as np
import pytest

from gaugestack.errors import ContractViolation, StructuralError
from gaugestack.groupoid import (J, FiniteGroupoid, GroupoidFunctor, HomotopyFiberProduct,
                                 FiberProduct, connected_groupoid, cyclic, delta1, discrete,
                                 functors, group_groupoid, is_cofibration, is_fibration,
                                 is_weak_equivalence, point, pushout_product, symmetric,
                                 two_points)
from gaugestack.groupoid.core import ActionGroupoid, coproduct, empty
from gaugestack.groupoid.family import FunctorCensus, small_groupoids
from gaugestack.groupoid.groups import power
from gaugestack.groupoid.model import Skeleton, lifting_matrix, table_functor

from oracles import (brute_functors, brute_is_cofibration, brute_is_fibration, brute_is_weq,
                     brute_lift_exists)

SMALL = small_groupoids(2, 2)


def _tables(F):
    return ({x: F.obj(x) for x in F.source.objects}, {m: F.mor(m) for m in F.source.morphisms()})


def test_small_family_sizes():
    # iso classes: empty, then 1 object (B1, BZ2, BZ3), 2 objects (I2×BK and disjoint pairs)
    assert len(small_groupoids(1, 3)) == 4
    assert len(small_groupoids(2, 2)) == 1 + 2 + 2 + 3
    for G in small_groupoids(3, 3):
        assert G.n_objects() <= 3
        for x in G.objects:
            for y in G.objects:
                assert len(list(G.hom(x, y))) <= 3


@pytest.mark.parametrize("a,b", list(itertools.product(range(len(SMALL)), repeat=2)))
def test_functor_enumeration_matches_brute_force(a, b):
    G, H = SMALL[a], SMALL[b]
    fast = {(tuple(sorted(_tables(F)[0].items(), key=repr)), tuple(sorted(_tables(F)[1].items(), key=repr)))
            for F in functors(G, H)}
    slow = {(tuple(sorted(fo.items(), key=repr)), tuple(sorted(fm.items(), key=repr)))
            for fo, fm in brute_functors(G, H)}
    assert fast == slow


@pytest.mark.parametrize("a,b", list(itertools.product(range(len(SMALL)), repeat=2)))
def test_predicates_match_brute_force(a, b):
    G, H = SMALL[a], SMALL[b]
    for F in functors(G, H):
        fo, fm = _tables(F)
        assert is_weak_equivalence(F) == brute_is_weq(G, H, fo, fm)
        assert is_fibration(F) == brute_is_fibration(G, H, fo, fm)
        assert is_cofibration(F) == brute_is_cofibration(G, H, fo, fm)


def test_lifting_matrix_matches_brute_force():
    census = FunctorCensus(SMALL)
    S = census.skeletons
    checked = 0
    for (a, b), il in census.kinds["cof"].items():
        for (x, y), pl in census.kinds["fib"].items():
            M = lifting_matrix(il, pl, S[a], S[b], S[x], S[y], census.index, {})
            for r, it in enumerate(il):
                i = table_functor(S[a], S[b], it)
                for c, pt in enumerate(pl):
                    p = table_functor(S[x], S[y], pt)
                    all_ok = True
                    for u in functors(SMALL[a], SMALL[x]):
                        for v in functors(SMALL[b], SMALL[y]):
                            if any(p.obj(u.obj(o)) != v.obj(i.obj(o)) for o in SMALL[a].objects) or \
                               any(p.mor(u.mor(m)) != v.mor(i.mor(m)) for m in SMALL[a].morphisms()):
                                continue
                            if not brute_lift_exists(_tables(i), _tables(p), _tables(u), _tables(v),
                                                     SMALL[b], SMALL[x]):
                                all_ok = False
                    assert bool(M[r, c]) == all_ok
                    checked += 1
    assert checked > 100


def test_lifting_fails_for_cofibration_against_fibration():
    census = FunctorCensus(SMALL)
    n, failures = census.lifting_failures("cof", "fib", limit=1)
    assert failures, "plain (cofibration, fibration) pairs must not all lift"


def test_two_out_of_three_small():
    census = FunctorCensus(SMALL)
    checked, failures = census.two_out_of_three_failures()
    assert checked > 0 and failures == []


def test_action_groupoid_hom_matches_definition():
    S3 = symmetric(3)
    G = power(S3, 2)
    pts = [(a, b) for a in range(4) for b in range(3)]

    def act(x, g):
        return (x[0] if x[0] == 3 else S3.inv(g[0])[x[0]], S3.inv(g[1])[x[1]])

    A = ActionGroupoid(pts, G, act)
    for x in pts:
        for y in pts:
            assert sorted(A.hom(x, y)) == sorted((x, g) for g in G.elements if act(x, g) == y)
        assert A.aut_order(x) == sum(1 for g in G.elements if act(x, g) == x)


def test_finite_groupoid_rejects_bad_table():
    with pytest.raises(StructuralError):
        FiniteGroupoid([0, 1], [("f", 0, 1)], lambda g, f: f, lambda x: ("id", x, x),
                       lambda f: f, name="bad").check()


def test_homotopy_fiber_product_of_points_over_bg():
    Z2 = cyclic(2)
    BG = group_groupoid(Z2)
    P = point()
    f = GroupoidFunctor(P, BG, {"*": "*"}, {P.identity("*"): BG.identity("*")})
    H = HomotopyFiberProduct(f, f)
    # pt ×ʰ_BG pt ≃ G as a discrete groupoid
    assert H.n_components() == 2
    assert all(H.aut_order(r) == 1 for r in H.component_reps())
    assert FiberProduct(f, f).n_objects() == 1


def test_homotopy_fiber_product_needs_shared_target():
    f = GroupoidFunctor(point(), group_groupoid(cyclic(2)), {"*": "*"}, lambda m: m)
    g = GroupoidFunctor(point(), group_groupoid(cyclic(3)), {"*": "*"}, lambda m: m)
    with pytest.raises(ContractViolation):
        HomotopyFiberProduct(f, g)


def test_pushout_product_with_J_is_acyclic_cofibration():
    F = GroupoidFunctor(empty(), point(), {}, {})
    pp = pushout_product(F, J())
    assert pp.is_cofibration()
    assert pp.functor is not None and is_weak_equivalence(pp.functor)


def test_pushout_product_needs_cofibrations():
    collapse = GroupoidFunctor(two_points(), point(), {0: "*", 1: "*"},
                               lambda m: point().identity("*"))
    with pytest.raises(ContractViolation):
        pushout_product(collapse, J())
