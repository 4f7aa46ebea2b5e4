import pytest

from gaugestack.errors import StructuralError
from gaugestack.gauge import FLAVORS, SiteCalculus, classifying_presheaf
from gaugestack.groupoid import cyclic, discrete, group_groupoid, symmetric
from gaugestack.presheaf import (Cover, FiniteSite, cech_cosimplicial, cech_replacement,
                                 circle3_site, constant_presheaf, descent_comparison_for,
                                 identity_morphism, interval_site, is_local_fibration,
                                 is_local_weq, is_stack, pi0, representable, sheafify,
                                 terminal_presheaf, to_terminal, twopoint_site)
from gaugestack.presheaf.site import SAMPLE_SITES

from oracles import conjugacy_class_count, triangle_cocycle_classes


@pytest.mark.parametrize("name", sorted(SAMPLE_SITES))
def test_sample_sites_are_consistent(name):
    SAMPLE_SITES[name]().check()


def test_cover_with_missing_overlap_is_rejected():
    V, E = ("a", "b", "c"), (("a", "b"), ("b", "c"))
    regions = {"I": (V, E), "V1": (("a", "b"), (("a", "b"),)), "V2": (("b", "c"), (("b", "c"),)),
               "V12": (("b",), ())}
    with pytest.raises(StructuralError):
        FiniteSite("bad", V, E, regions, [Cover("charts", "I", ("V1", "V2"), {}, {})],
                   {"I": ["charts"]}).check()


@pytest.mark.parametrize("group", [cyclic(2), cyclic(3), symmetric(3)], ids=lambda g: g.name)
def test_triangle_holim_components_match_orbit_oracle(group):
    S = circle3_site()
    X = constant_presheaf(S, group_groupoid(group), "BG")
    H, _ = descent_comparison_for(X, "C", S.cover("C", "arcs"))
    assert len(H.component_reps()) == triangle_cocycle_classes(group) == conjugacy_class_count(group)


def test_cech_levels_nondegenerate_factor_count():
    S = circle3_site()
    X = constant_presheaf(S, group_groupoid(cyclic(2)), "BZ2")
    D, _ = cech_cosimplicial(X, "C", S.cover("C", "arcs"))
    nondeg = [t for t in D.index_tuples[1] if t[0] != t[1]]
    assert len(nondeg) == 3
    x0 = D.G0.component_reps()[0]
    assert D.G0.aut_order(x0) == 2 ** 3


@pytest.mark.parametrize("name", sorted(SAMPLE_SITES))
def test_representables_are_stacks(name):
    S = SAMPLE_SITES[name]()
    for U in S.objects:
        assert is_stack(representable(S, U)).ok


def test_constant_bz2_fails_descent_on_circle():
    S = circle3_site()
    r = is_stack(constant_presheaf(S, group_groupoid(cyclic(2)), "BZ2"))
    assert not r.ok
    assert r.witness[:2] == ("C", "arcs")


@pytest.mark.parametrize("flavor", FLAVORS)
def test_classifying_flavors_are_stacks_on_contractible_sites(flavor):
    for S in (interval_site(), twopoint_site()):
        assert is_stack(classifying_presheaf(SiteCalculus(S, symmetric(3)), flavor)).ok


def test_local_systems_are_stacks_on_circle():
    S = circle3_site()
    for G in (cyclic(2), symmetric(3)):
        assert is_stack(classifying_presheaf(SiteCalculus(S, G), "local_system")).ok


def test_sheafify_constant_two_point_set():
    S = twopoint_site()
    X = constant_presheaf(S, discrete(("a", "b")), "ab")
    F = sheafify(pi0(X))
    # matching families on the two disjoint points: pairs
    assert len(pi0(X).stage("T")) == 2
    assert len(F.stage("T")) == 4
    assert len(F.stage("P")) == 2


def test_sheafify_is_idempotent_on_sheaves():
    S = interval_site()
    F = pi0(representable(S, "I"))
    G = sheafify(F)
    for U in S.objects:
        assert len(G.stage(U)) == len(F.stage(U))


def test_cech_replacement_is_local_weq():
    S = interval_site()
    I = representable(S, "I")
    Vc, q = cech_replacement(I, [("V1", S.inclusion("V1", "I")), ("V2", S.inclusion("V2", "I"))])
    assert bool(is_local_weq(q))


def test_collapse_of_bz2_is_not_local_weq():
    S = interval_site()
    X = constant_presheaf(S, group_groupoid(cyclic(2)), "BZ2")
    assert not bool(is_local_weq(to_terminal(X)))


def test_identity_is_local_fibration():
    S = interval_site()
    X = constant_presheaf(S, group_groupoid(cyclic(2)), "BZ2")
    assert bool(is_local_fibration(identity_morphism(X)))
    assert terminal_presheaf(S).stage("I").n_objects() == 1
