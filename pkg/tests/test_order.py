import pytest
from hypothesis import given, strategies as st

import oracles
from strategies import poset_and_subset, preorders

from forcelab.corpus import antichain, chain, cohen
from forcelab.errors import EmptyPoset, NotGeneric, NotGreatest, UnknownElement
from forcelab.order import (GENERIC_METHODS, Poset, check_embedding, classify_subset, compatible,
                            enumerate_generics, is_complete_embedding, is_generic, is_generic_mask,
                            transfer_generic, validate_poset)


def test_singleton_is_strict():
    P = validate_poset(["a"])
    assert len(P) == 1 and P.strict


def test_two_cycle_is_a_preorder():
    P = Poset(["a", "b"], [("a", "b"), ("b", "a")])
    assert not P.strict
    assert P.equivalent("a", "b")


def test_empty_poset_rejected():
    with pytest.raises(EmptyPoset):
        Poset([])


def test_unknown_element_in_pair():
    with pytest.raises(UnknownElement):
        Poset(["a"], [("a", "z")])


def test_top_must_be_greatest():
    with pytest.raises(NotGreatest):
        Poset(["a", "b"], top="a")


def test_compatibility_examples():
    A = antichain(2)
    assert not compatible(A, "a", "b")
    assert compatible(A, "a", "a")
    assert compatible(chain(2), "a", "b")


def test_cohen2_leaves_are_a_maximal_antichain(cohen2):
    c = classify_subset(cohen2, ["00", "01", "10", "11"])
    assert c["open"] and c["dense"] and c["maximal_antichain"]


def test_cohen2_left_cone_open_not_dense(cohen2):
    c = classify_subset(cohen2, ["0", "00", "01"])
    assert c["open"] and not c["dense"]


def test_whole_poset_is_not_an_antichain(cohen2):
    c = classify_subset(cohen2, cohen2.elements)
    assert c["open"] and c["dense"] and not c["antichain"]


def test_generic_examples(cohen2):
    assert [G.sorted() for G in enumerate_generics(Poset(["a"]))] == [("a",)]
    assert sorted(G.sorted() for G in enumerate_generics(antichain(2))) == [("a",), ("b",)]
    leaves = sorted(G.sorted() for G in enumerate_generics(cohen2))
    assert leaves == sorted(tuple(sorted(cohen2.up(x))) for x in ["00", "01", "10", "11"])
    assert len(leaves) == 4


def test_embedding_examples(cohen2):
    ident = check_embedding(cohen2, cohen2, {p: p for p in cohen2.elements})
    assert is_complete_embedding(ident)
    inc = check_embedding(Poset(["a"]), antichain(2), {"a": "a"})
    assert inc.kind == "plain" and not is_complete_embedding(inc)


def test_identity_pullback_is_identity(cohen2):
    ident = check_embedding(cohen2, cohen2, {p: p for p in cohen2.elements})
    for G in enumerate_generics(cohen2):
        assert transfer_generic(ident, G, "pullback").members == G.members


def test_pullback_of_non_generic_rejected():
    emb = check_embedding(antichain(2), antichain(2), {"a": "a", "b": "b"})
    with pytest.raises(NotGeneric):
        transfer_generic(emb, ["a", "b"], "pullback")


@given(poset_and_subset(max_n=5))
def test_classification_matches_oracle(ps):
    P, mask = ps
    S = P.members(mask)
    c = classify_subset(P, S)
    assert c["open"] == oracles.is_open(P, S)
    assert c["dense"] == oracles.is_dense(P, S)
    assert P.is_filter_mask(mask) == oracles.is_filter(P, S)


@given(preorders(max_n=5))
def test_generics_match_definitional_oracle(P):
    assert {G.members for G in enumerate_generics(P)} == oracles.generics(P)


@given(preorders(max_n=5))
def test_genericity_definitions_coincide_on_every_filter(P):
    for mask in P.filter_masks():
        answers = {is_generic_mask(P, mask, m) for m in GENERIC_METHODS}
        assert len(answers) == 1


@given(preorders(max_n=6))
def test_maximal_antichains_are_maximal(P):
    for A in P.maximal_antichains():
        assert P.is_antichain_mask(P.mask(A))
        assert all(any(oracles.compatible(P, p, a) for a in A) for p in P.elements)


@given(preorders(max_n=5))
def test_order_closure_is_transitive_and_reflexive(P):
    for p in P.elements:
        assert P.leq(p, p)
        for q in P.elements:
            for r in P.elements:
                if P.leq(p, q) and P.leq(q, r):
                    assert P.leq(p, r)


def test_principal_method_above_definitional_limit():
    P = cohen(3)  # 15 conditions, so generics come from minimal elements
    gens = enumerate_generics(P)
    assert len(gens) == 8
    assert all(is_generic(P, G.members, "antichain") for G in gens)
