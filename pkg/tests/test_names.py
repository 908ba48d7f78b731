from itertools import product

import pytest
from hypothesis import given, strategies as st

import oracles
from strategies import preorders

from forcelab.algebra import RegularOpenAlgebra
from forcelab.corpus import antichain, cohen
from forcelab.errors import MixedAlgebras, PoolTooLarge
from forcelab.forcing import ForcingContext, hf_universe
from forcelab.hf import EMPTY, hf_rank, hf_str, ordinal, pair, parse_hf, transitive_closure, unpair
from forcelab.names import (Name, check_name, check_value, condition_codes, domain_closure, empty_name,
                            enumerate_names, generic_name, nice_name, op_components, op_name, pair_code,
                            subalgebra_pool, triple_code)

hf_sets = st.recursive(st.just(EMPTY), lambda inner: st.frozensets(inner, max_size=3), max_leaves=8)


# hereditarily finite sets

def test_ordinals():
    assert ordinal(0) == EMPTY
    assert ordinal(2) == frozenset({EMPTY, frozenset({EMPTY})})
    assert hf_rank(ordinal(5)) == 5


@given(hf_sets, hf_sets)
def test_pair_roundtrip(a, b):
    assert unpair(pair(a, b)) == (a, b)


@given(hf_sets)
def test_text_roundtrip(x):
    assert parse_hf(hf_str(x)) == x


@given(hf_sets)
def test_transitive_closure_is_transitive(x):
    T = transitive_closure([x])
    assert all(y <= T for y in T)


# pairing codes

def test_pair_code_examples():
    assert [pair_code(*ab) for ab in [(0, 0), (0, 1), (1, 0), (1, 1), (0, 2)]] == [0, 1, 2, 3, 4]


def test_pair_code_matches_sort_oracle():
    pairs = sorted(product(range(32), repeat=2), key=lambda ab: (max(ab), ab[0], ab[1]))
    assert [pair_code(a, b) for a, b in pairs] == list(range(len(pairs)))


def test_triple_code_matches_sort_oracle():
    triples = sorted(product(range(8), repeat=3), key=lambda t: (max(t),) + t)
    assert [triple_code(*t) for t in triples] == list(range(len(triples)))


# names

@pytest.fixture(scope="module")
def B2():
    return RegularOpenAlgebra(cohen(2))


def test_rank_examples(B2):
    assert empty_name(B2).brank == 1
    assert Name.from_pairs(B2, [(empty_name(B2), B2.e("0"))]).brank == 2


def test_values_fold_by_join(B2):
    e = empty_name(B2)
    n = Name.from_pairs(B2, [(e, B2.e("00")), (e, B2.e("01"))])
    assert n.entries == ((e, B2.e("00") | B2.e("01")),)
    assert n[e].sorted_conditions() == ("0", "00", "01")


def test_mixed_algebra_entries_rejected(B2):
    other = RegularOpenAlgebra(cohen(1))
    with pytest.raises(MixedAlgebras):
        Name.from_pairs(B2, [(empty_name(other), B2.one)])


def test_check_name_examples(B2):
    assert check_name(EMPTY, B2) == empty_name(B2)
    one = check_name(frozenset({EMPTY}), B2)
    assert one.entries == ((empty_name(B2), B2.one),)
    assert check_value(one) == frozenset({EMPTY})
    assert check_value(Name.from_pairs(B2, [(empty_name(B2), B2.e("0"))])) is None


def test_op_name_literal_structure(B2):
    e = empty_name(B2)
    n = op_name(e, e)
    inner = Name.from_pairs(B2, [(e, B2.one)])
    assert n.entries == ((e, B2.one), (inner, B2.one))
    assert n.text == "(name (entry (name) 1) (entry (name (entry (name) 1)) 1))"
    assert op_components(n) == (e, e)


def test_op_rank_exceeds_components(B2):
    names = enumerate_names(B2, 2)
    for a, b in product(names[:6], repeat=2):
        assert op_name(a, b).brank > max(a.brank, b.brank)
        assert op_components(op_name(a, b)) == (a, b)


def test_generic_name_has_an_entry_per_condition(B2):
    G = generic_name(B2)
    assert len(G.entries) == 7
    codes = condition_codes(B2.base)
    assert codes["root"] == EMPTY
    assert all(G[check_name(codes[p], B2)] == B2.e(p) for p in B2.base.elements)


def test_enumeration_counts(B2):
    assert enumerate_names(B2, 1) == [empty_name(B2)]
    assert len(enumerate_names(B2, 2)) == len(B2) + 1
    A = RegularOpenAlgebra(antichain(2))
    k = len(A) + 1  # names of rank <= 2
    assert len(enumerate_names(A, 3)) == (len(A) + 1) ** k


def test_enumeration_cap():
    A = RegularOpenAlgebra(antichain(3))
    with pytest.raises(PoolTooLarge):
        enumerate_names(A, 3, cap=1000)


def test_subalgebra_pool(B2):
    pool = subalgebra_pool(B2)
    assert len(pool) == 4
    assert B2.zero in pool and B2.one in pool
    a = [u for u in pool if not (u.is_zero() or u.is_one())]
    assert len(a) == 2 and a[0] == ~a[1]


@given(preorders(max_n=4))
def test_domain_members_have_smaller_rank(P):
    B = RegularOpenAlgebra(P)
    for n in enumerate_names(B, 2, subalgebra_pool(B)):
        assert all(c.brank < n.brank for c in n.dom)


def test_domain_closure(B2):
    names = enumerate_names(B2, 2)
    assert domain_closure(names) == [empty_name(B2)]


@given(preorders(max_n=4, with_top=True))
def test_valuation_matches_oracle(P):
    ctx = ForcingContext(P)
    B = ctx.algebra
    names = enumerate_names(B, 2)
    for G in ctx.generics:
        for n in names:
            assert ctx.valuate(n, G) == oracles.valuate(n, G.members)
        for x in hf_universe(2):
            assert ctx.valuate(check_name(x, B), G) == x


def test_nice_name_examples(cohen2):
    ctx = ForcingContext(cohen2)
    B2 = ctx.algebra
    names = enumerate_names(B2, 2, subalgebra_pool(B2))
    a = names[-1]
    empty_nice = nice_name(empty_name(B2), a)
    assert all(v.is_zero() for _, v in empty_nice.entries)
    for G in ctx.generics:
        assert ctx.valuate(empty_nice, G) == EMPTY
        assert ctx.valuate(nice_name(a, a), G) == ctx.valuate(a, G)
