import pytest
from hypothesis import given, strategies as st

import oracles
from strategies import preorders

from forcelab.algebra import (RegularOpenAlgebra, algebra_leq, algebra_op, classify_ultrafilter, complete,
                              induced_algebra_embedding, ultrafilters, verify_algebra_laws)
from forcelab.corpus import antichain, chain, cohen
from forcelab.errors import MixedAlgebras, WrongEmbeddingKind
from forcelab.order import (Poset, check_embedding, enumerate_generics, is_generic, transfer_generic)


def test_regularize_examples(cohen2):
    B = RegularOpenAlgebra(cohen2)
    assert B.regularize([]).is_zero()
    assert B.regularize(["00"]).sorted_conditions() == ("00",)
    assert B.regularize(["00", "01"]).sorted_conditions() == ("0", "00", "01")


def test_regularize_contains_downward_closure(cohen2):
    B = RegularOpenAlgebra(cohen2)
    assert B.regularize(["0"]).sorted_conditions() == ("0", "00", "01")


@given(preorders(max_n=5), st.data())
def test_regularize_is_least_regular_open_superset(P, data):
    B = RegularOpenAlgebra(P)
    A = data.draw(st.frozensets(st.sampled_from(P.elements)))
    regs = oracles.regular_opens(P)
    least = min((S for S in regs if A <= S), key=len)
    assert B.regularize(A).conditions == least
    assert B.regularize(B.regularize(A).conditions) == B.regularize(A)


@pytest.mark.parametrize("P, size", [(antichain(2), 4), (cohen(2), 16), (chain(2), 2), (antichain(3), 8),
                                     (cohen(1), 4), (chain(5), 2)])
def test_completion_sizes(P, size):
    B, e = complete(P)
    assert len(B) == size
    assert e.kind == "dense"


def test_cohen2_is_the_powerset_of_the_leaves(cohen2):
    B = RegularOpenAlgebra(cohen2)
    assert len(B.atoms) == 4
    assert sorted(a.sorted_conditions() for a in B.atoms) == [("00",), ("01",), ("10",), ("11",)]


@given(preorders(max_n=5))
def test_carrier_matches_regular_open_oracle(P):
    B = RegularOpenAlgebra(P)
    assert {u.conditions for u in B.carrier} == oracles.regular_opens(P)
    assert [u.mask for u in B.carrier] == [u.mask for u in sorted(B.brute_force_carrier(),
                                                                   key=lambda u: u.sort_key())]


def test_operation_examples(cohen2):
    B, _ = complete(cohen2)
    assert (~B.one).is_zero()
    assert (B.e("0") | B.e("1")).is_one()
    assert (B.e("0") & B.e("1")).is_zero()
    assert algebra_op("join", B.e("0"), B.e("1")) == B.one
    assert algebra_op("complement", B.one) == B.zero
    assert algebra_op("minus", B.one, B.e("0")) == B.e("1")
    assert algebra_op("implies", B.e("0"), B.e("0")) == B.one
    assert algebra_leq(B.e("00"), B.e("0"))
    assert algebra_op("leq", B.e("00"), B.e("0")) and not algebra_op("leq", B.e("0"), B.e("00"))


def test_sums_and_products_examples(cohen2):
    B = RegularOpenAlgebra(cohen2)
    assert B.big_sum([]).is_zero()
    assert B.big_product([]).is_one()
    u = B.e("0")
    assert B.big_product([u, ~u]).is_zero()


@given(preorders(max_n=5))
def test_sum_of_atoms_is_one(P):
    B = RegularOpenAlgebra(P)
    assert B.big_sum(B.atoms).is_one()


@given(preorders(max_n=4), st.data())
def test_sums_are_least_upper_bounds(P, data):
    B = RegularOpenAlgebra(P)
    X = data.draw(st.lists(st.sampled_from(B.carrier), max_size=4))
    s, p = B.big_sum(X), B.big_product(X)
    uppers = [u for u in B.carrier if all(x <= u for x in X)]
    lowers = [u for u in B.carrier if all(u <= x for x in X)]
    assert s in uppers and all(s <= u for u in uppers)
    assert p in lowers and all(u <= p for u in lowers)


def test_mixed_algebras_rejected():
    A, C = RegularOpenAlgebra(antichain(2)), RegularOpenAlgebra(antichain(2))
    with pytest.raises(MixedAlgebras):
        A.one & C.one


@given(preorders(max_n=5))
def test_laws_hold(P):
    laws = verify_algebra_laws(RegularOpenAlgebra(P))
    assert all(laws.values()), [k for k, v in laws.items() if not v]


def test_laws_detect_a_broken_complement(monkeypatch, cohen2):
    B = RegularOpenAlgebra(cohen2)
    real = B.op_tables()
    meet, join, neg, leq = real
    broken = neg.copy()
    broken[1], broken[2] = neg[2], neg[1]
    monkeypatch.setattr(B, "op_tables", lambda: (meet, join, broken, leq))
    laws = verify_algebra_laws(B)
    assert not laws["complementation"]


@given(preorders(max_n=4))
def test_sum_laws_exhaustively_on_small_algebras(P):
    B = RegularOpenAlgebra(P)
    carrier = B.carrier
    families = [[u for i, u in enumerate(carrier) if m >> i & 1] for m in range(1 << len(carrier))] \
        if len(carrier) <= 8 else [carrier[:k] for k in range(len(carrier) + 1)]
    for X in families:
        sx, px = B.big_sum(X), B.big_product(X)
        for u in carrier:
            assert (u | sx) == B.big_sum([u | v for v in X]) or not X
            assert (u & px) == B.big_product([u & v for v in X]) or not X
            assert (u & sx) == B.big_sum([u & v for v in X])
            assert (u | px) == B.big_product([u | v for v in X])


# embeddings and induced maps

def test_induced_embedding_example(cohen2):
    emb = check_embedding(antichain(2), cohen2, {"a": "0", "b": "1"})
    j = induced_algebra_embedding(emb)
    assert j(j.source.e("a")).sorted_conditions() == ("0", "00", "01")


def test_identity_induces_identity(cohen2):
    emb = check_embedding(cohen2, cohen2, {p: p for p in cohen2.elements})
    B = RegularOpenAlgebra(cohen2)
    j = induced_algebra_embedding(emb, B, B)
    assert all(j(u) == u for u in B.carrier)


def test_plain_embedding_rejected():
    emb = check_embedding(Poset(["a"]), antichain(2), {"a": "a"})
    with pytest.raises(WrongEmbeddingKind):
        induced_algebra_embedding(emb)


@given(preorders(max_n=4, with_top=True))
def test_diagram_commutes_for_dense_embedding(P):
    B, e = complete(P)
    target = B.as_poset()
    emb = check_embedding(P, target, {p: str(B.e(p)) for p in P.elements})
    assert emb.kind in ("complete", "dense")
    j = induced_algebra_embedding(emb, B)
    for p in P.elements:
        assert j.target.e(str(B.e(p))) == j(B.e(p))


# ultrafilters and generics

def test_ultrafilter_examples():
    B = RegularOpenAlgebra(antichain(2))
    flags = classify_ultrafilter(B, [B.one, B.e("a")])
    assert flags["ultrafilter"] and flags["generic"] and flags["correspondence_holds"]
    flags = classify_ultrafilter(B, [B.one])
    assert flags["filter"] and not flags["ultrafilter"]


@given(preorders(max_n=5))
def test_every_ultrafilter_is_generic_and_corresponds(P):
    B = RegularOpenAlgebra(P)
    for F in ultrafilters(B):
        flags = classify_ultrafilter(B, F.members)
        assert flags["generic"] and flags["correspondence_holds"] and flags["generic_filter_on_nonzero"]


def test_pushforward_and_pullback_along_e(cohen2):
    B, e = complete(cohen2)
    target = e.target
    ups = set()
    for G in enumerate_generics(cohen2):
        H = transfer_generic(e, G, "pushforward")
        assert is_generic(target, H.members)
        assert transfer_generic(e, H, "pullback").members == G.members
        ups.add(H.members)
    assert ups == {H.members for H in enumerate_generics(target)}
