import pytest
from hypothesis import given, settings

from strategies import preorders

from forcelab.corpus import antichain, chain, cohen
from forcelab.errors import NotGeneric
from forcelab.forcing import (ForcingContext, hf_eval, valuate_formula, verify_forcing_facts,
                              verify_forcing_theorem, verify_name_facts, verify_subposet_valuation)
from forcelab.algebra import induced_algebra_embedding
from forcelab.formulas import And, Eq, ExistsIn, ForallIn, In, Not, Or, Subset, Var, iter_formulas
from forcelab.hf import EMPTY, ordinal, pair
from forcelab.names import check_name, condition_codes, enumerate_names, generic_name, subalgebra_pool
from forcelab.order import check_embedding


@pytest.fixture(scope="module")
def ctx2():
    return ForcingContext(cohen(2))


def _member_of_generic(ctx, p):
    code = condition_codes(ctx.poset)[p]
    return In(check_name(code, ctx.algebra), generic_name(ctx.algebra))


def test_generic_membership_examples(ctx2):
    f = _member_of_generic(ctx2, "00")
    assert not ctx2.forces("0", f) and not ctx2.forces("0", Not(f))
    assert ctx2.forces("00", f)
    assert ctx2.forces("01", Not(f))
    assert ctx2.forces("root", Or(f, Not(f)))


def test_every_condition_forces_its_own_membership(ctx2):
    for p in ctx2.poset.elements:
        assert ctx2.forces(p, _member_of_generic(ctx2, p))
        assert ctx2.forces_recursive(p, _member_of_generic(ctx2, p))


def test_bool_value_of_generic_membership_is_e(ctx2):
    B = ctx2.algebra
    for p in ctx2.poset.elements:
        assert ctx2.valuer.formula(_member_of_generic(ctx2, p)) == B.e(p)


def test_generic_name_valuates_to_codes_of_generic(ctx2):
    codes = condition_codes(ctx2.poset)
    for G in ctx2.generics:
        assert ctx2.valuate(generic_name(ctx2.algebra), G) == frozenset(codes[p] for p in G.members)


def test_generic_check_rejects_non_generic(ctx2):
    with pytest.raises(NotGeneric):
        ctx2.generic(["root", "0"])


def test_hf_eval_examples():
    one, two = ordinal(1), ordinal(2)
    assert hf_eval(In(EMPTY, one))
    assert hf_eval(Subset(one, two)) and not hf_eval(Subset(two, one))
    assert hf_eval(ExistsIn("x", two, Eq(Var("x"), one)))
    assert hf_eval(ForallIn("x", two, In(Var("x"), two)))
    assert not hf_eval(ForallIn("x", two, Eq(Var("x"), EMPTY)))
    assert hf_eval(In(two, pair(EMPTY, one))) and not hf_eval(In(one, pair(EMPTY, one)))


def _semantic_forcing(ctx, p, f):
    """p forces f iff f is true in V[G] for every generic G containing p."""
    return all(hf_eval(valuate_formula(ctx, f, G)) for G in ctx.generics if p in G.members)


@pytest.mark.parametrize("P", [cohen(1), antichain(2), chain(2)], ids=lambda P: P.name)
def test_forcing_matches_semantic_oracle(P):
    ctx = ForcingContext(P)
    names = enumerate_names(ctx.algebra, 2, subalgebra_pool(ctx.algebra))[:3]
    for f in iter_formulas(names, 1):
        for p in P.elements:
            expected = _semantic_forcing(ctx, p, f)
            assert ctx.forces(p, f) == expected
            assert ctx.forces_recursive(p, f) == expected


@pytest.mark.parametrize("P", [cohen(2), antichain(2)], ids=lambda P: P.name)
def test_forcing_theorem(P):
    ctx = ForcingContext(P)
    pool = subalgebra_pool(ctx.algebra) if len(ctx.algebra) > 8 else None
    r = verify_forcing_theorem(ctx, max_rank=2, max_depth=3, pool=pool)
    assert r["ok"], r["counterexamples"]
    assert r["instances"] > 0 and r["direct_checks"] > 0


def test_forcing_theorem_detects_a_broken_valuation(monkeypatch):
    ctx = ForcingContext(antichain(2))

    def careless(name, G):  # ignores the conditions attached to entries
        return frozenset(careless(s, G) for s, _ in name.entries)

    monkeypatch.setattr(ctx, "valuate", careless)
    r = verify_forcing_theorem(ctx, max_rank=2, max_depth=1)
    assert not r["ok"]
    assert any(c["problem"] == "truth differs from forcing" for c in r["counterexamples"])


@settings(max_examples=20)
@given(preorders(max_n=4))
def test_forcing_facts(P):
    ctx = ForcingContext(P)
    pool = subalgebra_pool(ctx.algebra) if len(ctx.algebra) > 8 else None
    r = verify_forcing_facts(ctx, max_rank=2, max_depth=2, pool=pool)
    assert r["ok"], r["counterexamples"]


@settings(max_examples=20)
@given(preorders(max_n=4, with_top=True))
def test_name_facts(P):
    ctx = ForcingContext(P)
    pool = subalgebra_pool(ctx.algebra) if len(ctx.algebra) > 8 else None
    r = verify_name_facts(ctx, max_rank=2, hf_rank_limit=3, pool=pool)
    assert r["ok"], r["counterexamples"]


def test_forcing_set_persistence_on_compound_formula(ctx2):
    f = _member_of_generic(ctx2, "00")
    g = _member_of_generic(ctx2, "1")
    R = ctx2.forcing_set(Or(f, g))
    assert {p for p in ctx2.poset.elements if R >> ctx2.poset.index[p] & 1} == {"00", "1", "10", "11"}
    assert ctx2.forcing_set(And(f, g)) == 0


def test_valuation_along_complete_subposet():
    small, big = ForcingContext(antichain(2)), ForcingContext(cohen(2))
    emb = check_embedding(small.poset, big.poset, {"a": "0", "b": "1"})
    j = induced_algebra_embedding(emb, small.algebra, big.algebra)
    r = verify_subposet_valuation(small, big, j)
    assert r["ok"], r["counterexamples"]
