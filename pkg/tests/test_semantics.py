from itertools import product

import pytest
from hypothesis import given, settings, strategies as st

from strategies import preorders

from forcelab.algebra import RegularOpenAlgebra, ultrafilters
from forcelab.corpus import antichain, cohen
from forcelab.formula_space import FormulaSpace
from forcelab.formulas import (And, Eq, ExistsIn, ForallIn, In, Not, Or, Subset, Var, count_formulas, depth,
                               is_closed, iter_formulas)
from forcelab.hf import EMPTY
from forcelab.names import Name, check_name, empty_name, enumerate_names, subalgebra_pool
from forcelab.semantics import (BooleanValuer, bval_formula, bval_reference, quotient_model,
                                verify_bvm_laws, verify_delta0_satisfaction)


@pytest.fixture(scope="module")
def A2():
    return RegularOpenAlgebra(antichain(2))


@pytest.fixture(scope="module")
def B2():
    return RegularOpenAlgebra(cohen(2))


def test_member_of_singleton_name_has_its_value(B2):
    val = BooleanValuer(B2)
    e = empty_name(B2)
    for u in B2.carrier:
        assert val.member(e, Name.from_pairs(B2, [(e, u)])) == u


def test_distinct_check_names_are_unequal(B2):
    val = BooleanValuer(B2)
    zero, one = check_name(EMPTY, B2), check_name(frozenset({EMPTY}), B2)
    assert val.equal(zero, one).is_zero()
    assert val.member(zero, one).is_one()
    assert val.equal(one, one).is_one()


def test_zero_valued_entry_is_invisible(B2):
    val = BooleanValuer(B2)
    e = empty_name(B2)
    assert val.equal(Name.from_pairs(B2, [(e, B2.zero)]), e).is_one()


def test_connective_values(B2):
    names = enumerate_names(B2, 2, subalgebra_pool(B2))
    e, t = names[0], names[-1]
    f = In(e, t)
    val = BooleanValuer(B2)
    assert bval_formula(Not(f), B2) == ~val.formula(f)
    assert val.formula(Or(f, Not(f))).is_one()
    assert val.formula(And(f, Not(f))).is_zero()
    g = ExistsIn("x", t, Eq(Var("x"), e))
    assert val.formula(g) == B2.big_sum(v & val.equal(s, e) for s, v in t.entries)
    assert val.formula(ForallIn("x", t, Eq(Var("x"), e))).is_one()


@settings(max_examples=25)
@given(preorders(max_n=4))
def test_memoized_values_match_reference(P):
    B = RegularOpenAlgebra(P)
    val = BooleanValuer(B)
    names = enumerate_names(B, 2, subalgebra_pool(B))
    for t, s in product(names, repeat=2):
        for kind in ("eq", "in", "subset"):
            assert val.atomic(kind, t, s) == bval_reference(kind, t, s)


def test_rank3_reference_agreement(A2):
    val = BooleanValuer(A2)
    names = enumerate_names(A2, 3)[::97]
    for t, s in product(names, repeat=2):
        assert val.equal(t, s) == bval_reference("eq", t, s)


@settings(max_examples=25)
@given(preorders(max_n=4))
def test_bvm_laws_hold(P):
    B = RegularOpenAlgebra(P)
    pool = subalgebra_pool(B) if len(B) > 8 else None
    r = verify_bvm_laws(enumerate_names(B, 2, pool), quad_limit=5000)
    assert r["ok"], r["counterexamples"]


def test_bvm_laws_catch_a_broken_equality(monkeypatch, A2):
    val = BooleanValuer(A2)
    names = enumerate_names(A2, 2)
    real = val.equal
    monkeypatch.setattr(val, "equal", lambda t, s: A2.one if t is not s and t.text < s.text else real(t, s))
    assert not verify_bvm_laws(names, val)["ok"]


def test_quotient_model_of_antichain2(A2):
    names = enumerate_names(A2, 2)
    for F in ultrafilters(A2):
        M = quotient_model(names, F)
        # with the generic fixed, every rank-2 name is empty or {empty}
        assert len(M.domain) == 2
        e, one = M.value(names[0]), M.value(names[-1])
        assert M.atomic("in", e, one) and not M.atomic("in", one, e)
        assert M.satisfies(ExistsIn("x", names[-1], Eq(Var("x"), names[0])))


@pytest.mark.parametrize("P", [cohen(2), antichain(2), antichain(3)], ids=lambda P: P.name)
def test_delta0_satisfaction(P):
    B = RegularOpenAlgebra(P)
    pool = subalgebra_pool(B) if len(B) > 8 else None
    r = verify_delta0_satisfaction(B, max_rank=2, max_depth=2, pool=pool)
    assert r["ok"], r["counterexamples"]
    assert r["ultrafilters"] == len(B.atoms)


def _projection(space):
    return {(p.bvals[0], tuple(t[0] for t in p.truths)) for p in space.closed().profiles}


@pytest.mark.parametrize("d, count", [(0, 1), (1, 1), (2, 1), (0, 5), (1, 5)])
def test_profiles_match_literal_enumeration(A2, d, count):
    names = enumerate_names(A2, 2)[:count]
    val = BooleanValuer(A2)
    models = [quotient_model(names, F, val) for F in ultrafilters(A2)]
    space = FormulaSpace(names, models, val, d)
    literal = set()
    n = 0
    for f in iter_formulas(names, d):
        n += 1
        assert is_closed(f) and depth(f) <= d
        literal.add((val.formula(f).mask, tuple(M.satisfies(f) for M in models)))
    assert n == count_formulas(len(names), d)
    assert literal == _projection(space)


def test_formula_counts():
    assert count_formulas(1, 0) == 3
    assert count_formulas(2, 0) == 12
    assert sum(1 for _ in iter_formulas([Var("a")], 1)) == count_formulas(1, 1)


def test_unbound_variable_rejected(A2):
    from forcelab.errors import UnboundVariable
    with pytest.raises(UnboundVariable):
        BooleanValuer(A2).formula(Eq(Var("x"), empty_name(A2)))
