"""Boolean values of formulas, the Boolean-valued model laws and quotient models."""
from __future__ import annotations

import random
from dataclasses import dataclass
from itertools import product
from typing import Iterable, Mapping, Optional, Sequence

from .algebra import AlgebraElement, AlgebraUltrafilter, RegularOpenAlgebra, as_ultrafilter, ultrafilters
from .errors import MixedAlgebras, NotUltrafilter, UnboundVariable
from .formula_space import FormulaSpace
from .formulas import (ATOM_KIND, And, Eq, ExistsIn, ForallIn, Formula, Implies, In, Not, Or, Subset, Var,
                       formula_text)
from .names import Name, enumerate_names, subalgebra_pool

KIND_ORDER = {"subset": 0, "in": 1, "eq": 2}


class BooleanValuer:
    """Memoized atomic Boolean values over one algebra."""

    def __init__(self, algebra: RegularOpenAlgebra):
        self.algebra = algebra
        self.memo: dict = {}

    def _check(self, t: Name, s: Name):
        if t.algebra is not self.algebra or s.algebra is not self.algebra:
            raise MixedAlgebras("name from another algebra")

    def member(self, t: Name, s: Name) -> AlgebraElement:
        key = ("in", t, s)
        out = self.memo.get(key)
        if out is None:
            self._check(t, s)
            out = self.algebra.big_sum(self.equal(t, x) & v for x, v in s.entries)
            self.memo[key] = out
        return out

    def subset(self, t: Name, s: Name) -> AlgebraElement:
        key = ("subset", t, s)
        out = self.memo.get(key)
        if out is None:
            self._check(t, s)
            out = self.algebra.big_product(v.implies(self.member(y, s)) for y, v in t.entries)
            self.memo[key] = out
        return out

    def equal(self, t: Name, s: Name) -> AlgebraElement:
        key = ("eq", t, s)
        out = self.memo.get(key)
        if out is None:
            out = self.subset(t, s) & self.subset(s, t)
            self.memo[key] = out
        return out

    def atomic(self, kind: str, t: Name, s: Name) -> AlgebraElement:
        if kind == "in":
            return self.member(t, s)
        if kind == "subset":
            return self.subset(t, s)
        if kind == "eq":
            return self.equal(t, s)
        raise ValueError(f"unknown atomic kind {kind!r}")

    def formula(self, f: Formula, env: Optional[Mapping[str, Name]] = None) -> AlgebraElement:
        env = dict(env or {})
        return self._formula(f, env)

    def _term(self, t, env) -> Name:
        if isinstance(t, Var):
            if t.name not in env:
                raise UnboundVariable(t.name)
            return env[t.name]
        if not isinstance(t, Name):
            raise TypeError(f"Boolean values need names, got {t!r}")
        return t

    def _formula(self, f, env) -> AlgebraElement:
        B = self.algebra
        if isinstance(f, (Eq, In, Subset)):
            return self.atomic(ATOM_KIND[type(f)], self._term(f.left, env), self._term(f.right, env))
        if isinstance(f, Not):
            return ~self._formula(f.body, env)
        if isinstance(f, And):
            return self._formula(f.left, env) & self._formula(f.right, env)
        if isinstance(f, Or):
            return self._formula(f.left, env) | self._formula(f.right, env)
        if isinstance(f, Implies):
            return self._formula(f.left, env).implies(self._formula(f.right, env))
        bound = self._term(f.bound, env)
        parts = []
        for s, v in bound.entries:
            inner = dict(env)
            inner[f.var] = s
            body = self._formula(f.body, inner)
            parts.append(v & body if isinstance(f, ExistsIn) else v.implies(body))
        return B.big_sum(parts) if isinstance(f, ExistsIn) else B.big_product(parts)


def bval_atomic(kind: str, t: Name, s: Name, valuer: Optional[BooleanValuer] = None) -> AlgebraElement:
    return (valuer or BooleanValuer(t.algebra)).atomic(kind, t, s)


def bval_formula(f: Formula, algebra: RegularOpenAlgebra, env: Optional[Mapping[str, Name]] = None,
                 valuer: Optional[BooleanValuer] = None) -> AlgebraElement:
    return (valuer or BooleanValuer(algebra)).formula(f, env)


def bval_reference(kind: str, t: Name, s: Name, _measure=None) -> AlgebraElement:
    """Unmemoized evaluation that asserts the recursion measure strictly decreases.

    The measure is (rank(t) + rank(s), kind) with subset < in < eq.
    """
    measure = (t.brank + s.brank, KIND_ORDER[kind])
    if _measure is not None:
        assert measure < _measure, (measure, _measure)
    B = t.algebra
    if kind == "in":
        return B.big_sum(bval_reference("eq", t, x, measure) & v for x, v in s.entries)
    if kind == "subset":
        return B.big_product(v.implies(bval_reference("in", y, s, measure)) for y, v in t.entries)
    return bval_reference("subset", t, s, measure) & bval_reference("subset", s, t, measure)


# Boolean-valued model laws

BVM_LAWS = (
    "subset_right", "subset_left", "member_left", "member_right_eq", "member_right", "eq_transitive",
    "value_below_member", "eq_reflexive", "eq_symmetric", "membership_law",
)


def verify_bvm_laws(names: Sequence[Name], valuer: Optional[BooleanValuer] = None,
                    quad_limit: int = 100_000, seed: int = 0) -> dict:
    """Check the six substitution inequalities (and companions) on every triple of names."""
    if not names:
        return {"ok": True, "counts": {}, "counterexamples": []}
    B = names[0].algebra
    val = valuer or BooleanValuer(B)
    eq, mem, sub = val.equal, val.member, val.subset
    counts = {k: 0 for k in BVM_LAWS}
    bad = []

    def expect(law, ok, *witness):
        counts[law] += 1
        if not ok and len(bad) < 20:
            bad.append({"law": law, "names": [n.text for n in witness]})

    for t in names:
        expect("eq_reflexive", eq(t, t).is_one(), t)
        for y, v in t.entries:
            expect("value_below_member", v <= mem(y, t), t, y)
    for t, s in product(names, repeat=2):
        expect("eq_symmetric", eq(t, s) == eq(s, t), t, s)
    for t, s, x in product(names, repeat=3):
        sx = eq(s, x)
        expect("subset_right", sub(t, s) & sx <= sub(t, x), t, s, x)
        expect("subset_left", sub(s, t) & sx <= sub(x, t), t, s, x)
        expect("member_left", mem(s, t) & sx <= mem(x, t), t, s, x)
        expect("member_right_eq", mem(s, x) & eq(t, s) <= mem(t, x), t, s, x)
        expect("member_right", mem(t, s) & sx <= mem(t, x), t, s, x)
        expect("eq_transitive", eq(t, s) & sx <= eq(t, x), t, s, x)
    quads = product(names, repeat=4)
    if len(names) ** 4 > quad_limit:
        rng = random.Random(seed)
        quads = [tuple(rng.choice(names) for _ in range(4)) for _ in range(quad_limit)]
    for t, s, x, y in quads:
        expect("membership_law", mem(t, s) & eq(t, x) & eq(s, y) <= mem(x, y), t, s, x, y)
    return {"ok": not bad, "counts": counts, "counterexamples": bad}


# quotient models

@dataclass
class QuotientModel:
    """The structure (names / ~F, E_F) for an ultrafilter F."""

    algebra: RegularOpenAlgebra
    ultrafilter: AlgebraUltrafilter
    universe: list
    cls: dict  # name -> class index
    reps: list  # class index -> representative name
    E: frozenset  # pairs of class indices (member, set)

    @property
    def domain(self) -> list[int]:
        return list(range(len(self.reps)))

    def value(self, name: Name) -> int:
        return self.cls[name]

    def members(self, c: int) -> list[int]:
        return [a for a in range(len(self.reps)) if (a, c) in self.E]

    def atomic(self, kind: str, a: int, b: int) -> bool:
        if kind == "eq":
            return a == b
        if kind == "in":
            return (a, b) in self.E
        return all((c, b) in self.E for c in self.members(a))

    def satisfies(self, f: Formula, env: Optional[Mapping[str, int]] = None) -> bool:
        def ev(g, env):
            if isinstance(g, (Eq, In, Subset)):
                return self.atomic(ATOM_KIND[type(g)], term_in(g.left, env), term_in(g.right, env))
            if isinstance(g, Not):
                return not ev(g.body, env)
            if isinstance(g, And):
                return ev(g.left, env) and ev(g.right, env)
            if isinstance(g, Or):
                return ev(g.left, env) or ev(g.right, env)
            if isinstance(g, Implies):
                return (not ev(g.left, env)) or ev(g.right, env)
            results = (ev(g.body, {**env, g.var: c}) for c in self.members(term_in(g.bound, env)))
            return any(results) if isinstance(g, ExistsIn) else all(results)

        def term_in(t, env):
            if isinstance(t, Var):
                if t.name not in env:
                    raise UnboundVariable(t.name)
                return env[t.name]
            return self.cls[t]

        return ev(f, dict(env or {}))


def quotient_model(names: Sequence[Name], F, valuer: Optional[BooleanValuer] = None) -> QuotientModel:
    names = sorted(set(names), key=lambda n: n.key)
    if not names:
        raise ValueError("empty universe")
    B = names[0].algebra
    UF = as_ultrafilter(B, F)
    val = valuer or BooleanValuer(B)
    reps: list[Name] = []
    cls: dict[Name, int] = {}
    for n in names:
        for i, r in enumerate(reps):
            if val.equal(n, r) in UF:
                cls[n] = i
                break
        else:
            cls[n] = len(reps)
            reps.append(n)
    # ~ must be an equivalence relation on the universe and E must respect it
    for a in names:
        for b in names:
            if (val.equal(a, b) in UF) != (cls[a] == cls[b]):
                raise AssertionError("equality classes are not well defined")
    E = set()
    for a in names:
        for b in names:
            if val.member(a, b) in UF:
                E.add((cls[a], cls[b]))
    for a in names:
        for b in names:
            if (val.member(a, b) in UF) != ((cls[a], cls[b]) in E):
                raise AssertionError("membership is not invariant under equality")
    return QuotientModel(B, UF, names, cls, reps, frozenset(E))


def verify_delta0_satisfaction(algebra: RegularOpenAlgebra, max_rank: int = 2, max_depth: int = 2,
                               pool=None, names: Optional[Sequence[Name]] = None) -> dict:
    """Check that the quotient model satisfies a formula iff its Boolean value lies in F.

    Every closed formula of the given depth over the names of the given rank is
    covered through its profile; witness formulas are re-evaluated directly.
    """
    if names is None:
        names = enumerate_names(algebra, max_rank, pool)
    val = BooleanValuer(algebra)
    UFs = ultrafilters(algebra)
    models = [quotient_model(names, F, val) for F in UFs]
    space = FormulaSpace(names, models, val, max_depth)
    bad = []
    checked = 0
    for k, level in space.all_levels():
        asgs = space.assignments(k)
        for prof, wit in level.profiles.items():
            for w, M in enumerate(models):
                for a_i, asg in enumerate(asgs):
                    d_i = space._idx(space.d_index[w], tuple(M.value(x) for x in asg), len(M.domain))
                    in_f = algebra.from_mask(prof.bvals[a_i]) in M.ultrafilter
                    checked += 1
                    if prof.truths[w][d_i] != in_f and len(bad) < 20:
                        bad.append({"formula": formula_text(wit), "ultrafilter": w,
                                    "assignment": [x.text for x in asg]})
    # direct re-evaluation of closed witnesses
    direct = 0
    for prof, wit in space.closed().profiles.items():
        value = val.formula(wit)
        if value.mask != prof.bvals[0]:
            bad.append({"formula": formula_text(wit), "problem": "profile value mismatch"})
        for w, M in enumerate(models):
            direct += 1
            if M.satisfies(wit) != (value in M.ultrafilter):
                bad.append({"formula": formula_text(wit), "ultrafilter": w, "problem": "direct"})
    return {
        "ok": not bad,
        "names": len(names),
        "ultrafilters": len(models),
        "profiles": len(space.closed().profiles),
        "formulas_covered": space.formulas_covered(),
        "instances": checked,
        "direct_checks": direct,
        "connective_counts": dict(space.counts),
        "counterexamples": bad[:20],
    }
