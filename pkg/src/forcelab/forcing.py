"""The forcing relation, valuation of names, and the Forcing Theorem at finite scale."""
from __future__ import annotations

from itertools import product
from typing import Iterable, Mapping, Optional, Sequence

from .algebra import AlgebraElement, RegularOpenAlgebra, canonical_embedding
from .errors import NotGeneric, UnboundVariable
from .formula_space import FormulaSpace
from .formulas import (ATOM_KIND, And, Eq, ExistsIn, ForallIn, Formula, Implies, In, Not, Or, Subset, Var,
                       formula_text, map_terms)
from .hf import EMPTY, HFSet, hf_rank, hf_sorted, hf_str, ordinal, pair, transitive_closure
from .names import (Name, check_name, condition_codes, decode_condition, domain_closure, enumerate_names,
                    generic_name, nice_name, op_name)
from .order import GenericFilter, Poset, bits, enumerate_generics, is_generic
from .semantics import BooleanValuer


class ForcingContext:
    """A poset together with its completion and everything derived from it."""

    def __init__(self, poset: Poset):
        self.poset = poset
        self.algebra = RegularOpenAlgebra(poset)
        self.valuer = BooleanValuer(self.algebra)
        self._embedding = None
        self._valuations: dict = {}
        self._forcing_sets: dict = {}

    def __repr__(self):
        return f"ForcingContext({self.poset.name or '?'})"

    @property
    def embedding(self):
        if self._embedding is None:
            self._embedding = canonical_embedding(self.algebra)
        return self._embedding

    @property
    def generics(self) -> list[GenericFilter]:
        return enumerate_generics(self.poset)

    def generic(self, members: Iterable[str]) -> GenericFilter:
        members = frozenset(members)
        if not is_generic(self.poset, members):
            raise NotGeneric(f"{sorted(members)} is not generic on {self.poset.name}")
        return GenericFilter(self.poset, members)

    def in_closure(self, G: GenericFilter, u: AlgebraElement) -> bool:
        """u belongs to the filter on B generated by e''G."""
        return any(self.algebra.e(p) <= u for p in G.members)

    def generic_mask(self, G: GenericFilter) -> int:
        return self.poset.mask(G.members)

    # valuation

    def valuate(self, name: Name, G: GenericFilter) -> HFSet:
        key = (G.members, name)
        out = self._valuations.get(key)
        if out is None:
            out = frozenset(self.valuate(s, G) for s, v in name.entries if self.in_closure(G, v))
            self._valuations[key] = out
        return out

    # forcing

    def forces(self, p: str, f: Formula, env: Optional[Mapping[str, Name]] = None) -> bool:
        """p forces f iff e(p) <= [[f]]."""
        return self.algebra.e(p) <= self.valuer.formula(f, env)

    def forcing_set(self, f: Formula, env: Optional[Mapping[str, Name]] = None) -> int:
        """Mask of conditions forcing ``f`` by the recursive definition."""
        env = dict(env or {})
        key = (f, tuple(sorted(env.items(), key=lambda kv: kv[0])))
        out = self._forcing_sets.get(key)
        if out is None:
            out = self._forcing_set(f, env)
            self._forcing_sets[key] = out
        return out

    def _atomic_set(self, u: AlgebraElement) -> int:
        out = 0
        for i in range(len(self.poset)):
            if self.algebra.e_mask(i) & ~u.mask == 0:
                out |= 1 << i
        return out

    def _term(self, t, env) -> Name:
        if isinstance(t, Var):
            if t.name not in env:
                raise UnboundVariable(t.name)
            return env[t.name]
        return t

    def _forcing_set(self, f: Formula, env) -> int:
        P = self.poset
        if isinstance(f, (Eq, In, Subset)):
            u = self.valuer.atomic(ATOM_KIND[type(f)], self._term(f.left, env), self._term(f.right, env))
            return self._atomic_set(u)
        if isinstance(f, Not):
            return P.nothing_below_mask(self.forcing_set(f.body, env))
        if isinstance(f, And):
            return self.forcing_set(f.left, env) & self.forcing_set(f.right, env)
        if isinstance(f, Or):
            return self.forcing_set(Not(And(Not(f.left), Not(f.right))), env)
        if isinstance(f, Implies):
            return self.forcing_set(Or(Not(f.left), f.right), env)
        if isinstance(f, ForallIn):
            return self.forcing_set(Not(ExistsIn(f.var, f.bound, Not(f.body))), env)
        # dense below p: some r forcing "s in bound" and the body at s
        bound = self._term(f.bound, env)
        witness = 0
        for s, _ in bound.entries:
            member = self._atomic_set(self.valuer.member(s, bound))
            witness |= member & self.forcing_set(f.body, {**env, f.var: s})
        return P.dense_below_mask(witness)

    def forces_recursive(self, p: str, f: Formula, env: Optional[Mapping[str, Name]] = None) -> bool:
        return bool(self.forcing_set(f, env) >> self.poset.index[p] & 1)


def forces(ctx: ForcingContext, p: str, f: Formula, env=None) -> bool:
    return ctx.forces(p, f, env)


def forces_recursive(ctx: ForcingContext, p: str, f: Formula, env=None) -> bool:
    return ctx.forces_recursive(p, f, env)


def valuate(ctx: ForcingContext, name: Name, G: GenericFilter) -> HFSet:
    return ctx.valuate(name, G)


def valuate_formula(ctx: ForcingContext, f: Formula, G: GenericFilter) -> Formula:
    return map_terms(f, lambda t: ctx.valuate(t, G) if isinstance(t, Name) else t)


def hf_eval(f: Formula, env: Optional[Mapping[str, HFSet]] = None) -> bool:
    """Tarskian truth of a bounded formula whose constants are HF sets."""
    env = dict(env or {})

    def term(t, env):
        if isinstance(t, Var):
            if t.name not in env:
                raise UnboundVariable(t.name)
            return env[t.name]
        if isinstance(t, Name):
            raise TypeError("valuate names before evaluating over HF sets")
        return t

    def ev(g, env):
        if isinstance(g, Eq):
            return term(g.left, env) == term(g.right, env)
        if isinstance(g, In):
            return term(g.left, env) in term(g.right, env)
        if isinstance(g, Subset):
            return term(g.left, env) <= term(g.right, env)
        if isinstance(g, Not):
            return not ev(g.body, env)
        if isinstance(g, And):
            return ev(g.left, env) and ev(g.right, env)
        if isinstance(g, Or):
            return ev(g.left, env) or ev(g.right, env)
        if isinstance(g, Implies):
            return (not ev(g.left, env)) or ev(g.right, env)
        results = (ev(g.body, {**env, g.var: x}) for x in term(g.bound, env))
        return any(results) if isinstance(g, ExistsIn) else all(results)

    return ev(f, env)


class GenericWorld:
    """The HF part of V[G] reachable from a list of names, as a world for FormulaSpace."""

    def __init__(self, ctx: ForcingContext, G: GenericFilter, names: Sequence[Name], witnesses: Sequence[Name]):
        self.ctx = ctx
        self.G = G
        vals = [ctx.valuate(n, G) for n in list(names) + list(witnesses)]
        dom = set(transitive_closure(vals)) | {ctx.valuate(w, G) for w in witnesses}
        self.domain = hf_sorted(dom)

    def value(self, name: Name) -> HFSet:
        return self.ctx.valuate(name, self.G)

    def members(self, x: HFSet) -> list:
        return list(x)

    def atomic(self, kind: str, a: HFSet, b: HFSet) -> bool:
        if kind == "eq":
            return a == b
        if kind == "in":
            return a in b
        return a <= b


def _space(ctx: ForcingContext, names, max_depth, worlds=True) -> FormulaSpace:
    W = domain_closure(names)
    ws = [GenericWorld(ctx, G, names, W) for G in ctx.generics] if worlds else []
    return FormulaSpace(names, ws, ctx.valuer, max_depth, poset=ctx.poset)


def verify_forcing_theorem(ctx: ForcingContext, max_rank: int = 2, max_depth: int = 3, pool=None,
                           names: Optional[Sequence[Name]] = None) -> dict:
    """Truth in V[G] agrees with being forced by a condition in G, for every formula in range.

    Both routes to forcing (via the completion and via the recursive
    definition) are compared as well.
    """
    if names is None:
        names = enumerate_names(ctx.algebra, max_rank, pool)
    P = ctx.poset
    space = _space(ctx, names, max_depth)
    gens = ctx.generics
    bad: list = []

    def report(wit, problem, G=None, p=None, asg=()):
        if len(bad) < 20:
            bad.append({"poset": P.name, "formula": formula_text(wit), "problem": problem,
                        "generic": sorted(G.members) if G else None, "condition": p,
                        "assignment": [x.text for x in asg]})

    instances = 0
    for k, level in space.all_levels():
        asgs = space.assignments(k)
        for prof, wit in level.profiles.items():
            for a_i, asg in enumerate(asgs):
                comp = space.forced_mask(prof.bvals[a_i])
                if prof.recs[a_i] != comp:
                    report(wit, "forcing routes disagree", asg=asg)
                for w, G in enumerate(gens):
                    world = space.worlds[w]
                    d_i = space._idx(space.d_index[w], tuple(world.value(x) for x in asg), len(world.domain))
                    instances += 1
                    if prof.truths[w][d_i] != bool(comp & ctx.generic_mask(G)):
                        report(wit, "truth differs from forcing", G=G, asg=asg)
    direct = 0
    for prof, wit in space.closed().profiles.items():
        value = ctx.valuer.formula(wit)
        if value.mask != prof.bvals[0]:
            report(wit, "profile value mismatch")
        rec = ctx.forcing_set(wit)
        for p in P.elements:
            direct += 1
            if ctx.forces(p, wit) != bool(rec >> P.index[p] & 1):
                report(wit, "forcing routes disagree", p=p)
        for G in gens:
            direct += 1
            truth = hf_eval(valuate_formula(ctx, wit, G))
            if truth != any(ctx.forces(p, wit) for p in G.members):
                report(wit, "truth differs from forcing", G=G)
    return {
        "ok": not bad,
        "poset": P.name,
        "names": len(names),
        "generics": len(gens),
        "profiles": len(space.closed().profiles),
        "formulas_covered": space.formulas_covered(),
        "instances": instances,
        "direct_checks": direct,
        "connective_counts": dict(space.counts),
        "counterexamples": bad,
    }


FACTS = ("persistence", "density", "double_negation", "disjunction", "bounded_universal",
         "consistency", "deciding_dense", "routes_agree")


def verify_forcing_facts(ctx: ForcingContext, max_rank: int = 2, max_depth: int = 2, pool=None,
                         names: Optional[Sequence[Name]] = None) -> dict:
    """The basic properties of the forcing relation, over every formula profile in range."""
    if names is None:
        names = enumerate_names(ctx.algebra, max_rank, pool)
    P = ctx.poset
    space = _space(ctx, names, max_depth, worlds=False)
    counts = {k: 0 for k in FACTS}
    bad: list = []

    def expect(fact, ok, wit):
        counts[fact] += 1
        if not ok and len(bad) < 20:
            bad.append({"poset": P.name, "fact": fact, "formula": formula_text(wit)})

    for k, level in space.all_levels():
        for prof, wit in level.profiles.items():
            neg = space.rec_not(prof.recs)
            for a_i, R in enumerate(prof.recs):
                expect("persistence", P.downward_closure_mask(R) == R, wit)
                expect("density", P.dense_below_mask(R) & ~R == 0, wit)
                expect("double_negation", P.nothing_below_mask(neg[a_i]) == R, wit)
                expect("consistency", R & neg[a_i] == 0, wit)
                expect("deciding_dense", P.is_dense_mask(R | neg[a_i]), wit)
                expect("routes_agree", R == space.forced_mask(prof.bvals[a_i]), wit)
    for k in range(max_depth):
        lower = list(space.level(k, max_depth - k - 1).profiles.items())
        for p1, w1 in lower:
            for p2, w2 in lower:
                ors = space.rec_or(p1.recs, p2.recs)
                for a_i in range(len(ors)):
                    expect("disjunction", ors[a_i] == P.dense_below_mask(p1.recs[a_i] | p2.recs[a_i]), Or(w1, w2))
        inner = list(space.level(k + 1, max_depth - k - 1).profiles.items())
        for t in space.terms(k):
            for prof, wit in inner:
                every = space.forall(t, prof, k)
                for a_i, asg in enumerate(space.assignments(k)):
                    b = space._resolve_name(t, asg)
                    row = space._idx(space.w_index, asg, len(space.W)) * len(space.W)
                    want = P.full
                    for s, _ in b.entries:
                        member = space.forced_mask(ctx.valuer.member(s, b).mask)
                        want &= space.rec_or(space.rec_not((member,)), (prof.recs[row + space.w_index[s]],))[0]
                    expect("bounded_universal", every.recs[a_i] == want,
                           ForallIn("x", space.term_formula(t), wit))
    # direct checks on the closed witnesses
    for prof, wit in space.closed().profiles.items():
        R = ctx.forcing_set(wit)
        N = ctx.forcing_set(Not(wit))
        expect("persistence", P.downward_closure_mask(R) == R, wit)
        expect("double_negation", ctx.forcing_set(Not(Not(wit))) == R, wit)
        expect("consistency", R & N == 0, wit)
        expect("deciding_dense", P.is_dense_mask(R | N), wit)
        expect("routes_agree", all(ctx.forces(p, wit) == bool(R >> i & 1) for i, p in enumerate(P.elements)), wit)
    return {"ok": not bad, "poset": P.name, "names": len(names), "profiles": len(space.closed().profiles),
            "formulas_covered": space.formulas_covered(), "counts": counts, "counterexamples": bad}


# facts about names

def hf_universe(max_rank: int) -> list[HFSet]:
    """All HF sets of rank < max_rank + 1 (that is, V_{max_rank+1})."""
    level = [EMPTY]
    for _ in range(max_rank):
        members = level
        level = [frozenset(m for i, m in enumerate(members) if mask >> i & 1) for mask in range(1 << len(members))]
    return hf_sorted(level)


def verify_name_facts(ctx: ForcingContext, max_rank: int = 2, hf_rank_limit: int = 3, pool=None) -> dict:
    """Check names, generic name, op names, rank bound and nice names against valuations."""
    B = ctx.algebra
    P = ctx.poset
    names = enumerate_names(B, max_rank, pool)
    gdot = generic_name(B)
    checks = {"check_names": 0, "generic_name": 0, "rank_bound": 0, "op_pairs": 0,
              "nice_subset": 0, "nice_value": 0, "nice_equal": 0}
    bad = []

    def expect(key, ok, detail):
        checks[key] += 1
        if not ok and len(bad) < 20:
            bad.append({"poset": P.name, "check": key, "detail": detail})

    universe = hf_universe(hf_rank_limit)
    for G in ctx.generics:
        for x in universe:
            expect("check_names", ctx.valuate(check_name(x, B), G) == x, hf_str(x))
        decoded = {decode_condition(P, c) for c in ctx.valuate(gdot, G)}
        expect("generic_name", decoded == set(G.members), sorted(G.members))
        for n in names:
            expect("rank_bound", hf_rank(ctx.valuate(n, G)) <= n.brank, n.text)
        for a, b in product(names, repeat=2):
            expect("op_pairs", ctx.valuate(op_name(a, b), G) == pair(ctx.valuate(a, G), ctx.valuate(b, G)),
                   [a.text, b.text])
    val = ctx.valuer
    for z, a in product(names, repeat=2):
        nice = nice_name(z, a)
        expect("nice_subset", val.subset(nice, a).is_one(), [z.text, a.text])
        expect("nice_equal", val.subset(z, a) <= val.equal(z, nice), [z.text, a.text])
        for G in ctx.generics:
            iz, ia = ctx.valuate(z, G), ctx.valuate(a, G)
            if iz <= ia:
                expect("nice_value", ctx.valuate(nice, G) == iz, [z.text, a.text])
    return {"ok": not bad, "poset": P.name, "names": len(names), "checks": checks, "counterexamples": bad}


def transport_name(name: Name, induced, memo: Optional[dict] = None) -> Name:
    """Push a name over ro(P) along an induced algebra embedding into ro(Q)."""
    memo = {} if memo is None else memo
    if name not in memo:
        memo[name] = Name.from_pairs(induced.target,
                                     [(transport_name(c, induced, memo), induced(v)) for c, v in name.entries])
    return memo[name]


def verify_subposet_valuation(small: ForcingContext, big: ForcingContext, induced, max_rank: int = 2,
                              pool=None) -> dict:
    """For a complete embedding i: i_G(j(t)) equals i_H(t) where H is the pullback of G."""
    names = enumerate_names(small.algebra, max_rank, pool)
    emb = induced.embedding
    memo: dict = {}
    count, bad = 0, []
    for G in big.generics:
        H = GenericFilter(small.poset, frozenset(p for p in small.poset.elements if emb.mapping[p] in G.members))
        if not is_generic(small.poset, H.members):
            bad.append({"problem": "pullback not generic", "generic": sorted(G.members)})
            continue
        for n in names:
            count += 1
            if big.valuate(transport_name(n, induced, memo), G) != small.valuate(n, H):
                bad.append({"name": n.text, "generic": sorted(G.members)})
    return {"ok": not bad, "checks": count, "counterexamples": bad[:20]}
