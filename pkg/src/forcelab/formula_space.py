"""Exhaustive checking of bounded formulas, grouped by semantic profile.

Literal enumeration of closed formulas is hopeless (over 30 names there are
about 10^31 formulas of depth 3), but every quantity we compare is
compositional.  A *profile* of a formula with free variables x1..xk records

* its Boolean value at every assignment of the variables to witness names,
* the set of conditions forcing it by the recursive definition (optional),
* its truth value in every world at every assignment of world elements.

The profile of a compound formula depends only on the profiles of its parts,
so closing the set of atomic profiles under the connectives up to a depth
yields the profile of every formula of that depth.  One witness formula is kept
per profile so callers can re-evaluate it with the direct evaluators.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product
from typing import Optional, Protocol, Sequence

from .errors import PoolTooLarge
from .formulas import (And, Eq, ExistsIn, ForallIn, Formula, Implies, In, Not, Or, Subset, Var,
                       count_formulas, var_name)
from .names import Name, domain_closure
from .order import Poset

KINDS = ("eq", "in", "subset")
ATOM_CLASS = {"eq": Eq, "in": In, "subset": Subset}


class World(Protocol):
    """A structure in which bounded formulas are evaluated Tarski-style."""

    domain: list

    def value(self, name: Name): ...

    def members(self, x) -> list: ...

    def atomic(self, kind: str, a, b) -> bool: ...


@dataclass(frozen=True)
class Profile:
    bvals: tuple  # algebra masks, one per assignment in W^k
    recs: Optional[tuple]  # forced-condition masks, one per assignment in W^k
    truths: tuple  # per world: tuple of bools, one per assignment in D_w^k


@dataclass
class Level:
    profiles: dict = field(default_factory=dict)  # Profile -> witness formula

    def add(self, prof: Profile, witness: Formula) -> None:
        if prof not in self.profiles:
            self.profiles[prof] = witness


class FormulaSpace:
    """Profiles of all bounded formulas of depth <= max_depth over a name list."""

    def __init__(self, names: Sequence[Name], worlds: Sequence[World], valuer, max_depth: int,
                 poset: Optional[Poset] = None, max_assignments: int = 4096):
        self.names = list(names)
        self.worlds = list(worlds)
        self.valuer = valuer
        self.algebra = valuer.algebra
        self.max_depth = max_depth
        self.poset = poset
        # witness names: everything a bounded quantifier can range over
        self.W = domain_closure(self.names)
        self.w_index = {n: i for i, n in enumerate(self.W)}
        self.d_index = [{x: i for i, x in enumerate(w.domain)} for w in self.worlds]
        for k in range(max_depth + 1):
            size = max([len(self.W) ** k] + [len(w.domain) ** k for w in self.worlds])
            if size > max_assignments:
                raise PoolTooLarge(f"{size} assignments in a context of {k} variables")
        self.counts = {"atomic": 0, "not": 0, "and": 0, "or": 0, "implies": 0, "exists": 0, "forall": 0}
        self.levels: dict[tuple[int, int], Level] = {}
        self._e_masks = None
        if poset is not None:
            self._e_masks = [self.algebra.e_mask(i) for i in range(len(poset))]

    # helpers

    def assignments(self, k: int) -> list[tuple]:
        return list(product(self.W, repeat=k))

    def world_assignments(self, w: int, k: int) -> list[tuple]:
        return list(product(self.worlds[w].domain, repeat=k))

    def _idx(self, table: dict, assignment: tuple, size: int) -> int:
        i = 0
        for x in assignment:
            i = i * size + table[x]
        return i

    def forced_mask(self, u_mask: int) -> int:
        """Conditions p with e(p) <= u."""
        out = 0
        for i, em in enumerate(self._e_masks):
            if em & ~u_mask == 0:
                out |= 1 << i
        return out

    def _resolve_name(self, term, assignment):
        return assignment[term.i] if isinstance(term, _Slot) else term

    def _resolve_world(self, w, term, assignment):
        return assignment[term.i] if isinstance(term, _Slot) else self.worlds[w].value(term)

    def terms(self, k: int) -> list:
        return list(self.names) + [_Slot(i) for i in range(k)]

    @staticmethod
    def term_formula(t):
        return Var(var_name(t.i + 1)) if isinstance(t, _Slot) else t

    # profile constructors

    def atomic(self, kind: str, a, b, k: int) -> Profile:
        self.counts["atomic"] += 1
        bvals = []
        for asg in self.assignments(k):
            x, y = self._resolve_name(a, asg), self._resolve_name(b, asg)
            bvals.append(self.valuer.atomic(kind, x, y).mask)
        recs = tuple(self.forced_mask(u) for u in bvals) if self.poset is not None else None
        truths = []
        for w, world in enumerate(self.worlds):
            row = []
            for asg in self.world_assignments(w, k):
                row.append(world.atomic(kind, self._resolve_world(w, a, asg), self._resolve_world(w, b, asg)))
            truths.append(tuple(row))
        return Profile(tuple(bvals), recs, tuple(truths))

    def rec_not(self, recs):
        return tuple(self.poset.nothing_below_mask(r) for r in recs)

    def rec_and(self, r1, r2):
        return tuple(a & b for a, b in zip(r1, r2))

    def rec_or(self, r1, r2):
        return self.rec_not(self.rec_and(self.rec_not(r1), self.rec_not(r2)))

    def negate(self, p: Profile) -> Profile:
        self.counts["not"] += 1
        B = self.algebra
        bvals = tuple(B.base.nothing_below_mask(u) for u in p.bvals)
        recs = self.rec_not(p.recs) if p.recs is not None else None
        return Profile(bvals, recs, tuple(tuple(not t for t in row) for row in p.truths))

    def conj(self, p: Profile, q: Profile) -> Profile:
        self.counts["and"] += 1
        recs = self.rec_and(p.recs, q.recs) if p.recs is not None else None
        return Profile(tuple(a & b for a, b in zip(p.bvals, q.bvals)), recs,
                       tuple(tuple(s and t for s, t in zip(r1, r2)) for r1, r2 in zip(p.truths, q.truths)))

    def disj(self, p: Profile, q: Profile) -> Profile:
        self.counts["or"] += 1
        reg = self.algebra.regularize_mask
        recs = self.rec_or(p.recs, q.recs) if p.recs is not None else None
        return Profile(tuple(reg(a | b) for a, b in zip(p.bvals, q.bvals)), recs,
                       tuple(tuple(s or t for s, t in zip(r1, r2)) for r1, r2 in zip(p.truths, q.truths)))

    def impl(self, p: Profile, q: Profile) -> Profile:
        self.counts["implies"] += 1
        B = self.algebra
        bvals = tuple(B.regularize_mask(B.base.nothing_below_mask(a) | b) for a, b in zip(p.bvals, q.bvals))
        recs = self.rec_or(self.rec_not(p.recs), q.recs) if p.recs is not None else None
        return Profile(bvals, recs,
                       tuple(tuple((not s) or t for s, t in zip(r1, r2)) for r1, r2 in zip(p.truths, q.truths)))

    def _quantified(self, bound, body: Profile, k: int, universal: bool) -> Profile:
        B = self.algebra
        base = B.base
        nW = len(self.W)
        bvals, recs = [], []
        body_recs = body.recs
        if universal and body_recs is not None:
            body_recs = self.rec_not(body_recs)
        for asg in self.assignments(k):
            b = self._resolve_name(bound, asg)
            row = self._idx(self.w_index, asg, nW) * nW
            if universal:
                u = base.full
                for s, v in b.entries:
                    u &= B.regularize_mask(base.nothing_below_mask(v.mask) | body.bvals[row + self.w_index[s]])
            else:
                u = 0
                for s, v in b.entries:
                    u |= v.mask & body.bvals[row + self.w_index[s]]
                u = B.regularize_mask(u)
            bvals.append(u)
            if body_recs is not None:
                # some r below every q forces "s in b" and the body at s
                witness = 0
                for s, _ in b.entries:
                    witness |= self.forced_mask(self.valuer.member(s, b).mask) & body_recs[row + self.w_index[s]]
                ex = base.dense_below_mask(witness)
                recs.append(base.nothing_below_mask(ex) if universal else ex)
        truths = []
        for w, world in enumerate(self.worlds):
            nD = len(world.domain)
            row_out = []
            for asg in self.world_assignments(w, k):
                x = self._resolve_world(w, bound, asg)
                base_i = self._idx(self.d_index[w], asg, nD) * nD
                vals = (body.truths[w][base_i + self.d_index[w][m]] for m in world.members(x))
                row_out.append(all(vals) if universal else any(vals))
            truths.append(tuple(row_out))
        return Profile(tuple(bvals), tuple(recs) if body.recs is not None else None, tuple(truths))

    def exists(self, bound, body: Profile, k: int) -> Profile:
        self.counts["exists"] += 1
        return self._quantified(bound, body, k, universal=False)

    def forall(self, bound, body: Profile, k: int) -> Profile:
        self.counts["forall"] += 1
        return self._quantified(bound, body, k, universal=True)

    # closure

    def level(self, k: int, d: int) -> Level:
        key = (k, d)
        if key in self.levels:
            return self.levels[key]
        out = Level()
        if d == 0:
            for kind in KINDS:
                for a in self.terms(k):
                    for b in self.terms(k):
                        out.add(self.atomic(kind, a, b, k),
                                ATOM_CLASS[kind](self.term_formula(a), self.term_formula(b)))
        else:
            lower = self.level(k, d - 1)
            items = list(lower.profiles.items())
            for prof, wit in items:
                out.add(prof, wit)
            for prof, wit in items:
                out.add(self.negate(prof), Not(wit))
            for p1, w1 in items:
                for p2, w2 in items:
                    out.add(self.conj(p1, p2), And(w1, w2))
                    out.add(self.disj(p1, p2), Or(w1, w2))
                    out.add(self.impl(p1, p2), Implies(w1, w2))
            inner = list(self.level(k + 1, d - 1).profiles.items())
            v = var_name(k + 1)
            for t in self.terms(k):
                tf = self.term_formula(t)
                for prof, wit in inner:
                    out.add(self.exists(t, prof, k), ExistsIn(v, tf, wit))
                    out.add(self.forall(t, prof, k), ForallIn(v, tf, wit))
        self.levels[key] = out
        return out

    def closed(self) -> Level:
        return self.level(0, self.max_depth)

    def all_levels(self) -> list[tuple[int, Level]]:
        """Every context that contributed to the closed level, deepest depth per context."""
        self.closed()
        out = []
        for k in range(self.max_depth + 1):
            out.append((k, self.level(k, self.max_depth - k)))
        return out

    def formulas_covered(self) -> int:
        return count_formulas(len(self.names), self.max_depth)


@dataclass(frozen=True)
class _Slot:
    i: int
