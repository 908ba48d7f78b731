"""The regular open algebra ro(P) of a finite preorder.

Elements are regular open sets of conditions, stored as bitmasks over the base
poset.  Meet is intersection, join is the regularization of the union and the
complement of u is the set of conditions whose basic open set misses u.
"""
from __future__ import annotations

import random
from dataclasses import dataclass
from itertools import combinations
from typing import Iterable, Mapping, Optional

import numpy as np

from .errors import DiagramMismatch, MixedAlgebras, NotAnEmbedding, NotUltrafilter, WrongEmbeddingKind
from .order import (KIND_RANK, OrderEmbedding, Poset, bits, check_embedding, enumerate_generics,
                    is_generic)


class AlgebraElement:
    __slots__ = ("algebra", "mask")

    def __init__(self, algebra: "RegularOpenAlgebra", mask: int):
        self.algebra = algebra
        self.mask = mask

    @property
    def conditions(self) -> frozenset[str]:
        return self.algebra.base.members(self.mask)

    def sorted_conditions(self) -> tuple[str, ...]:
        return tuple(sorted(self.conditions))

    def _other(self, other) -> "AlgebraElement":
        if not isinstance(other, AlgebraElement) or other.algebra is not self.algebra:
            raise MixedAlgebras("operands live in different algebras")
        return other

    def __and__(self, other):
        return self.algebra._wrap(self.mask & self._other(other).mask)

    def __or__(self, other):
        return self.algebra._wrap(self.algebra.regularize_mask(self.mask | self._other(other).mask))

    def __invert__(self):
        return self.algebra._wrap(self.algebra.base.nothing_below_mask(self.mask))

    def __sub__(self, other):
        return self & ~self._other(other)

    def implies(self, other) -> "AlgebraElement":
        return ~self | self._other(other)

    def __le__(self, other):
        return self.mask & ~self._other(other).mask == 0

    def __ge__(self, other):
        return self._other(other) <= self

    def __lt__(self, other):
        return self <= other and self.mask != other.mask

    def __eq__(self, other):
        return isinstance(other, AlgebraElement) and other.algebra is self.algebra and other.mask == self.mask

    def __hash__(self):
        return hash((id(self.algebra), self.mask))

    def is_zero(self) -> bool:
        return self.mask == 0

    def is_one(self) -> bool:
        return self.mask == self.algebra.base.full

    def sort_key(self):
        return (bin(self.mask).count("1"), self.sorted_conditions())

    def __str__(self):
        return "[" + " ".join(self.sorted_conditions()) + "]"

    __repr__ = __str__


class RegularOpenAlgebra:
    """ro(P) for a finite preorder P."""

    def __init__(self, base: Poset):
        self.base = base
        n = len(base)
        self._e_masks = tuple(self.regularize_mask(base.down_mask(i)) for i in range(n))
        self.zero = AlgebraElement(self, 0)
        self.one = AlgebraElement(self, base.full)
        self._carrier: Optional[list[AlgebraElement]] = None
        self._tables = None
        self._atoms = None
        self._poset = None
        self.memo: dict = {}

    def _wrap(self, mask: int) -> AlgebraElement:
        return AlgebraElement(self, mask)

    def __repr__(self):
        return f"ro({self.base.name or '?'})"

    def regularize_mask(self, mask: int) -> int:
        """The least regular open set containing ``mask``.

        The pointwise formula (every q <= p has its basic open set meeting A)
        only gives the least regular open superset when A is open, so A is
        closed downward first.
        """
        return self.base.dense_below_mask(self.base.downward_closure_mask(mask))

    def regularize(self, conditions: Iterable[str]) -> AlgebraElement:
        return self._wrap(self.regularize_mask(self.base.mask(conditions)))

    def is_regular_open_mask(self, mask: int) -> bool:
        return self.base.is_open_mask(mask) and self.regularize_mask(mask) == mask

    def element(self, conditions: Iterable[str]) -> AlgebraElement:
        mask = self.base.mask(conditions)
        if not self.is_regular_open_mask(mask):
            raise ValueError(f"{sorted(conditions)} is not regular open")
        return self._wrap(mask)

    def from_mask(self, mask: int) -> AlgebraElement:
        return self._wrap(mask)

    def e(self, p: str) -> AlgebraElement:
        return self._wrap(self._e_masks[self.base.index[p]])

    def e_mask(self, i: int) -> int:
        return self._e_masks[i]

    # carrier

    @property
    def carrier(self) -> list[AlgebraElement]:
        """Every regular open set, sorted by size then by condition list.

        Built from the minimal classes: a regular open set is determined by the
        minimal conditions it contains.  ``brute_force_carrier`` is the literal
        subset search used to cross-check this.
        """
        if self._carrier is None:
            base = self.base
            classes = base.minimal_classes()
            minmask = [base.down_mask(i) & base.minimal_mask() for i in range(len(base))]
            out = []
            for r in range(len(classes) + 1):
                for combo in combinations(classes, r):
                    chosen = 0
                    for c in combo:
                        chosen |= c
                    mask = 0
                    for i in range(len(base)):
                        if minmask[i] & ~chosen == 0:
                            mask |= 1 << i
                    out.append(self._wrap(mask))
            out.sort(key=AlgebraElement.sort_key)
            self._carrier = out
        return self._carrier

    def brute_force_carrier(self) -> list[AlgebraElement]:
        n = len(self.base)
        if n > 16:
            raise ValueError("brute-force carrier limited to 16 conditions")
        out = [self._wrap(m) for m in range(1 << n) if self.is_regular_open_mask(m)]
        return sorted(out, key=AlgebraElement.sort_key)

    def __len__(self):
        return len(self.carrier)

    def __iter__(self):
        return iter(self.carrier)

    @property
    def atoms(self) -> list[AlgebraElement]:
        """Minimal nonzero elements."""
        if self._atoms is None:
            self._atoms = [u for u in self.carrier if not u.is_zero()
                           and all(v.is_zero() or not (v < u) for v in self.carrier)]
        return self._atoms

    def big_sum(self, xs: Iterable[AlgebraElement]) -> AlgebraElement:
        mask = 0
        for x in xs:
            if x.algebra is not self:
                raise MixedAlgebras("element from another algebra")
            mask |= x.mask
        return self._wrap(self.regularize_mask(mask))

    def big_product(self, xs: Iterable[AlgebraElement]) -> AlgebraElement:
        mask = self.base.full
        for x in xs:
            if x.algebra is not self:
                raise MixedAlgebras("element from another algebra")
            mask &= x.mask
        return self._wrap(mask)

    def as_poset(self, nonzero: bool = True) -> Poset:
        """The algebra (without 0 by default) as a poset whose ids are element strings."""
        if nonzero and self._poset is not None:
            return self._poset
        elems = [u for u in self.carrier if not (nonzero and u.is_zero())]
        ids = [str(u) for u in elems]
        pairs = [(ids[i], ids[j]) for i, u in enumerate(elems) for j, v in enumerate(elems) if i != j and u <= v]
        out = Poset(ids, pairs, top=str(self.one), name=f"ro({self.base.name})")
        if nonzero:
            self._poset = out
        return out

    def element_by_str(self, text: str) -> AlgebraElement:
        for u in self.carrier:
            if str(u) == text:
                return u
        raise KeyError(text)

    def op_tables(self):
        """Index tables for meet, join and complement over the sorted carrier."""
        if self._tables is None:
            carrier = self.carrier
            pos = {u.mask: i for i, u in enumerate(carrier)}
            n = len(carrier)
            meet = np.empty((n, n), dtype=np.int32)
            join = np.empty((n, n), dtype=np.int32)
            for i, u in enumerate(carrier):
                for j in range(i, n):
                    v = carrier[j]
                    meet[i, j] = meet[j, i] = pos[(u & v).mask]
                    join[i, j] = join[j, i] = pos[(u | v).mask]
            neg = np.array([pos[(~u).mask] for u in carrier], dtype=np.int32)
            leq = np.array([[u <= v for v in carrier] for u in carrier], dtype=bool)
            self._tables = (meet, join, neg, leq)
        return self._tables


def complete(P: Poset) -> tuple[RegularOpenAlgebra, OrderEmbedding]:
    """The completion ro(P) with the canonical dense embedding e into ro(P) minus zero."""
    B = RegularOpenAlgebra(P)
    return B, canonical_embedding(B)


def canonical_embedding(B: RegularOpenAlgebra) -> OrderEmbedding:
    target = B.as_poset()
    return check_embedding(B.base, target, {p: str(B.e(p)) for p in B.base.elements})


def algebra_op(kind: str, *args: AlgebraElement):
    """meet, join, complement, minus, implies (elements) or leq (a bool)."""
    if not args:
        raise ValueError("no operands")
    u = args[0]
    if kind == "meet":
        return u.algebra.big_product(args)
    if kind == "join":
        return u.algebra.big_sum(args)
    if kind == "complement":
        return ~u
    if kind == "minus":
        return u - args[1]
    if kind == "implies":
        return u.implies(args[1])
    if kind == "leq":
        return algebra_leq(u, args[1])
    raise ValueError(f"unknown operation {kind!r}")


def algebra_leq(u: AlgebraElement, v: AlgebraElement) -> bool:
    """u <= v iff u - v = 0."""
    return (u - v).is_zero()


# Boolean algebra laws, checked exhaustively with index tables.

def verify_algebra_laws(B: RegularOpenAlgebra, seed: int = 0, samples: int = 8) -> dict[str, bool]:
    meet, join, neg, leq = B.op_tables()
    n = len(B.carrier)
    r = np.arange(n)
    one = n - 1
    zero = 0
    assert B.carrier[one].is_one() and B.carrier[zero].is_zero()
    I, J, K = r[:, None, None], r[None, :, None], r[None, None, :]
    out = {}
    out["commutativity"] = bool((meet == meet.T).all() and (join == join.T).all())
    out["associativity"] = bool((meet[meet[I, J], K] == meet[I, meet[J, K]]).all()
                                and (join[join[I, J], K] == join[I, join[J, K]]).all())
    out["distributivity"] = bool((meet[I, join[J, K]] == join[meet[I, J], meet[I, K]]).all()
                                 and (join[I, meet[J, K]] == meet[join[I, J], join[I, K]]).all())
    A, C = r[:, None], r[None, :]
    out["absorption"] = bool((join[A, meet[A, C]] == A).all() and (meet[A, join[A, C]] == A).all())
    out["complementation"] = bool((join[r, neg] == one).all() and (meet[r, neg] == zero).all())
    out["idempotence"] = bool((meet[r, r] == r).all() and (join[r, r] == r).all())
    out["identity"] = bool((meet[r, one] == r).all() and (join[r, zero] == r).all())
    out["annihilation"] = bool((meet[r, zero] == zero).all() and (join[r, one] == one).all())
    out["de_morgan"] = bool((neg[join[A, C]] == meet[neg[A], neg[C]]).all()
                            and (neg[meet[A, C]] == join[neg[A], neg[C]]).all())
    out["double_negation"] = bool((neg[neg] == r).all())
    # order facts
    out["one_greatest"] = bool(leq[:, one].all())
    out["zero_least"] = bool(leq[zero, :].all())
    upper = leq[A, join[A, C]] & leq[C, join[A, C]]
    out["join_is_lub"] = bool(upper.all() and _bounds_are_extremal(join, leq, upper=True))
    out["meet_is_glb"] = bool((leq[meet[A, C], A] & leq[meet[A, C], C]).all()
                              and _bounds_are_extremal(meet, leq, upper=False))
    complements = (join == one) & (meet == zero)
    out["complement_unique"] = bool((complements.sum(axis=1) == 1).all() and complements[r, neg].all())
    out["disjoint_iff_meet_zero"] = bool(((meet == zero) == leq[A, neg[C]]).all())
    out.update(verify_sum_laws(B, seed=seed, samples=samples))
    return out


def _bounds_are_extremal(table, leq, upper: bool) -> bool:
    n = table.shape[0]
    for a in range(n):
        for c in range(n):
            t = table[a, c]
            if upper:
                bounds = np.flatnonzero(leq[a] & leq[c])
                if not leq[t, bounds].all():
                    return False
            else:
                bounds = np.flatnonzero(leq[:, a] & leq[:, c])
                if not leq[bounds, t].all():
                    return False
    return True


def verify_sum_laws(B: RegularOpenAlgebra, seed: int = 0, samples: int = 8) -> dict[str, bool]:
    """Infinite-distributivity style laws for seeded random families X, Y (|X|, |Y| <= 8)."""
    rng = random.Random(seed)
    carrier = B.carrier
    ok = {f"sums_{k}": True for k in range(1, 6)}
    families = [[], [rng.choice(carrier)]]
    for _ in range(samples):
        families.append(rng.sample(carrier, rng.randint(0, min(8, len(carrier)))))
    for X in families:
        for Y in families[: 4]:
            for u in carrier:
                sx, px, sy = B.big_sum(X), B.big_product(X), B.big_sum(Y)
                ok["sums_1"] &= (u | sx) == B.big_sum([u | v for v in X]) if X else True
                ok["sums_2"] &= (u & px) == B.big_product([u & v for v in X]) if X else True
                ok["sums_3"] &= (u & sx) == B.big_sum([u & v for v in X])
                ok["sums_4"] &= (u | px) == B.big_product([u | v for v in X])
                ok["sums_5"] &= (sx & sy) == B.big_sum([v & w for v in X for w in Y])
    return ok


# ultrafilters

@dataclass(frozen=True)
class AlgebraUltrafilter:
    algebra: RegularOpenAlgebra
    members: frozenset

    def __contains__(self, u):
        return u in self.members

    def sorted(self):
        return sorted(self.members, key=AlgebraElement.sort_key)


def ultrafilters(B: RegularOpenAlgebra) -> list[AlgebraUltrafilter]:
    """Every ultrafilter; on a finite algebra these are principal at the atoms."""
    return [AlgebraUltrafilter(B, frozenset(u for u in B.carrier if a <= u)) for a in B.atoms]


def classify_ultrafilter(B: RegularOpenAlgebra, F: Iterable[AlgebraElement]) -> dict[str, bool]:
    members = frozenset(F)
    carrier = B.carrier
    is_filter = (B.one in members and B.zero not in members
                 and all((u & v) in members for u in members for v in members)
                 and all(v in members for u in members for v in carrier if u <= v))
    is_ultra = is_filter and all((u in members) != ((~u) in members) for u in carrier)
    # generic: closed under products of all of its subsets, which is finite here
    is_gen_ultra = is_ultra and B.big_product(members) in members
    poset = B.as_poset()
    trimmed = [str(u) for u in members if not u.is_zero()]
    generic_on_poset = all(t in poset for t in trimmed) and is_generic(poset, trimmed, "minimal")
    return {
        "filter": is_filter,
        "ultrafilter": is_ultra,
        "generic": is_gen_ultra,
        "generic_filter_on_nonzero": generic_on_poset,
        "correspondence_holds": is_gen_ultra == generic_on_poset,
    }


def as_ultrafilter(B: RegularOpenAlgebra, F) -> AlgebraUltrafilter:
    if isinstance(F, AlgebraUltrafilter):
        return F
    members = frozenset(F)
    if not classify_ultrafilter(B, members)["ultrafilter"]:
        raise NotUltrafilter("not an ultrafilter")
    return AlgebraUltrafilter(B, members)


# induced embeddings between completions

@dataclass
class InducedEmbedding:
    embedding: OrderEmbedding
    source: RegularOpenAlgebra
    target: RegularOpenAlgebra
    table: dict  # AlgebraElement of source -> AlgebraElement of target
    relabel: dict  # target element -> source element (if in the image) or itself

    def __call__(self, u: AlgebraElement) -> AlgebraElement:
        return self.table[u]


def induced_algebra_embedding(i: OrderEmbedding, source: Optional[RegularOpenAlgebra] = None,
                              target: Optional[RegularOpenAlgebra] = None,
                              seed: int = 0) -> InducedEmbedding:
    """The map u -> regularize(i''u) from ro(P) into ro(Q) for a complete embedding i."""
    if KIND_RANK[i.kind] < KIND_RANK["complete"]:
        raise WrongEmbeddingKind("need a complete embedding")
    BP = source or RegularOpenAlgebra(i.source)
    BQ = target or RegularOpenAlgebra(i.target)
    table = {u: BQ.regularize(i.mapping[p] for p in u.conditions) for u in BP.carrier}
    for p in i.source.elements:
        if BQ.e(i.mapping[p]) != table[BP.e(p)]:
            raise DiagramMismatch(f"e_Q(i({p})) differs from j(e_P({p}))")
    # homomorphism and injectivity checks
    if table[BP.zero] != BQ.zero or table[BP.one] != BQ.one:
        raise NotAnEmbedding("induced map does not fix 0 and 1")
    if len(set(table.values())) != len(table):
        raise NotAnEmbedding("induced map is not injective")
    for u in BP.carrier:
        if table[~u] != ~table[u]:
            raise NotAnEmbedding("induced map does not preserve complements")
        for v in BP.carrier:
            if table[u & v] != table[u] & table[v] or table[u | v] != table[u] | table[v]:
                raise NotAnEmbedding("induced map does not preserve meets and joins")
    rng = random.Random(seed)
    carrier = BP.carrier
    for _ in range(32):
        X = rng.sample(carrier, rng.randint(0, len(carrier)))
        if table[BP.big_sum(X)] != BQ.big_sum(table[x] for x in X):
            raise NotAnEmbedding("induced map does not preserve sums")
        if table[BP.big_product(X)] != BQ.big_product(table[x] for x in X):
            raise NotAnEmbedding("induced map does not preserve products")
    back = {v: u for u, v in table.items()}
    relabel = {c: back.get(c, c) for c in BQ.carrier}
    return InducedEmbedding(i, BP, BQ, table, relabel)
