"""Boolean-valued names over ro(P).

A name is a finite function from names to algebra elements.  Names are
immutable and kept in canonical form: duplicate keys are folded by join and the
entries are sorted by (rank, serialized form).
"""
from __future__ import annotations

from itertools import product
from typing import Iterable, Optional, Sequence

from .algebra import AlgebraElement, RegularOpenAlgebra
from .errors import MixedAlgebras, PoolTooLarge, UnknownElement
from .hf import EMPTY, HFSet, hf_sorted, ordinal, pair
from .order import Poset


def element_text(u: AlgebraElement) -> str:
    if u.is_zero():
        return "0"
    if u.is_one():
        return "1"
    return "(conds " + " ".join(u.sorted_conditions()) + ")"


class Name:
    __slots__ = ("algebra", "entries", "brank", "_hash", "_text", "_table")

    def __init__(self, algebra: RegularOpenAlgebra, entries: tuple = ()):
        # entries must already be canonical; use Name.from_pairs otherwise
        self.algebra = algebra
        self.entries = entries
        self.brank = 1 + max((c.brank for c, _ in entries), default=0)
        self._hash = hash((id(algebra), entries))
        self._text = None
        self._table = None

    @classmethod
    def from_pairs(cls, algebra: RegularOpenAlgebra, pairs: Iterable[tuple["Name", AlgebraElement]]) -> "Name":
        folded: dict[Name, AlgebraElement] = {}
        for child, value in pairs:
            if child.algebra is not algebra or value.algebra is not algebra:
                raise MixedAlgebras("name entries from another algebra")
            folded[child] = folded[child] | value if child in folded else value
        entries = tuple(sorted(folded.items(), key=lambda cv: cv[0].key))
        return cls(algebra, entries)

    @classmethod
    def empty(cls, algebra: RegularOpenAlgebra) -> "Name":
        return cls(algebra, ())

    @property
    def key(self) -> tuple[int, str]:
        return (self.brank, self.text)

    @property
    def text(self) -> str:
        if self._text is None:
            body = "".join(f" (entry {c.text} {element_text(v)})" for c, v in self.entries)
            self._text = "(name" + body + ")"
        return self._text

    def __str__(self):
        return self.text

    def __repr__(self):
        return f"Name{self.text}"

    def __hash__(self):
        return self._hash

    def __eq__(self, other):
        if self is other:
            return True
        return (isinstance(other, Name) and self._hash == other._hash
                and self.algebra is other.algebra and self.entries == other.entries)

    def __lt__(self, other):
        return self.key < other.key

    def __len__(self):
        return len(self.entries)

    @property
    def dom(self) -> tuple["Name", ...]:
        return tuple(c for c, _ in self.entries)

    def items(self):
        return self.entries

    def __getitem__(self, child: "Name") -> AlgebraElement:
        if self._table is None:
            self._table = dict(self.entries)
        return self._table[child]

    def get(self, child: "Name", default=None):
        if self._table is None:
            self._table = dict(self.entries)
        return self._table.get(child, default)


def brank(n: Name) -> int:
    return n.brank


def canonicalize(algebra: RegularOpenAlgebra, pairs) -> Name:
    return Name.from_pairs(algebra, pairs)


# pairing codes on ranks

def pair_code(a: int, b: int) -> int:
    """Position of (a, b) when pairs are ordered by (max, first, second)."""
    m = max(a, b)
    return m * m + (a if a < m else m + b)


def triple_code(a: int, b: int, c: int) -> int:
    """Position of (a, b, c) when triples are ordered by (max, first, second, third)."""
    m = max(a, b, c)
    code = m ** 3 + a * (2 * m + 1)
    code += b * ((m + 1) if a == m else 1)
    if a == m or b == m:
        code += c
    return code


# condition codes

def condition_codes(P: Poset) -> dict[str, HFSet]:
    """HF codes for conditions: explicit codes if given, else ordinals with the top at 0."""
    if P.codes is not None:
        return P.codes
    cached = P._cache.get("codes")
    if cached is None:
        order = list(P.elements)
        if P.top is not None:
            order.remove(P.top)
            order.insert(0, P.top)
        cached = {p: ordinal(i) for i, p in enumerate(order)}
        P._cache["codes"] = cached
    return cached


def decode_condition(P: Poset, x: HFSet) -> str:
    for p, code in condition_codes(P).items():
        if code == x:
            return p
    raise UnknownElement(f"no condition of {P.name} is coded by {x}")


def poset_relation_hf(Q: Poset) -> HFSet:
    """Q as an HF set of ordered pairs of condition codes."""
    codes = condition_codes(Q)
    return frozenset(pair(codes[a], codes[b]) for a, b in Q.relation())


# standard names

def check_name(x: HFSet, algebra: RegularOpenAlgebra) -> Name:
    memo = algebra.memo.setdefault("check", {})
    out = memo.get(x)
    if out is None:
        out = Name.from_pairs(algebra, [(check_name(y, algebra), algebra.one) for y in x])
        memo[x] = out
    return out


def check_value(n: Name) -> Optional[HFSet]:
    """The HF set x when n is literally the check name of x, else None."""
    if any(not v.is_one() for _, v in n.entries):
        return None
    members = []
    for c, _ in n.entries:
        y = check_value(c)
        if y is None:
            return None
        members.append(y)
    return frozenset(members)


def op_name(a: Name, b: Name, value: Optional[AlgebraElement] = None) -> Name:
    """{<a, v>, <{<a, v>, <b, v>}, v>} with v = 1 unless given."""
    B = a.algebra
    v = B.one if value is None else value
    inner = Name.from_pairs(B, [(a, v), (b, v)])
    return Name.from_pairs(B, [(a, v), (inner, v)])


def op_components(n: Name) -> Optional[tuple[Name, Name]]:
    """Recover (a, b) when ``n`` has exactly the shape of ``op_name(a, b)``."""
    if len(n.entries) != 2 or any(not v.is_one() for _, v in n.entries):
        return None
    (x, _), (y, _) = n.entries
    for a, inner in ((x, y), (y, x)):
        if inner.get(a) is not None and len(inner) <= 2 and all(v.is_one() for _, v in inner.entries):
            rest = [c for c in inner.dom if c != a]
            b = rest[0] if rest else a
            if op_name(a, b) == n:
                return a, b
    return None


def generic_name(algebra: RegularOpenAlgebra) -> Name:
    """The canonical name for the generic filter."""
    P = algebra.base
    codes = condition_codes(P)
    return Name.from_pairs(algebra, [(check_name(codes[p], algebra), algebra.e(p)) for p in P.elements])


def empty_name(algebra: RegularOpenAlgebra) -> Name:
    return Name.empty(algebra)


def subalgebra_pool(algebra: RegularOpenAlgebra, size: int = 4) -> list[AlgebraElement]:
    """A deterministic small subalgebra: {0, a, -a, 1} for the first atom a."""
    if len(algebra) <= size:
        return list(algebra.carrier)
    if size != 4:
        raise ValueError("only four-element subalgebras are supported")
    a = algebra.atoms[0]
    return sorted({algebra.zero, a, ~a, algebra.one}, key=AlgebraElement.sort_key)


def enumerate_names(algebra: RegularOpenAlgebra, max_rank: int,
                    pool: Optional[Sequence[AlgebraElement]] = None, cap: int = 200_000) -> list[Name]:
    """Every name of rank <= max_rank whose values come from ``pool`` (default: all of B)."""
    values = list(algebra.carrier if pool is None else pool)
    for v in values:
        if v.algebra is not algebra:
            raise MixedAlgebras("pool element from another algebra")
    names = [Name.empty(algebra)]
    for _ in range(2, max_rank + 1):
        lower = list(names)
        total = (len(values) + 1) ** len(lower)
        if total > cap:
            raise PoolTooLarge(f"{total} names of rank <= {max_rank} exceed the cap {cap}")
        found = set(names)
        for choice in product([None] + values, repeat=len(lower)):
            found.add(Name.from_pairs(algebra, [(c, v) for c, v in zip(lower, choice) if v is not None]))
        names = sorted(found, key=lambda n: n.key)
    return sorted(names, key=lambda n: n.key)


def domain_closure(names: Iterable[Name]) -> list[Name]:
    """All names reachable through domains (excluding the inputs unless reachable)."""
    out: set = set()
    stack = [c for n in names for c in n.dom]
    while stack:
        c = stack.pop()
        if c not in out:
            out.add(c)
            stack.extend(c.dom)
    return sorted(out, key=lambda n: n.key)


def nice_name(z: Name, a: Name) -> Name:
    """The nice name for z inside a: domain dom(a), value sum over dom(z) of z(t)[t=s][s in a]."""
    from .semantics import BooleanValuer

    if z.algebra is not a.algebra:
        raise MixedAlgebras("names over different algebras")
    B = a.algebra
    val = BooleanValuer(B)
    pairs = []
    for s in a.dom:
        member = val.member(s, a)
        pairs.append((s, B.big_sum(v & val.equal(t, s) & member for t, v in z.entries)))
    return Name.from_pairs(B, pairs)
