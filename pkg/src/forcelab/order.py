"""Finite preorders, filters, genericity and order embeddings.

Everything is stored as bitmasks over the sorted element list, so a subset of a
poset is just an int.  Public functions accept and return frozensets of element
identifiers; the ``*_mask`` helpers are for the hot loops elsewhere.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Iterable, Iterator, Mapping, Optional, Sequence

import networkx as nx

from .errors import (EmptyPoset, NotAnEmbedding, NotGeneric, NotGreatest,
                     UnknownElement, WrongEmbeddingKind)

# Above this size the definitional generic enumeration (all subsets) is skipped.
DEFINITIONAL_LIMIT = 12


def bits(mask: int) -> Iterator[int]:
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


class Poset:
    """A finite preorder given by generating pairs ``(p, q)`` meaning ``p <= q``.

    The stored relation is the reflexive-transitive closure of the generators.
    """

    def __init__(self, elements: Iterable[str], pairs: Iterable[tuple[str, str]] = (),
                 top: Optional[str] = None, name: str = "",
                 codes: Optional[Mapping[str, object]] = None):
        elems = tuple(sorted(set(elements)))
        if not elems:
            raise EmptyPoset(f"poset {name!r} has no elements")
        self.elements = elems
        self.index = {p: i for i, p in enumerate(elems)}
        self.name = name
        n = len(elems)
        down = [1 << i for i in range(n)]
        for p, q in pairs:
            down[self._idx(q)] |= 1 << self._idx(p)
        # Warshall on bitmasks: if k <= i then everything below k is below i.
        for k in range(n):
            bk = 1 << k
            dk = down[k]
            for i in range(n):
                if down[i] & bk:
                    down[i] |= dk
        self._down = tuple(down)
        up = [0] * n
        for i in range(n):
            for j in bits(down[i]):
                up[j] |= 1 << i
        self._up = tuple(up)
        self.full = (1 << n) - 1
        self.strict = not any(down[i] >> j & 1 and down[j] >> i & 1
                              for i in range(n) for j in range(i + 1, n))
        self.top = None
        if top is not None:
            t = self._idx(top)
            if down[t] != self.full:
                raise NotGreatest(f"{top!r} is not greatest in {name!r}")
            self.top = top
        self.codes = dict(codes) if codes is not None else None
        self._cache: dict = {}

    def _idx(self, p: str) -> int:
        try:
            return self.index[p]
        except KeyError:
            raise UnknownElement(f"{p!r} is not an element of {self.name or 'the poset'}") from None

    # basic access

    def __len__(self):
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)

    def __contains__(self, p):
        return p in self.index

    def __eq__(self, other):
        return (isinstance(other, Poset) and self.elements == other.elements
                and self._down == other._down and self.top == other.top)

    def __hash__(self):
        return hash((self.elements, self._down, self.top))

    def __repr__(self):
        return f"Poset({self.name or '?'}, n={len(self)})"

    def leq(self, p: str, q: str) -> bool:
        return bool(self._down[self._idx(q)] >> self._idx(p) & 1)

    def equivalent(self, p: str, q: str) -> bool:
        return self.leq(p, q) and self.leq(q, p)

    def compatible(self, p: str, q: str) -> bool:
        return bool(self._down[self._idx(p)] & self._down[self._idx(q)])

    def relation(self) -> list[tuple[str, str]]:
        """All pairs ``(p, q)`` with ``p <= q``, in sorted order."""
        return [(self.elements[j], q) for i, q in enumerate(self.elements) for j in bits(self._down[i])]

    # masks

    def mask(self, subset: Iterable[str]) -> int:
        m = 0
        for p in subset:
            m |= 1 << self._idx(p)
        return m

    def members(self, mask: int) -> frozenset[str]:
        return frozenset(self.elements[i] for i in bits(mask))

    def down_mask(self, i: int) -> int:
        return self._down[i]

    def up_mask(self, i: int) -> int:
        return self._up[i]

    def down(self, p: str) -> frozenset[str]:
        return self.members(self._down[self._idx(p)])

    def up(self, p: str) -> frozenset[str]:
        return self.members(self._up[self._idx(p)])

    def upward_closure_mask(self, mask: int) -> int:
        out = 0
        for i in bits(mask):
            out |= self._up[i]
        return out

    def downward_closure_mask(self, mask: int) -> int:
        out = 0
        for i in bits(mask):
            out |= self._down[i]
        return out

    def upward_closure(self, subset: Iterable[str]) -> frozenset[str]:
        return self.members(self.upward_closure_mask(self.mask(subset)))

    def dense_below_mask(self, mask: int) -> int:
        """Conditions p such that every q <= p has some r <= q inside ``mask``."""
        bad = 0
        for i in range(len(self.elements)):
            if not self._down[i] & mask:
                bad |= 1 << i
        out = 0
        for i in range(len(self.elements)):
            if not self._down[i] & bad:
                out |= 1 << i
        return out

    def nothing_below_mask(self, mask: int) -> int:
        """Conditions p with no q <= p inside ``mask``."""
        out = 0
        for i in range(len(self.elements)):
            if not self._down[i] & mask:
                out |= 1 << i
        return out

    # subset predicates (mask level)

    def is_open_mask(self, mask: int) -> bool:
        return self.downward_closure_mask(mask) == mask

    def is_dense_mask(self, mask: int) -> bool:
        return all(self._down[i] & mask for i in range(len(self.elements)))

    def is_antichain_mask(self, mask: int) -> bool:
        idx = list(bits(mask))
        return all(not self._down[a] & self._down[b] for k, a in enumerate(idx) for b in idx[k + 1:])

    def is_maximal_antichain_mask(self, mask: int) -> bool:
        if not self.is_antichain_mask(mask):
            return False
        return all(self._down[i] & self.downward_closure_mask(mask) for i in range(len(self.elements)))

    def is_filter_mask(self, mask: int) -> bool:
        if self.upward_closure_mask(mask) != mask:
            return False
        idx = list(bits(mask))
        return all(self._down[a] & self._down[b] & mask for k, a in enumerate(idx) for b in idx[k + 1:])

    def minimal_mask(self) -> int:
        """Elements p such that every q <= p is also >= p."""
        out = 0
        for i in range(len(self.elements)):
            if self._down[i] & ~self._up[i] == 0:
                out |= 1 << i
        return out

    def minimal_elements(self) -> frozenset[str]:
        return self.members(self.minimal_mask())

    def minimal_classes(self) -> list[int]:
        """Equivalence classes of minimal elements, as masks, in index order."""
        seen = 0
        out = []
        for i in bits(self.minimal_mask()):
            if seen >> i & 1:
                continue
            cls = self._down[i]
            seen |= cls
            out.append(cls)
        return out

    # enumeration

    def maximal_antichain_masks(self) -> list[int]:
        """Maximal antichains are the maximal cliques of the incompatibility graph."""
        if "max_antichains" not in self._cache:
            n = len(self.elements)
            g = nx.Graph()
            g.add_nodes_from(range(n))
            for a in range(n):
                for b in range(a + 1, n):
                    if not self._down[a] & self._down[b]:
                        g.add_edge(a, b)
            masks = set()
            for clique in nx.find_cliques(g):
                m = 0
                for i in clique:
                    m |= 1 << i
                masks.add(m)
            self._cache["max_antichains"] = sorted(masks)
        return self._cache["max_antichains"]

    def maximal_antichains(self) -> list[frozenset[str]]:
        return [self.members(m) for m in self.maximal_antichain_masks()]

    def filter_masks(self) -> list[int]:
        """Every filter, including the empty one, in increasing mask order."""
        if "filters" not in self._cache:
            n = len(self.elements)
            if n <= DEFINITIONAL_LIMIT:
                found = [m for m in range(1 << n) if self.is_filter_mask(m)]
            else:
                # finite directed sets have a least element, so nonempty filters are principal
                found = sorted({0} | {self._up[i] for i in range(n)})
            self._cache["filters"] = found
        return self._cache["filters"]

    def dense_masks(self) -> list[int]:
        n = len(self.elements)
        if n > 16:
            raise ValueError("dense-set enumeration is limited to 16 elements")
        return [m for m in range(1 << n) if self.is_dense_mask(m)]

    def __getstate__(self):
        state = self.__dict__.copy()
        state["_cache"] = {}
        return state


def validate_poset(elements: Iterable[str], pairs: Iterable[tuple[str, str]] = (),
                   top: Optional[str] = None, name: str = "") -> Poset:
    return Poset(elements, pairs, top=top, name=name)


def compatible(P: Poset, p: str, q: str) -> bool:
    return P.compatible(p, q)


def classify_subset(P: Poset, subset: Iterable[str]) -> dict[str, bool]:
    m = P.mask(subset)
    return {
        "open": P.is_open_mask(m),
        "dense": P.is_dense_mask(m),
        "antichain": P.is_antichain_mask(m),
        "maximal_antichain": P.is_maximal_antichain_mask(m),
    }


@dataclass(frozen=True)
class GenericFilter:
    poset: Poset
    members: frozenset

    def __contains__(self, p):
        return p in self.members

    def __iter__(self):
        return iter(sorted(self.members))

    def __len__(self):
        return len(self.members)

    def sorted(self) -> tuple[str, ...]:
        return tuple(sorted(self.members))

    def __repr__(self):
        return "GenericFilter{" + ", ".join(self.sorted()) + "}"


GENERIC_METHODS = ("dense", "open_dense", "antichain", "minimal")


def is_generic_mask(P: Poset, mask: int, method: str = "antichain") -> bool:
    if not P.is_filter_mask(mask):
        return False
    if method == "antichain":
        return all(a & mask for a in P.maximal_antichain_masks())
    if method == "dense":
        return all(d & mask for d in P.dense_masks())
    if method == "open_dense":
        return all(d & mask for d in P.dense_masks() if P.is_open_mask(d))
    if method == "minimal":
        return bool(mask & P.minimal_mask())
    raise ValueError(f"unknown genericity method {method!r}")


def is_generic(P: Poset, subset: Iterable[str], method: str = "antichain") -> bool:
    return is_generic_mask(P, P.mask(subset), method)


def enumerate_generics(P: Poset) -> list[GenericFilter]:
    """All generic filters on ``P`` in sorted order.

    Small posets are searched definitionally (filters meeting every maximal
    antichain) and cross-checked against the principal-filter characterization;
    larger ones use that characterization directly.
    """
    if "generics" in P._cache:
        return P._cache["generics"]
    by_minimal = sorted({P.up_mask(i) for i in bits(P.minimal_mask())})
    if len(P) <= DEFINITIONAL_LIMIT:
        found = [m for m in P.filter_masks() if is_generic_mask(P, m, "antichain")]
        if sorted(found) != by_minimal:
            raise AssertionError(f"generic enumeration disagrees on {P!r}")
    else:
        found = by_minimal
    out = sorted((GenericFilter(P, P.members(m)) for m in found), key=lambda g: g.sorted())
    P._cache["generics"] = out
    return out


@dataclass(frozen=True)
class OrderEmbedding:
    source: Poset
    target: Poset
    mapping: Mapping[str, str]
    kind: str

    def __call__(self, p: str) -> str:
        return self.mapping[p]

    def image_mask(self, mask: int) -> int:
        return self.target.mask(self.mapping[p] for p in self.source.members(mask))


KIND_RANK = {"plain": 0, "complete": 1, "dense": 2}


def check_embedding(P: Poset, Q: Poset, f: Mapping[str, str] | Callable[[str], str]) -> OrderEmbedding:
    """Verify that ``f`` is an embedding and classify it as plain, complete or dense."""
    if callable(f) and not isinstance(f, Mapping):
        mapping = {p: f(p) for p in P.elements}
    else:
        mapping = dict(f)
    for p in P.elements:
        if p not in mapping:
            raise NotAnEmbedding(f"map is undefined at {p!r}")
        if mapping[p] not in Q:
            raise UnknownElement(f"{mapping[p]!r} is not an element of the target")
    for p in P.elements:
        for q in P.elements:
            if P.leq(p, q) and not Q.leq(mapping[p], mapping[q]):
                raise NotAnEmbedding(f"order not preserved: {p} <= {q}")
            if not P.compatible(p, q) and Q.compatible(mapping[p], mapping[q]):
                raise NotAnEmbedding(f"incompatibility not preserved: {p} _|_ {q}")
    emb = OrderEmbedding(P, Q, mapping, "plain")
    image = Q.mask(mapping.values())
    if Q.is_dense_mask(image):
        kind = "dense"
    elif all(Q.is_maximal_antichain_mask(emb.image_mask(a)) for a in P.maximal_antichain_masks()):
        kind = "complete"
    else:
        kind = "plain"
    return OrderEmbedding(P, Q, mapping, kind)


def is_complete_embedding(emb: OrderEmbedding) -> bool:
    """Definitional completeness check, independent of the stored kind."""
    return all(emb.target.is_maximal_antichain_mask(emb.image_mask(a))
               for a in emb.source.maximal_antichain_masks())


def transfer_generic(emb: OrderEmbedding, G: GenericFilter | Iterable[str], direction: str) -> GenericFilter:
    """Pull a generic back along a complete embedding or push it along a dense one."""
    members = G.members if isinstance(G, GenericFilter) else frozenset(G)
    if direction == "pullback":
        if KIND_RANK[emb.kind] < KIND_RANK["complete"]:
            raise WrongEmbeddingKind("pullback needs a complete embedding")
        if not is_generic(emb.target, members):
            raise NotGeneric("input is not generic on the target")
        out = frozenset(p for p in emb.source.elements if emb.mapping[p] in members)
        poset = emb.source
    elif direction == "pushforward":
        if emb.kind != "dense":
            raise WrongEmbeddingKind("pushforward needs a dense embedding")
        if not is_generic(emb.source, members):
            raise NotGeneric("input is not generic on the source")
        out = emb.target.upward_closure(emb.mapping[p] for p in members)
        poset = emb.target
    else:
        raise ValueError(f"unknown direction {direction!r}")
    if not is_generic(poset, out):
        raise NotGeneric(f"{direction} did not produce a generic filter")
    return GenericFilter(poset, out)
