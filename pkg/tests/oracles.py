"""Independent brute-force oracles written from the definitions, using only leq."""
from itertools import combinations

from forcelab.hf import EMPTY, pair


def subsets(xs):
    xs = list(xs)
    for r in range(len(xs) + 1):
        for c in combinations(xs, r):
            yield frozenset(c)


def is_open(P, S):
    return all(q in S for p in S for q in P.elements if P.leq(q, p))


def is_dense(P, S):
    return all(any(P.leq(q, p) for q in S) for p in P.elements)


def compatible(P, p, q):
    return any(P.leq(r, p) and P.leq(r, q) for r in P.elements)


def is_filter(P, S):
    upward = all(q in S for p in S for q in P.elements if P.leq(p, q))
    directed = all(any(r in S and P.leq(r, p) and P.leq(r, q) for r in P.elements) for p in S for q in S)
    return upward and directed


def generics(P):
    """Filters meeting every dense set, by full subset enumeration."""
    dense = [D for D in subsets(P.elements) if is_dense(P, D)]
    return {S for S in subsets(P.elements) if is_filter(P, S) and all(S & D for D in dense)}


def interior_closure(P, S):
    """{p : every q <= p has some r <= q in S}."""
    return frozenset(p for p in P.elements
                     if all(any(P.leq(r, q) and r in S for r in P.elements) for q in P.elements if P.leq(q, p)))


def regular_opens(P):
    return {S for S in subsets(P.elements) if is_open(P, S) and interior_closure(P, S) == S}


def valuate(name, G):
    """i_G(t) = {i_G(s) : <s, u> in t and u meets G}."""
    return frozenset(valuate(c, G) for c, u in name.entries if u.conditions & set(G))


def hf_pair(a, b):
    return pair(a, b)
