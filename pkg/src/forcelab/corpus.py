"""Standard posets and generated corpora of small preorders."""
from __future__ import annotations

import random
from itertools import permutations
from typing import Iterator

from .order import Poset, bits

LETTERS = "abcdefghijklmnopqrstuvwxyz"


def cohen(n: int) -> Poset:
    """Binary strings of length <= n ordered by reverse extension; the empty string is ``root``."""
    strings = [""]
    for k in range(1, n + 1):
        strings += [format(i, f"0{k}b") for i in range(2 ** k)]
    ident = {s: s or "root" for s in strings}
    pairs = [(ident[s], ident[s[:-1]]) for s in strings if s]
    return Poset(ident.values(), pairs, top="root", name=f"cohen{n}")


def antichain(n: int) -> Poset:
    return Poset(LETTERS[:n], name=f"antichain{n}")


def chain(n: int) -> Poset:
    """a < b < c ... with the last letter on top."""
    elems = LETTERS[:n]
    return Poset(elems, zip(elems, elems[1:]), top=elems[-1], name=f"chain{n}")


def topped_antichain(n: int) -> Poset:
    """n pairwise incompatible conditions below a common top ``t``."""
    elems = list(LETTERS[:n])
    return Poset(elems + ["t"], [(e, "t") for e in elems], top="t", name=f"fan{n}")


def standard_posets() -> dict[str, Poset]:
    out = {}
    for P in (cohen(1), cohen(2), cohen(3)):
        out[P.name] = P
    for n in range(1, 6):
        out[f"antichain{n}"] = antichain(n)
        out[f"chain{n}"] = chain(n)
    for n in range(2, 5):
        out[f"fan{n}"] = topped_antichain(n)
    return out


# exhaustive generation up to isomorphism

def _canonical(down: tuple[int, ...]) -> tuple[int, ...]:
    n = len(down)
    best = None
    for perm in permutations(range(n)):
        new = [0] * n
        for i in range(n):
            m = 0
            for j in bits(down[i]):
                m |= 1 << perm[j]
            new[perm[i]] = m
        code = tuple(new)
        if best is None or code < best:
            best = code
    return best


def _extensions(down: tuple[int, ...]) -> Iterator[tuple[int, ...]]:
    n = len(down)
    up = [0] * n
    for i in range(n):
        for j in bits(down[i]):
            up[j] |= 1 << i
    closed_down = [m for m in range(1 << n) if all(down[i] & ~m == 0 for i in bits(m))]
    closed_up = [m for m in range(1 << n) if all(up[i] & ~m == 0 for i in bits(m))]
    for D in closed_down:
        for U in closed_up:
            # x sits above D and below U, so D must already lie below U
            if all(down[u] & D == D for u in bits(U)):
                new = list(down) + [D | (1 << n)]
                for u in bits(U):
                    new[u] |= new[n]
                yield tuple(new)


def preorder_classes(n: int) -> list[tuple[int, ...]]:
    """Canonical down-mask tuples, one per isomorphism class of preorders on n points."""
    if n <= 0:
        return []
    classes = {(1,)}
    for _ in range(1, n):
        classes = {_canonical(ext) for d in classes for ext in _extensions(d)}
    return sorted(classes)


def poset_from_masks(down: tuple[int, ...], name: str) -> Poset:
    elems = LETTERS[: len(down)]
    pairs = [(elems[j], elems[i]) for i in range(len(down)) for j in bits(down[i]) if i != j]
    tops = [elems[i] for i in range(len(down)) if down[i] == (1 << len(down)) - 1]
    return Poset(elems, pairs, top=tops[0] if tops else None, name=name)


def exhaustive_preorders(max_n: int, min_n: int = 1) -> list[Poset]:
    """One preorder per isomorphism class for every size in [min_n, max_n]."""
    out = []
    for n in range(min_n, max_n + 1):
        for k, down in enumerate(preorder_classes(n)):
            out.append(poset_from_masks(down, f"pre{n}_{k}"))
    return out


def random_preorders(count: int, max_n: int, seed: int = 0, min_n: int = 1) -> list[Poset]:
    rng = random.Random(seed)
    out = []
    for k in range(count):
        n = rng.randint(min_n, max_n)
        elems = LETTERS[:n]
        density = rng.choice([0.1, 0.2, 0.3, 0.5])
        pairs = [(a, b) for a in elems for b in elems if a != b and rng.random() < density]
        P = Poset(elems, pairs, name=f"rand{seed}_{k}")
        tops = [p for p in P.elements if len(P.down(p)) == len(P)]
        if tops:
            P = Poset(elems, pairs, top=tops[0], name=P.name)
        out.append(P)
    return out


def with_top(posets) -> list[Poset]:
    return [P for P in posets if P.top is not None]
