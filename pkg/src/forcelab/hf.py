"""Hereditarily finite sets as nested frozensets.

An HF set is just a ``frozenset`` whose members are HF sets.  Ordered pairs use
the two-element encoding ``<a, b> = {a, {a, b}}``, which is what the ``op`` name
constructor valuates to.
"""
from __future__ import annotations

from functools import lru_cache
from typing import Iterable, Optional

HFSet = frozenset

EMPTY: HFSet = frozenset()


@lru_cache(maxsize=None)
def hf_rank(x: HFSet) -> int:
    return max((hf_rank(y) + 1 for y in x), default=0)


@lru_cache(maxsize=None)
def hf_str(x: HFSet) -> str:
    """Canonical text form, e.g. ``{}`` and ``{{},{{}}}``; members sorted by key."""
    return "{" + ",".join(hf_str(y) for y in hf_sorted(x)) + "}"


def hf_key(x: HFSet) -> tuple[int, str]:
    return (hf_rank(x), hf_str(x))


def hf_sorted(xs: Iterable[HFSet]) -> list[HFSet]:
    return sorted(xs, key=hf_key)


@lru_cache(maxsize=None)
def ordinal(n: int) -> HFSet:
    """The von Neumann ordinal n = {0, ..., n-1}."""
    out = EMPTY
    for _ in range(n):
        out = out | {out}
    return out


def hf_set(*members: HFSet) -> HFSet:
    return frozenset(members)


def pair(a: HFSet, b: HFSet) -> HFSet:
    return frozenset({a, frozenset({a, b})})


def unpair(x: HFSet) -> Optional[tuple[HFSet, HFSet]]:
    """Inverse of :func:`pair`, or None when ``x`` is not a pair."""
    if len(x) != 2:
        return None
    u, v = tuple(x)
    for a, ab in ((u, v), (v, u)):
        if a in ab and len(ab) <= 2:
            rest = ab - {a}
            b = next(iter(rest)) if rest else a
            return a, b
    return None


def transitive_closure(xs: Iterable[HFSet]) -> frozenset:
    """All members, members of members, and so on (not the inputs themselves)."""
    out: set = set()
    stack = [y for x in xs for y in x]
    while stack:
        y = stack.pop()
        if y not in out:
            out.add(y)
            stack.extend(y)
    return frozenset(out)


def parse_hf(text: str) -> HFSet:
    """Read the brace notation produced by :func:`hf_str`."""
    pos = 0

    def read() -> HFSet:
        nonlocal pos
        if text[pos] != "{":
            raise ValueError(f"expected '{{' at offset {pos}")
        pos += 1
        items = []
        while text[pos] != "}":
            items.append(read())
            if text[pos] == ",":
                pos += 1
        pos += 1
        return frozenset(items)

    text = "".join(text.split())
    out = read()
    if pos != len(text):
        raise ValueError("trailing characters after HF set")
    return out
