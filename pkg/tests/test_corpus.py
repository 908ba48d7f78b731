from itertools import permutations

import pytest

from forcelab.corpus import exhaustive_preorders, preorder_classes, random_preorders, standard_posets


def _brute_classes(n):
    """Count preorders on n points up to isomorphism by canonical relabelling."""
    points = range(n)
    pairs = [(a, b) for a in points for b in points if a != b]
    seen = set()
    for m in range(1 << len(pairs)):
        rel = {pairs[i] for i in range(len(pairs)) if m >> i & 1}
        if any((a, c) not in rel for a, b in rel for b2, c in rel if b == b2 and a != c):
            continue
        seen.add(min(tuple(sorted((s[a], s[b]) for a, b in rel)) for s in permutations(points)))
    return len(seen)


@pytest.mark.parametrize("n, count", [(1, 1), (2, 3), (3, 9), (4, 33), (5, 139)])
def test_class_counts(n, count):
    assert len(preorder_classes(n)) == count


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_class_counts_match_brute_force(n):
    assert len(preorder_classes(n)) == _brute_classes(n)


def test_exhaustive_corpus_sizes():
    assert len(exhaustive_preorders(4)) == 46
    assert len(exhaustive_preorders(5)) == 185


def test_random_corpus_is_seeded():
    a = random_preorders(20, 7, seed=3)
    b = random_preorders(20, 7, seed=3)
    assert [(P.elements, P.relation()) for P in a] == [(P.elements, P.relation()) for P in b]
    assert all(1 <= len(P) <= 7 for P in a)


def test_standard_posets():
    S = standard_posets()
    assert len(S["cohen2"]) == 7 and S["cohen2"].top == "root"
    assert len(S["fan3"]) == 4
