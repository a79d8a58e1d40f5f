"""Exhaustive enumeration of small forests for oracle tests.

Shapes are nested tuples: a forest is a tuple of trees and a tree is the
tuple of its child trees, both left to right. ``labelled`` turns a shape
into the ``(value, children)`` form accepted by
:func:`sortheap.core.from_nested`.
"""

from __future__ import annotations

from functools import lru_cache
from itertools import permutations


@lru_cache(maxsize=None)
def forests(n: int) -> tuple:
    """All ordered forests with exactly ``n`` nodes (Catalan(n) of them)."""
    if n == 0:
        return ((),)
    out = []
    # first tree has k nodes: a root over a forest of k-1 nodes
    for k in range(1, n + 1):
        for kids in forests(k - 1):
            for rest in forests(n - k):
                out.append((kids,) + rest)
    return tuple(out)


def forests_upto(n: int):
    for m in range(1, n + 1):
        yield from forests(m)


def size(shape) -> int:
    return sum(1 + size(t) for t in shape)


def labelled(shape, keys) -> list:
    """Attach ``keys`` in preorder: ``[(key, [children...]), ...]``."""
    it = iter(keys)

    def tree(t):
        v = next(it)
        return (v, [tree(c) for c in t])
    return [tree(t) for t in shape]


def _heap_ordered(item) -> bool:
    v, kids = item
    return all(v < k[0] and _heap_ordered(k) for k in kids)


def heap_labellings(shape):
    """Every assignment of keys ``0..n-1`` that respects heap order."""
    n = size(shape)
    for perm in permutations(range(n)):
        nested = labelled(shape, perm)
        if all(_heap_ordered(t) for t in nested):
            yield nested


def heap_forests_upto(n: int):
    """Heap-ordered forests with distinct keys, every shape and key order."""
    for shape in forests_upto(n):
        yield from heap_labellings(shape)


def random_shape(n: int, rng) -> tuple:
    """Random ordered forest of ``n`` nodes.

    Node ``i`` becomes a new root or the child of a uniformly chosen earlier
    node (biased towards the previous node so deep paths occur), at a random
    position among its siblings. ``rng`` is a :class:`random.Random`.
    """
    kids: list[list[int]] = [[] for _ in range(n + 1)]  # slot n is the virtual root
    for i in range(n):
        p = n if i == 0 else rng.choice((n, i - 1, rng.randrange(i)))
        kids[p].insert(rng.randint(0, len(kids[p])), i)

    def tree(x):
        return tuple(tree(c) for c in kids[x])
    return tree(n)
