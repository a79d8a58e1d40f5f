"""Forest storage with handles, cost accounting and invariant checking.

Insert and Decrease-Key are fixed by the pointer model: Insert adds a new
leftmost root, Decrease-Key cuts the node (subtree intact), lowers its key
and makes it the leftmost root. Both cost exactly 1. Heap variants differ
only in how Extract-Min combines the roots, see :mod:`sortheap.sort_heap`
and :mod:`sortheap.pairing_heap`.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import NamedTuple

from ._backend import NIL, Forest


class HeapError(Exception):
    """Base class for heap misuse."""


class StaleHandleError(HeapError, KeyError):
    pass


class DomainError(HeapError, ValueError):
    pass


class StructureError(HeapError):
    pass


class UnderflowError(HeapError, IndexError):
    pass


class CapacityError(HeapError, MemoryError):
    pass


class NodeHandle(NamedTuple):
    """Opaque reference to a live node: arena slot plus reuse generation."""

    index: int
    generation: int


@dataclass
class CostLedger:
    inserts: int = 0
    decrease_keys: int = 0
    extract_mins: int = 0
    extract_min_actual_cost: int = 0
    per_op_trace: list | None = None

    def record(self, kind: str, cost: int) -> None:
        if kind == "insert":
            self.inserts += 1
        elif kind == "decrease_key":
            self.decrease_keys += 1
        elif kind == "extract_min":
            self.extract_mins += 1
            self.extract_min_actual_cost += cost
        else:
            raise ValueError(kind)
        if self.per_op_trace is not None:
            self.per_op_trace.append((kind, cost))

    @property
    def total(self) -> int:
        return self.inserts + self.decrease_keys + self.extract_min_actual_cost


def handle_of(forest, i: int) -> NodeHandle:
    return NodeHandle(i, forest.generation(i))


def resolve(forest, h: NodeHandle) -> int:
    """Slot index of ``h``; raises :class:`StaleHandleError` if not live."""
    i, gen = h
    if not forest.is_live(i) or forest.generation(i) != gen:
        raise StaleHandleError(f"handle {tuple(h)} is not live")
    return i


def insert(forest, value: int) -> int:
    try:
        return forest.insert(value)
    except MemoryError as exc:
        raise CapacityError(str(exc)) from exc


def decrease_key(forest, i: int, delta: int) -> None:
    if delta < 0:
        raise DomainError(f"negative delta {delta}")
    forest.decrease_key(i, delta)


def detach_subtree(forest, i: int) -> None:
    """Cut ``i`` from its parent; a root is left in place."""
    if forest.parent(i) != NIL:
        forest.cut(i)
        forest.push_root(i)


def attach_leftmost_child(forest, parent: int, child: int) -> None:
    if forest.parent(child) != NIL:
        raise StructureError(f"node {child} is not a root")
    if parent == child:
        raise StructureError("cannot attach a node to itself")
    if not forest.less(parent, child):
        raise StructureError(f"attaching {child} under {parent} breaks heap order")
    forest.cut(child)
    forest.link(parent, child)


def pair(forest, a: int, b: int) -> int:
    if a == b:
        raise StructureError("pair needs two distinct roots")
    for x in (a, b):
        if forest.parent(x) != NIL or not forest.is_live(x):
            raise StructureError(f"node {x} is not a root")
    return forest.pair(a, b)


def validate(forest) -> list[str]:
    """Return every violated forest invariant as a message; empty when sound."""
    problems: list[str] = []
    seen: set[int] = set()
    size_ok = forest.track_sizes

    def walk_siblings(first: int, parent: int, where: str) -> list[int]:
        out = []
        prev = NIL
        x = first
        while x != NIL:
            if x in seen:
                via = f"right_sibling of node {prev}" if prev != NIL else "first link"
                problems.append(f"node {x}: reached twice via {via} ({where})")
                return out
            if not forest.is_live(x):
                problems.append(f"node {x}: dead slot linked ({where})")
                return out
            seen.add(x)
            if forest.left_sibling(x) != prev:
                problems.append(
                    f"node {x}: left_sibling {forest.left_sibling(x)} != {prev} ({where})")
            if forest.parent(x) != parent:
                problems.append(
                    f"node {x}: parent {forest.parent(x)} != {parent} ({where})")
            if parent != NIL and not forest.less(parent, x):
                problems.append(f"node {x}: heap order violated under {parent}")
            out.append(x)
            prev = x
            x = forest.right_sibling(x)
        return out

    roots = walk_siblings(forest.first_root, NIL, "root list")
    if len(roots) != forest.root_count:
        problems.append(f"root_count {forest.root_count} != {len(roots)} roots linked")
    sizes: dict[int, int] = {}
    kids: dict[int, list[int]] = {}
    stack = [(r, False) for r in roots]
    while stack:
        x, done = stack.pop()
        if done:
            s = 1 + sum(sizes.get(c, 0) for c in kids[x])
            sizes[x] = s
            if size_ok and forest.subtree_size(x) != s:
                problems.append(f"node {x}: subtree_size {forest.subtree_size(x)} != {s}")
            continue
        stack.append((x, True))
        kids[x] = walk_siblings(forest.leftmost_child(x), x, f"children of {x}")
        stack.extend((c, False) for c in kids[x])
    if len(seen) != forest.n:
        problems.append(f"size {forest.n} != {len(seen)} reachable nodes")
    return problems


class HeapBase:
    """Common handle-based surface for heaps built on a forest kernel."""

    def __init__(self, *, forest_cls=None, track_sizes: bool = False,
                 trace: bool = False):
        cls = forest_cls or Forest
        self.forest = cls(track_sizes=track_sizes)
        self.ledger = CostLedger(per_op_trace=[] if trace else None)

    def __len__(self) -> int:
        return self.forest.n

    def insert(self, value: int) -> NodeHandle:
        i = insert(self.forest, value)
        self.ledger.record("insert", 1)
        return NodeHandle(i, self.forest.generation(i))

    def decrease_key(self, h: NodeHandle, delta: int) -> None:
        i = resolve(self.forest, h)
        decrease_key(self.forest, i, delta)
        self.ledger.record("decrease_key", 1)

    def key(self, h: NodeHandle) -> int:
        return self.forest.value(resolve(self.forest, h))

    def is_live(self, h: NodeHandle) -> bool:
        i, gen = h
        return self.forest.is_live(i) and self.forest.generation(i) == gen

    def validate(self) -> list[str]:
        return validate(self.forest)

    def _check_nonempty(self) -> None:
        if self.forest.n == 0:
            raise UnderflowError("extract_min on empty heap")


def to_nested(forest, values: bool = True):
    """Forest as nested tuples ``(value, children...)`` in left-to-right order."""
    def node(x):
        head = forest.value(x) if values else None
        return (head, tuple(node(c) for c in forest.children(x)))
    return tuple(node(r) for r in forest.roots())


def from_nested(nested, forest_cls=None, track_sizes: bool = False):
    """Build a forest from ``[(value, [children...]), ...]`` (left to right).

    Returns ``(forest, order)`` where ``order`` lists slot indices in
    preorder. Nodes are allocated in preorder so ties resolve by that order.
    """
    cls = forest_cls or Forest
    forest = cls(track_sizes=track_sizes)
    order: list[int] = []

    def build(item):
        value, kids = item
        i = forest.new_node(value)
        order.append(i)
        built = [build(k) for k in kids]
        for c in reversed(built):
            forest.link(i, c)
        return i

    tops = [build(t) for t in nested]
    for r in reversed(tops):
        forest.push_root(r)
    return forest, order
