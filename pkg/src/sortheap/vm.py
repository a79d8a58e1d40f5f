"""Interpreter for the pure-heap suboperation set.

A fixed number of cursors start at the leftmost root and drive an
Extract-Min through twelve unit-cost instructions. In strict mode every
precondition must have been established by an earlier check on the same
cursor (``HasParent`` before ``Pair``/``MoveToParent``, ``Compare`` before
``Pair``, and so on); a cursor loses its facts when it moves or is ``Set``,
and every fact is dropped after a ``Pair``. Lenient mode only checks that
the precondition is actually true.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from ._backend import NIL
from .sort_heap import block_partition, block_size

CHECKS = ("HasParent", "HasLeftSibling", "HasRightSibling", "HasChildren")
MOVES = ("MoveToParent", "MoveToLeftmostChild", "MoveToRightSibling", "MoveToLeftSibling")
OPCODES = CHECKS + ("Compare", "Pair", "Set") + MOVES + ("End",)

_FACT_TRUE = {
    "HasParent": ("has_parent", "is_root"),
    "HasLeftSibling": ("has_left_sibling", "no_left_sibling"),
    "HasRightSibling": ("has_right_sibling", "no_right_sibling"),
    "HasChildren": ("has_children", "no_children"),
}
_MOVE_NEEDS = {
    "MoveToParent": "has_parent",
    "MoveToLeftmostChild": "has_children",
    "MoveToRightSibling": "has_right_sibling",
    "MoveToLeftSibling": "has_left_sibling",
}


class VMError(Exception):
    """Invalid program: names the instruction index and what was missing."""

    def __init__(self, index: int, subop, reason: str):
        super().__init__(f"instruction {index} {subop}: {reason}")
        self.index = index
        self.subop = subop
        self.reason = reason


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class Subop:
    op: str
    args: tuple[int, ...] = ()
    result: bool | None = None
    rank_incremented: bool | None = None

    def __str__(self):
        return f"{self.op}({','.join(map(str, self.args))})"

    def line(self, index: int) -> str:
        s = f"{index} {self}"
        if self.result is not None:
            s += " =true" if self.result else " =false"
        if self.rank_incremented:
            s += " rank+"
        return s


@dataclass
class SubopProgram:
    instructions: list[Subop] = field(default_factory=list)

    @property
    def cost(self) -> int:
        return len(self.instructions)

    def count(self, *ops: str) -> int:
        return sum(1 for s in self.instructions if s.op in ops)


def format_trace(trace) -> str:
    return "".join(s.line(i) + "\n" for i, s in enumerate(trace))


class VM:
    """Execution state: forest, cursors and verified facts."""

    def __init__(self, forest, n_cursors: int = 2, strict: bool = True, ranks=None):
        if n_cursors < 1:
            raise ConfigError("need at least one cursor")
        if forest.root_count == 0:
            raise ConfigError("empty forest")
        self.forest = forest
        self.n_cursors = n_cursors
        self.strict = strict
        self.ranks = ranks
        self.cursors = [forest.first_root] * n_cursors
        self.facts: list[set[str]] = [set() for _ in range(n_cursors)]
        self.less: set[tuple[int, int]] = set()
        self.cost = 0
        self.trace: list[Subop] = []
        self.ended = False
        self.pairs = 0
        self.compares = 0

    def _cursor(self, k, i, sub) -> int:
        if not 1 <= i <= self.n_cursors:
            raise VMError(k, sub, f"no cursor {i}")
        return i - 1

    def _forget(self, c: int) -> None:
        self.facts[c].clear()
        self.less = {pq for pq in self.less if c not in pq}

    def _need(self, k, sub, c, fact) -> None:
        if self.strict and fact not in self.facts[c]:
            raise VMError(k, sub, f"fact {fact} not verified for cursor {c + 1}")

    def step(self, sub: Subop):
        """Execute one instruction; returns its boolean result or ``None``."""
        k = self.cost
        if self.ended:
            raise VMError(k, sub, "program already ended")
        f = self.forest
        op = sub.op
        res = None
        inc = None
        if op in CHECKS:
            c = self._cursor(k, sub.args[0], sub)
            x = self.cursors[c]
            if op == "HasParent":
                res = f.parent(x) != NIL
            elif op == "HasLeftSibling":
                res = f.left_sibling(x) != NIL
            elif op == "HasRightSibling":
                res = f.right_sibling(x) != NIL
            else:
                res = f.leftmost_child(x) != NIL
            yes, no = _FACT_TRUE[op]
            self.facts[c].discard(no if res else yes)
            self.facts[c].add(yes if res else no)
        elif op == "Compare":
            a = self._cursor(k, sub.args[0], sub)
            b = self._cursor(k, sub.args[1], sub)
            xa, xb = self.cursors[a], self.cursors[b]
            res = xa == xb or f.less(xa, xb)
            self.compares += 1
            if xa != xb:
                self.less.add((a, b) if res else (b, a))
        elif op == "Pair":
            a = self._cursor(k, sub.args[0], sub)
            b = self._cursor(k, sub.args[1], sub)
            xa, xb = self.cursors[a], self.cursors[b]
            if xa == xb:
                raise VMError(k, sub, "cursors point at the same node")
            self._need(k, sub, a, "is_root")
            self._need(k, sub, b, "is_root")
            if self.strict and (a, b) not in self.less:
                raise VMError(k, sub, f"fact key({a + 1}) < key({b + 1}) not verified")
            if f.parent(xa) != NIL or f.parent(xb) != NIL:
                raise VMError(k, sub, "both cursors must point at roots")
            if not f.less(xa, xb):
                raise VMError(k, sub, "first cursor must hold the smaller key")
            f.cut(xb)
            f.link(xa, xb)
            self.pairs += 1
            if self.ranks is not None:
                inc = self.ranks.apply_pairing(xa, xb)
            for s in self.facts:
                s.clear()
            self.less.clear()
        elif op == "Set":
            a = self._cursor(k, sub.args[0], sub)
            b = self._cursor(k, sub.args[1], sub)
            self.cursors[a] = self.cursors[b]
            self._forget(a)
        elif op in MOVES:
            c = self._cursor(k, sub.args[0], sub)
            x = self.cursors[c]
            self._need(k, sub, c, _MOVE_NEEDS[op])
            if op == "MoveToParent":
                y = f.parent(x)
            elif op == "MoveToLeftmostChild":
                y = f.leftmost_child(x)
            elif op == "MoveToRightSibling":
                y = f.right_sibling(x)
            else:
                y = f.left_sibling(x)
            if y == NIL:
                raise VMError(k, sub, "move target does not exist")
            self.cursors[c] = y
            self._forget(c)
        elif op == "End":
            if self.strict and not any(
                    {"is_root", "no_left_sibling", "no_right_sibling"} <= fs
                    for fs in self.facts):
                raise VMError(k, sub, "no cursor verified to be at the unique root")
            if f.root_count != 1:
                raise VMError(k, sub, f"forest has {f.root_count} roots")
            self.ended = True
        else:
            raise VMError(k, sub, f"unknown opcode {op!r}")
        if sub.result is not None and res is not None and sub.result != res:
            raise VMError(k, sub, f"result {res} differs from recorded {sub.result}")
        self.cost += 1
        self.trace.append(Subop(op, sub.args, res, inc))
        return res


@dataclass
class VMResult:
    forest: object
    cost: int
    trace: list[Subop]
    value: int | None = None


def vm_run(forest, program, n_cursors: int = 2, strict: bool = True, ranks=None,
           remove: bool = True) -> VMResult:
    """Run ``program`` to its ``End``; then remove the unique root.

    ``forest`` is mutated in place.
    """
    instructions = program.instructions if isinstance(program, SubopProgram) else program
    if not instructions:
        raise ConfigError("empty program")
    vm = VM(forest, n_cursors, strict, ranks)
    for sub in instructions:
        vm.step(sub)
    if not vm.ended:
        raise VMError(vm.cost, None, "program does not end with End")
    value = None
    if remove:
        root = forest.first_root
        value = forest.value(root)
        if ranks is not None:
            ranks.forget(root)
        forest.remove_root(root)
    return VMResult(forest, vm.cost, vm.trace, value)


class _Compiler:
    """Emits (and immediately executes) the sort heap's consolidation."""

    def __init__(self, vm: VM):
        if vm.n_cursors < 2:
            raise ConfigError("compiling a consolidation needs n_cursors >= 2")
        self.vm = vm
        self.f = vm.forest
        self.pos: dict[int, int] = {}

    def emit(self, op, *args):
        return self.vm.step(Subop(op, args))

    def to_root(self, c):
        while self.emit("HasParent", c):
            self.emit("MoveToParent", c)

    def nav(self, c, target):
        """Move cursor ``c`` onto the root ``target``."""
        vm = self.vm
        if vm.cursors[c - 1] == target:
            return
        for other in range(1, vm.n_cursors + 1):
            if other != c and vm.cursors[other - 1] == target:
                self.emit("Set", c, other)
                return
        self.to_root(c)
        here = vm.cursors[c - 1]
        if self.pos[target] > self.pos[here]:
            side, move = "HasRightSibling", "MoveToRightSibling"
        else:
            side, move = "HasLeftSibling", "MoveToLeftSibling"
        while vm.cursors[c - 1] != target:
            self.emit(side, c)
            self.emit(move, c)

    def pair(self, win, lose):
        self.nav(2, lose)
        self.nav(1, win)
        self.emit("HasParent", 1)
        self.emit("HasParent", 2)
        self.emit("Compare", 1, 2)
        self.emit("Pair", 1, 2)

    def run(self, b: int, blocks: list | None = None):
        f = self.f
        roots = f.roots()
        self.pos = {r: i for i, r in enumerate(roots)}
        winners = []
        for block in block_partition(roots, b):
            block = sorted(block, key=lambda r: (f.value(r), f.seq(r)))
            if blocks is not None:
                blocks.append(block)
            cur = block[-1]
            for w in reversed(block[:-1]):
                self.pair(w, cur)
                cur = w
            winners.append(cur)
        w = winners[0]
        for x in winners[1:]:
            if f.less(w, x):
                self.pair(w, x)
            else:
                self.pair(x, w)
                w = x
        c = 1 if self.vm.cursors[0] == w else 2
        if self.vm.cursors[c - 1] != w:
            self.nav(c, w)
        self.emit("HasParent", c)
        self.emit("HasLeftSibling", c)
        self.emit("HasRightSibling", c)
        self.emit("End")


def compile_sort_extract_min(forest, n_cursors: int = 2, b: int | None = None,
                             blocks: list | None = None) -> SubopProgram:
    """Strict-mode program performing the sort heap's consolidation.

    The program is produced by running it against a copy of ``forest``;
    ``forest`` itself is not modified. ``b`` defaults to the block size for
    the current heap size.
    """
    if n_cursors < 2:
        raise ConfigError("compiling a consolidation needs n_cursors >= 2")
    if forest.root_count == 0:
        raise ConfigError("empty forest")
    vm = VM(forest.copy(), n_cursors, strict=True)
    _Compiler(vm).run(block_size(forest.n) if b is None else b, blocks)
    return SubopProgram(list(vm.trace))


def vm_consolidator(n_cursors: int = 2, ranks=None, traces: list | None = None):
    """Consolidation hook for :class:`~sortheap.sort_heap.SortHeap`.

    Runs the compiled program on the heap's own forest under strict
    validation and returns ``(cost, compares, pairs)``.
    """
    def consolidate(heap, b, blocks):
        vm = VM(heap.forest, n_cursors, strict=True, ranks=ranks)
        _Compiler(vm).run(b, blocks)
        if traces is not None:
            traces.append(vm.trace)
        return vm.cost, vm.compares, vm.pairs
    return consolidate
