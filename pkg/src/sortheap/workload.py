"""Operation sequences: generation, text format and replay.

A workload is a list of tuples ``("I", value)``, ``("D", insert_index,
delta)`` and ``("X",)``. Decrease-Key targets are referenced by the index of
the Insert that created them, so one file replays on any heap. The text form
has one operation per line: ``I <value>``, ``D <insert-index> <delta>``,
``X``; lines starting with ``#`` are comments.

Randomness comes from SplitMix64 (Steele, Lea and Flood), fixed here so the
same seed yields the same workload on every platform.
"""

from __future__ import annotations

import heapq
import logging
import math
from pathlib import Path

log = logging.getLogger(__name__)

MASK64 = (1 << 64) - 1
VALUE_BITS = 32
MAX_DELTA = 1 << 16


class SplitMix64:
    """SplitMix64 generator: 64-bit state, golden-gamma increment."""

    def __init__(self, seed: int):
        self.state = seed & MASK64

    def next_u64(self) -> int:
        self.state = (self.state + 0x9E3779B97F4A7C15) & MASK64
        z = self.state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
        return z ^ (z >> 31)

    def below(self, n: int) -> int:
        """Uniform integer in ``[0, n)`` by multiply-shift (n < 2**64)."""
        return (self.next_u64() * n) >> 64

    def between(self, lo: int, hi: int) -> int:
        """Uniform integer in ``[lo, hi]``."""
        return lo + self.below(hi - lo + 1)

    def signed64(self) -> int:
        x = self.next_u64()
        return x - (1 << 64) if x >> 63 else x


class _Tracker:
    """Reference model of the live set used while generating workloads."""

    def __init__(self):
        self.values: list[int] = []
        self.live: list[int] = []
        self.pos: dict[int, int] = {}
        self.pq: list[tuple[int, int]] = []

    def insert(self, value: int) -> int:
        idx = len(self.values)
        self.values.append(value)
        self.pos[idx] = len(self.live)
        self.live.append(idx)
        heapq.heappush(self.pq, (value, idx))
        return idx

    def decrease(self, idx: int, delta: int) -> None:
        self.values[idx] -= delta
        heapq.heappush(self.pq, (self.values[idx], idx))

    def extract(self) -> int:
        while True:
            value, idx = heapq.heappop(self.pq)
            if idx in self.pos and self.values[idx] == value:
                break
        p = self.pos.pop(idx)
        last = self.live.pop()
        if last != idx:
            self.live[p] = last
            self.pos[last] = p
        return idx


def gen_rounds(n: int, rounds: int, seed: int) -> list[tuple]:
    """``n`` inserts, then rounds of 1 Insert, ceil(log2 n) Decrease-Keys, 1 Extract-Min.

    Decrease-Key targets are uniform over live nodes; deltas are uniform in
    ``[0, 2**16]``; values are uniform 32-bit.
    """
    if n < 2:
        raise ValueError("rounds workload needs n >= 2")
    rng = SplitMix64(seed)
    tr = _Tracker()
    ops: list[tuple] = []
    for _ in range(n):
        v = rng.below(1 << VALUE_BITS)
        tr.insert(v)
        ops.append(("I", v))
    dks = math.ceil(math.log2(n))
    for _ in range(rounds):
        v = rng.below(1 << VALUE_BITS)
        tr.insert(v)
        ops.append(("I", v))
        for _ in range(dks):
            idx = tr.live[rng.below(len(tr.live))]
            d = rng.between(0, MAX_DELTA)
            tr.decrease(idx, d)
            ops.append(("D", idx, d))
        tr.extract()
        ops.append(("X",))
    return ops


def gen_monotonic(n: int, rounds: int, seed: int, strategy: str = "model",
                  forest_cls=None) -> list[tuple]:
    """Like :func:`gen_rounds` but Decrease-Keys only target current roots.

    Root status depends on the heap, so a sort heap with ``strategy`` is run
    alongside the generator.
    """
    from .sort_heap import SortHeap

    if n < 2:
        raise ValueError("rounds workload needs n >= 2")
    rng = SplitMix64(seed)
    heap = SortHeap(strategy, forest_cls=forest_cls)
    f = heap.forest
    handles = []
    slot_to_idx: dict[int, int] = {}
    ops: list[tuple] = []

    def ins():
        v = rng.below(1 << VALUE_BITS)
        h = heap.insert(v)
        slot_to_idx[h.index] = len(handles)
        handles.append(h)
        ops.append(("I", v))

    for _ in range(n):
        ins()
    dks = math.ceil(math.log2(n))
    for _ in range(rounds):
        ins()
        for _ in range(dks):
            roots = f.roots()
            slot = roots[rng.below(len(roots))]
            idx = slot_to_idx[slot]
            d = rng.between(0, MAX_DELTA)
            heap.decrease_key(handles[idx], d)
            ops.append(("D", idx, d))
        heap.extract_min()
        ops.append(("X",))
    return ops


def gen_heapsort(n: int, seed: int) -> list[tuple]:
    rng = SplitMix64(seed)
    ops = [("I", rng.signed64()) for _ in range(n)]
    ops += [("X",)] * n
    return ops


def format_workload(ops) -> str:
    lines = ["# sortheap workload v1"]
    for op in ops:
        lines.append(" ".join(str(x) for x in op))
    return "\n".join(lines) + "\n"


def write_workload(ops, path) -> None:
    Path(path).write_text(format_workload(ops))


class WorkloadError(ValueError):
    pass


def parse_workload(text: str) -> list[tuple]:
    ops: list[tuple] = []
    inserts = 0
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        try:
            if parts[0] == "I" and len(parts) == 2:
                ops.append(("I", int(parts[1])))
                inserts += 1
            elif parts[0] == "D" and len(parts) == 3:
                idx, d = int(parts[1]), int(parts[2])
                if d < 0:
                    raise WorkloadError(f"line {lineno}: negative delta {d}")
                if not 0 <= idx < inserts:
                    raise WorkloadError(f"line {lineno}: insert #{idx} does not exist yet")
                ops.append(("D", idx, d))
            elif parts == ["X"]:
                ops.append(("X",))
            else:
                raise WorkloadError(f"line {lineno}: cannot parse {raw!r}")
        except ValueError as exc:
            if isinstance(exc, WorkloadError):
                raise
            raise WorkloadError(f"line {lineno}: cannot parse {raw!r}") from exc
    return ops


def read_workload(path) -> list[tuple]:
    return parse_workload(Path(path).read_text())


def replay(ops, heap, on_op=None) -> list[int]:
    """Run ``ops`` on ``heap``; returns the Extract-Min values in order.

    ``heap`` needs ``insert``, ``decrease_key``, ``extract_min`` and
    ``is_live``. Decrease-Keys on nodes that are already gone are skipped
    with a warning. ``on_op(index, op)`` is called after each operation.
    """
    handles = []
    out = []
    for k, op in enumerate(ops):
        kind = op[0]
        if kind == "I":
            handles.append(heap.insert(op[1]))
        elif kind == "D":
            h = handles[op[1]]
            if not heap.is_live(h):
                log.warning("op %d: decrease-key target #%d already extracted; skipped", k, op[1])
                continue
            heap.decrease_key(h, op[2])
        elif kind == "X":
            out.append(heap.extract_min())
        else:
            raise WorkloadError(f"op {k}: unknown kind {kind!r}")
        if on_op is not None:
            on_op(k, op)
    return out


def reference_extracts(ops) -> list[int]:
    """Extract-Min values of ``ops`` computed with :mod:`heapq`."""
    tr = _Tracker()
    out = []
    for op in ops:
        if op[0] == "I":
            tr.insert(op[1])
        elif op[0] == "D":
            if op[1] in tr.pos:
                tr.decrease(op[1], op[2])
        else:
            out.append(tr.values[tr.extract()])
    return out
